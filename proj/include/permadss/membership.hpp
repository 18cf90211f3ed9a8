#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permadss {

enum class MembershipKind { triangular, trapezoidal };

/// Piecewise-linear fuzzy set. Triangular sets use the first three
/// breakpoints; the fourth is unused and kept equal to the third.
///
/// Degenerate shapes are legal: `a == b` or `b == c` give one-sided ramps
/// (half triangles) and `a == b == c` is a singleton that is 1 only at b.
class MembershipFunction {
public:
    /// Throws DefinitionError(invalid_breakpoints) unless a <= b <= c, all finite.
    static MembershipFunction triangular(double a, double b, double c);
    /// Throws DefinitionError(invalid_breakpoints) unless a <= b <= c <= d, all finite.
    static MembershipFunction trapezoidal(double a, double b, double c, double d);

    MembershipKind kind() const noexcept { return kind_; }
    /// Breakpoints in declaration order: 3 for triangular, 4 for trapezoidal.
    std::span<const double> params() const noexcept;

    double eval(double x) const noexcept;

    double support_lo() const noexcept { return p_[0]; }
    double support_hi() const noexcept { return p_[3]; }
    /// Midpoint of the core (the set where the degree is 1).
    double peak() const noexcept;

    friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

private:
    MembershipFunction(MembershipKind kind, std::array<double, 4> p) : kind_(kind), p_(p) {}

    MembershipKind kind_;
    std::array<double, 4> p_;
};

inline double eval_mf(const MembershipFunction& mf, double x) noexcept { return mf.eval(x); }

struct Label {
    std::string name;
    MembershipFunction mf;

    friend bool operator==(const Label&, const Label&) = default;
};

/// True for `[A-Za-z_][A-Za-z0-9_-]*`, the names accepted for systems,
/// variables and labels.
bool is_identifier(std::string_view s) noexcept;

/// A named universe [lo, hi] with ordered labels. Construction enforces:
/// lo < hi, label supports inside the universe, unique label names, peaks in
/// non-decreasing order, and that every point of the universe has a label
/// with positive degree.
class LinguisticVariable {
public:
    LinguisticVariable(std::string name, double lo, double hi, std::vector<Label> labels);

    const std::string& name() const noexcept { return name_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

    const std::vector<Label>& labels() const noexcept { return labels_; }
    std::size_t label_count() const noexcept { return labels_.size(); }
    /// Index of the label, or label_count() when absent.
    std::size_t find_label(std::string_view label) const noexcept;

    friend bool operator==(const LinguisticVariable&, const LinguisticVariable&) = default;

private:
    std::string name_;
    double lo_;
    double hi_;
    std::vector<Label> labels_;
};

/// Ruspini partition of [lo, hi] into triangles with equally spaced peaks.
/// The outer labels are half triangles clamped at the universe ends.
LinguisticVariable make_symmetric_partition(std::string name, double lo, double hi,
                                            const std::vector<std::string>& label_names);

struct CoverageReport {
    std::size_t samples = 0;
    /// Minimum over the sample points of the largest label degree.
    double min_max_degree = 0.0;
    /// Sample points where no label has positive degree.
    std::vector<double> uncovered;
    /// max |sum of degrees - 1| over the sample points.
    double ruspini_deviation = 0.0;

    bool covered() const noexcept { return uncovered.empty(); }
    bool is_ruspini(double tol = 1e-9) const noexcept { return ruspini_deviation <= tol; }
};

/// Samples the universe uniformly (endpoints included). Throws InputError if
/// samples < 2.
CoverageReport check_coverage(const LinguisticVariable& v, std::size_t samples);

/// Same check over a raw label list, which need not satisfy the
/// LinguisticVariable invariants (gaps are reported, not rejected).
CoverageReport check_coverage(double lo, double hi, std::span<const Label> labels,
                              std::size_t samples);

}  // namespace permadss
