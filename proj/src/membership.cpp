#include "permadss/membership.hpp"

#include "permadss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace permadss {

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || a > b || b > c)
        throw DefinitionError(DefinitionIssue::invalid_breakpoints,
                              fmt::format("triangle needs finite a <= b <= c, got {} {} {}", a, b, c));
    return MembershipFunction(MembershipKind::triangular, {a, b, c, c});
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d) || a > b ||
        b > c || c > d)
        throw DefinitionError(
            DefinitionIssue::invalid_breakpoints,
            fmt::format("trapezoid needs finite a <= b <= c <= d, got {} {} {} {}", a, b, c, d));
    return MembershipFunction(MembershipKind::trapezoidal, {a, b, c, d});
}

std::span<const double> MembershipFunction::params() const noexcept {
    return {p_.data(), kind_ == MembershipKind::triangular ? 3u : 4u};
}

double MembershipFunction::eval(double x) const noexcept {
    // A triangle is the trapezoid with b == c; p_[2] == p_[3] holds for it,
    // so shift to the trapezoid view.
    const double a = p_[0];
    const double b = p_[1];
    const double c = kind_ == MembershipKind::triangular ? p_[1] : p_[2];
    const double d = p_[3];
    if (!(x >= a && x <= d)) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
}

double MembershipFunction::peak() const noexcept {
    if (kind_ == MembershipKind::triangular) return p_[1];
    return 0.5 * (p_[1] + p_[2]);
}

bool is_identifier(std::string_view s) noexcept {
    if (s.empty()) return false;
    auto alpha = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char ch) {
        return alpha(ch) || (ch >= '0' && ch <= '9') || ch == '-';
    });
}

namespace {

// The set where a membership function is positive is always an interval;
// these flags say whether its endpoints belong to it.
struct PositiveSet {
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;
};

PositiveSet positive_set(const MembershipFunction& mf) {
    auto p = mf.params();
    if (mf.kind() == MembershipKind::triangular)
        return {p[0], p[2], p[0] == p[1], p[1] == p[2]};
    return {p[0], p[3], p[0] == p[1], p[2] == p[3]};
}

bool covers_universe(double lo, double hi, const std::vector<Label>& labels) {
    std::vector<PositiveSet> sets;
    sets.reserve(labels.size());
    for (const auto& l : labels) sets.push_back(positive_set(l.mf));
    std::sort(sets.begin(), sets.end(), [](const PositiveSet& x, const PositiveSet& y) {
        if (x.lo != y.lo) return x.lo < y.lo;
        return x.lo_closed && !y.lo_closed;
    });
    // [lo, reach) is covered; reach itself is covered iff reach_closed.
    double reach = lo;
    bool reach_closed = false;
    for (const auto& s : sets) {
        const bool attaches = s.lo < reach || (s.lo == reach && (s.lo_closed || reach_closed));
        if (!attaches) return false;
        if (s.hi > reach) {
            reach = s.hi;
            reach_closed = s.hi_closed;
        } else if (s.hi == reach) {
            reach_closed = reach_closed || s.hi_closed;
        }
    }
    return reach > hi || (reach == hi && reach_closed);
}

}  // namespace

LinguisticVariable::LinguisticVariable(std::string name, double lo, double hi, std::vector<Label> labels)
    : name_(std::move(name)), lo_(lo), hi_(hi), labels_(std::move(labels)) {
    if (!is_identifier(name_))
        throw DefinitionError(DefinitionIssue::invalid_name, fmt::format("'{}' is not a valid variable name", name_));
    if (!std::isfinite(lo_) || !std::isfinite(hi_) || !(lo_ < hi_))
        throw DefinitionError(DefinitionIssue::empty_universe,
                              fmt::format("variable {} needs lo < hi, got [{}, {}]", name_, lo_, hi_));
    if (labels_.empty())
        throw DefinitionError(DefinitionIssue::no_labels, fmt::format("variable {} has no labels", name_));

    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto& l = labels_[i];
        if (!is_identifier(l.name))
            throw DefinitionError(DefinitionIssue::invalid_name,
                                  fmt::format("'{}' is not a valid label name", l.name));
        if (!seen.insert(l.name).second)
            throw DefinitionError(DefinitionIssue::duplicate_label,
                                  fmt::format("label {} declared twice in {}", l.name, name_));
        if (l.mf.support_lo() < lo_ || l.mf.support_hi() > hi_)
            throw DefinitionError(DefinitionIssue::support_outside_universe,
                                  fmt::format("support [{}, {}] of {}.{} is outside [{}, {}]",
                                              l.mf.support_lo(), l.mf.support_hi(), name_, l.name, lo_, hi_));
        if (i > 0 && l.mf.peak() < labels_[i - 1].mf.peak())
            throw DefinitionError(DefinitionIssue::label_order,
                                  fmt::format("label {}.{} peaks before {}", name_, l.name, labels_[i - 1].name));
    }
    if (!covers_universe(lo_, hi_, labels_))
        throw DefinitionError(DefinitionIssue::uncovered_universe,
                              fmt::format("labels of {} leave part of [{}, {}] with zero membership", name_, lo_, hi_));
}

std::size_t LinguisticVariable::find_label(std::string_view label) const noexcept {
    auto it = std::find_if(labels_.begin(), labels_.end(), [&](const Label& l) { return l.name == label; });
    return static_cast<std::size_t>(it - labels_.begin());
}

LinguisticVariable make_symmetric_partition(std::string name, double lo, double hi,
                                            const std::vector<std::string>& label_names) {
    const std::size_t n = label_names.size();
    if (n < 2) throw InputError(fmt::format("a symmetric partition needs at least 2 labels, got {}", n));
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw DefinitionError(DefinitionIssue::empty_universe, fmt::format("empty universe [{}, {}]", lo, hi));

    std::vector<double> peaks(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) peaks[i] = lo + static_cast<double>(i) * step;
    peaks.back() = hi;

    std::vector<Label> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = peaks[i == 0 ? 0 : i - 1];
        const double right = peaks[i + 1 == n ? i : i + 1];
        labels.push_back({label_names[i], MembershipFunction::triangular(left, peaks[i], right)});
    }
    return LinguisticVariable(std::move(name), lo, hi, std::move(labels));
}

CoverageReport check_coverage(double lo, double hi, std::span<const Label> labels, std::size_t samples) {
    if (samples < 2) throw InputError(fmt::format("coverage check needs at least 2 samples, got {}", samples));
    CoverageReport report;
    report.samples = samples;
    report.min_max_degree = 1.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        double best = 0.0;
        double sum = 0.0;
        for (const auto& l : labels) {
            const double mu = l.mf.eval(x);
            best = std::max(best, mu);
            sum += mu;
        }
        report.min_max_degree = std::min(report.min_max_degree, best);
        if (best <= 0.0) report.uncovered.push_back(x);
        report.ruspini_deviation = std::max(report.ruspini_deviation, std::abs(sum - 1.0));
    }
    return report;
}

CoverageReport check_coverage(const LinguisticVariable& v, std::size_t samples) {
    return check_coverage(v.lo(), v.hi(), v.labels(), samples);
}

}  // namespace permadss
