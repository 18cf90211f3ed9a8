#pragma once

#include "permadss/inference.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permadss {

struct FixedInput {
    std::string variable;
    double value = 0.0;

    friend bool operator==(const FixedInput&, const FixedInput&) = default;
};

struct Axis {
    std::string variable;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 0;

    /// Coordinate of grid index i; the last index lands exactly on hi.
    double at(std::size_t i) const noexcept;

    friend bool operator==(const Axis&, const Axis&) = default;
};

/// Shape of a 1-D line of outputs, or of every line along one grid axis.
enum class LineShape {
    non_decreasing,
    unimodal,  // rises to a single interior peak, then falls
    other,
};

std::string_view to_string(LineShape s) noexcept;

struct GridPoint {
    std::size_t ix = 0;
    std::size_t iy = 0;
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct GridStats {
    double min = 0.0;
    double max = 0.0;
    GridPoint argmin;
    GridPoint argmax;
    LineShape x_shape = LineShape::other;  // lines along x, one per y
    LineShape y_shape = LineShape::other;  // lines along y, one per x

    friend bool operator==(const GridStats&, const GridStats&) = default;
};

/// Outputs over a steps x steps grid of two inputs with the third fixed.
struct SurfaceGrid {
    FixedInput fixed;
    Axis x_axis;
    Axis y_axis;
    std::vector<std::vector<double>> values;  // values[iy][ix]
    GridStats stats;

    double at(std::size_t ix, std::size_t iy) const { return values.at(iy).at(ix); }
    std::vector<double> row(std::size_t iy) const { return values.at(iy); }  // along x
    std::vector<double> column(std::size_t ix) const;                       // along y

    friend bool operator==(const SurfaceGrid&, const SurfaceGrid&) = default;
};

inline constexpr double kMonotoneTolerance = 1e-6;
inline constexpr std::size_t kDefaultSteps = 21;

/// non_decreasing if every step change is >= -tol; unimodal if the line is
/// non-decreasing up to an interior maximum and non-increasing after it, with
/// the maximum strictly above both ends.
LineShape line_shape(std::span<const double> line, double tol = kMonotoneTolerance);

/// Evaluates `fis` on the uniform grid spanning the full universes of the two
/// axis variables. fixed, x and y must be distinct and together name every
/// input. Throws InputError for duplicate or unknown variables and steps < 2,
/// OutOfRangeError for a fixed value outside its universe. Cells are
/// evaluated on up to `threads` workers (0 = hardware concurrency); the
/// result does not depend on the thread count.
SurfaceGrid sweep(const FisDefinition& fis, const FixedInput& fixed, std::string_view x, std::string_view y,
                  std::size_t steps = kDefaultSteps, std::size_t threads = 0);

/// Recomputes the statistics from g.values.
GridStats grid_stats(const SurfaceGrid& g);

/// Header row `fixed_var,fixed_value,x_var,y_var` and its values, a row of x
/// coordinates (leading cell empty), then one row per y coordinate starting
/// with y. Numbers carry 6 significant digits.
std::string export_csv(const SurfaceGrid& g);

/// The whole grid as JSON with numbers rounded to 6 significant digits.
std::string export_json(const SurfaceGrid& g);

/// Inverse of export_json. Throws InputError on malformed documents.
SurfaceGrid parse_grid_json(std::string_view text);

/// `value` rounded to 6 significant digits, the precision of the exports.
double round_to_export(double value);

}  // namespace permadss
