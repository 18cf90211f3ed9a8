#include "permadss/surface.hpp"

#include "permadss/errors.hpp"

#include "json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace permadss {

using nlohmann::json;

double Axis::at(std::size_t i) const noexcept {
    if (steps < 2 || i + 1 >= steps) return i == 0 ? lo : hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::string_view to_string(LineShape s) noexcept {
    switch (s) {
    case LineShape::non_decreasing: return "non_decreasing";
    case LineShape::unimodal: return "unimodal";
    case LineShape::other: return "other";
    }
    return "other";
}

namespace {

std::optional<LineShape> parse_line_shape(std::string_view s) {
    if (s == "non_decreasing") return LineShape::non_decreasing;
    if (s == "unimodal") return LineShape::unimodal;
    if (s == "other") return LineShape::other;
    return std::nullopt;
}

LineShape combine(const std::vector<LineShape>& shapes) {
    if (std::all_of(shapes.begin(), shapes.end(), [](LineShape s) { return s == LineShape::non_decreasing; }))
        return LineShape::non_decreasing;
    if (std::all_of(shapes.begin(), shapes.end(), [](LineShape s) { return s == LineShape::unimodal; }))
        return LineShape::unimodal;
    return LineShape::other;
}

}  // namespace

std::vector<double> SurfaceGrid::column(std::size_t ix) const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& r : values) out.push_back(r.at(ix));
    return out;
}

LineShape line_shape(std::span<const double> line, double tol) {
    const std::size_t n = line.size();
    bool rising = true;
    for (std::size_t i = 1; i < n; ++i)
        if (line[i] - line[i - 1] < -tol) rising = false;
    if (rising) return LineShape::non_decreasing;

    const auto peak = static_cast<std::size_t>(std::max_element(line.begin(), line.end()) - line.begin());
    if (peak == 0 || peak + 1 == n) return LineShape::other;
    for (std::size_t i = 1; i <= peak; ++i)
        if (line[i] - line[i - 1] < -tol) return LineShape::other;
    for (std::size_t i = peak + 1; i < n; ++i)
        if (line[i] - line[i - 1] > tol) return LineShape::other;
    if (line[peak] <= line.front() + tol || line[peak] <= line.back() + tol) return LineShape::other;
    return LineShape::unimodal;
}

GridStats grid_stats(const SurfaceGrid& g) {
    GridStats s;
    bool first = true;
    for (std::size_t iy = 0; iy < g.values.size(); ++iy)
        for (std::size_t ix = 0; ix < g.values[iy].size(); ++ix) {
            const double v = g.values[iy][ix];
            const GridPoint p{ix, iy, g.x_axis.at(ix), g.y_axis.at(iy), v};
            if (first || v < s.min) {
                s.min = v;
                s.argmin = p;
            }
            if (first || v > s.max) {
                s.max = v;
                s.argmax = p;
            }
            first = false;
        }

    std::vector<LineShape> shapes;
    for (const auto& r : g.values) shapes.push_back(line_shape(r));
    s.x_shape = combine(shapes);
    shapes.clear();
    const std::size_t width = g.values.empty() ? 0 : g.values.front().size();
    for (std::size_t ix = 0; ix < width; ++ix) shapes.push_back(line_shape(g.column(ix)));
    s.y_shape = combine(shapes);
    return s;
}

SurfaceGrid sweep(const FisDefinition& fis, const FixedInput& fixed, std::string_view x, std::string_view y,
                  std::size_t steps, std::size_t threads) {
    if (steps < 2) throw InputError(fmt::format("a surface needs at least 2 steps per axis, got {}", steps));
    if (fixed.variable == x || fixed.variable == y || x == y)
        throw InputError(fmt::format("sweep variables must be distinct, got fixed {} with axes {} and {}", fixed.variable, x, y));
    const auto& inputs = fis.inputs();
    const std::size_t fi = fis.find_input(fixed.variable);
    const std::size_t xi = fis.find_input(x);
    const std::size_t yi = fis.find_input(y);
    for (auto [idx, name] : {std::pair{fi, std::string_view(fixed.variable)}, std::pair{xi, x}, std::pair{yi, y}})
        if (idx == inputs.size()) throw InputError(fmt::format("{} has no input named {}", fis.name(), name));
    if (inputs.size() != 3)
        throw InputError(fmt::format("a surface fixes one input and sweeps two; {} has {} inputs", fis.name(), inputs.size()));
    if (!inputs[fi].contains(fixed.value))
        throw OutOfRangeError(inputs[fi].name(), fixed.value, inputs[fi].lo(), inputs[fi].hi());

    SurfaceGrid g;
    g.fixed = fixed;
    g.x_axis = {std::string(x), inputs[xi].lo(), inputs[xi].hi(), steps};
    g.y_axis = {std::string(y), inputs[yi].lo(), inputs[yi].hi(), steps};
    g.values.assign(steps, std::vector<double>(steps, 0.0));

    auto fill_row = [&](std::size_t iy) {
        std::array<double, 3> in{};
        in[fi] = fixed.value;
        in[yi] = g.y_axis.at(iy);
        for (std::size_t ix = 0; ix < steps; ++ix) {
            in[xi] = g.x_axis.at(ix);
            g.values[iy][ix] = infer(fis, in).output;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, steps);
    if (threads == 1) {
        for (std::size_t iy = 0; iy < steps; ++iy) fill_row(iy);
    } else {
        // Rows are independent; on failure report the lowest failing row so
        // the error does not depend on scheduling.
        std::mutex mu;
        std::size_t failed_row = steps;
        std::exception_ptr failure;
        {
            std::vector<std::jthread> workers;
            for (std::size_t t = 0; t < threads; ++t)
                workers.emplace_back([&, t] {
                    for (std::size_t iy = t; iy < steps; iy += threads) {
                        try {
                            fill_row(iy);
                        } catch (...) {
                            std::lock_guard lock(mu);
                            if (iy < failed_row) {
                                failed_row = iy;
                                failure = std::current_exception();
                            }
                            return;
                        }
                    }
                });
        }
        if (failure) std::rethrow_exception(failure);
    }

    g.stats = grid_stats(g);
    return g;
}

double round_to_export(double value) {
    const auto text = fmt::format("{:.6g}", value);
    return std::strtod(text.c_str(), nullptr);
}

std::string export_csv(const SurfaceGrid& g) {
    std::string out = "fixed_var,fixed_value,x_var,y_var\n";
    out += fmt::format("{},{:.6g},{},{}\n", g.fixed.variable, g.fixed.value, g.x_axis.variable, g.y_axis.variable);
    for (std::size_t ix = 0; ix < g.x_axis.steps; ++ix) out += fmt::format(",{:.6g}", g.x_axis.at(ix));
    out += '\n';
    for (std::size_t iy = 0; iy < g.values.size(); ++iy) {
        out += fmt::format("{:.6g}", g.y_axis.at(iy));
        for (double v : g.values[iy]) out += fmt::format(",{:.6g}", v);
        out += '\n';
    }
    return out;
}

namespace {

json point_json(const GridPoint& p) {
    return {{"ix", p.ix}, {"iy", p.iy}, {"x", round_to_export(p.x)}, {"y", round_to_export(p.y)},
            {"value", round_to_export(p.value)}};
}

json axis_json(const Axis& a) {
    return {{"variable", a.variable}, {"lo", round_to_export(a.lo)}, {"hi", round_to_export(a.hi)}, {"steps", a.steps}};
}

GridPoint point_from(const json& j) {
    return {j.at("ix").get<std::size_t>(), j.at("iy").get<std::size_t>(), j.at("x").get<double>(),
            j.at("y").get<double>(), j.at("value").get<double>()};
}

Axis axis_from(const json& j) {
    return {j.at("variable").get<std::string>(), j.at("lo").get<double>(), j.at("hi").get<double>(),
            j.at("steps").get<std::size_t>()};
}

LineShape shape_from(const json& j) {
    auto s = parse_line_shape(j.get<std::string>());
    if (!s) throw InputError(fmt::format("unknown line shape {}", j.dump()));
    return *s;
}

}  // namespace

std::string export_json(const SurfaceGrid& g) {
    json values = json::array();
    for (const auto& r : g.values) {
        json row = json::array();
        for (double v : r) row.push_back(round_to_export(v));
        values.push_back(std::move(row));
    }
    json doc{
        {"fixed", {{"variable", g.fixed.variable}, {"value", round_to_export(g.fixed.value)}}},
        {"x_axis", axis_json(g.x_axis)},
        {"y_axis", axis_json(g.y_axis)},
        {"values", std::move(values)},
        {"stats",
         {{"min", round_to_export(g.stats.min)},
          {"max", round_to_export(g.stats.max)},
          {"argmin", point_json(g.stats.argmin)},
          {"argmax", point_json(g.stats.argmax)},
          {"x_shape", to_string(g.stats.x_shape)},
          {"y_shape", to_string(g.stats.y_shape)}}},
    };
    return doc.dump();
}

SurfaceGrid parse_grid_json(std::string_view text) {
    try {
        const auto doc = json::parse(text);
        SurfaceGrid g;
        g.fixed = {doc.at("fixed").at("variable").get<std::string>(), doc.at("fixed").at("value").get<double>()};
        g.x_axis = axis_from(doc.at("x_axis"));
        g.y_axis = axis_from(doc.at("y_axis"));
        g.values = doc.at("values").get<std::vector<std::vector<double>>>();
        const auto& st = doc.at("stats");
        g.stats.min = st.at("min").get<double>();
        g.stats.max = st.at("max").get<double>();
        g.stats.argmin = point_from(st.at("argmin"));
        g.stats.argmax = point_from(st.at("argmax"));
        g.stats.x_shape = shape_from(st.at("x_shape"));
        g.stats.y_shape = shape_from(st.at("y_shape"));
        if (g.values.size() != g.y_axis.steps ||
            std::any_of(g.values.begin(), g.values.end(), [&](const auto& r) { return r.size() != g.x_axis.steps; }))
            throw InputError("grid values do not match the axis step counts");
        return g;
    } catch (const json::exception& e) {
        throw InputError(fmt::format("malformed grid JSON: {}", e.what()));
    }
}

}  // namespace permadss
