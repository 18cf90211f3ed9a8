#include "permadss/calibration.hpp"

#include "permadss/membership.hpp"
#include "permadss/permanence.hpp"
#include "permadss/surface.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

namespace permadss {

bool CalibrationReport::all_passed() const noexcept {
    return std::all_of(anchors.begin(), anchors.end(), [](const AnchorResult& a) { return a.passed; });
}

const AnchorResult* CalibrationReport::find(std::string_view id) const noexcept {
    for (const auto& a : anchors)
        if (a.id == id) return &a;
    return nullptr;
}

std::string CalibrationReport::to_text() const {
    std::string out;
    for (const auto& a : anchors)
        out += fmt::format("{} {:<32} measured {:<12.6g} target {:<22} {}\n", a.passed ? "PASS" : "FAIL", a.id,
                           a.measured, a.target, a.description);
    const auto failed = std::count_if(anchors.begin(), anchors.end(), [](const AnchorResult& a) { return !a.passed; });
    out += fmt::format("{} of {} anchors passed\n", anchors.size() - static_cast<std::size_t>(failed), anchors.size());
    return out;
}

std::vector<SweepCase> standard_sweeps() {
    const std::string npv(var::npv), gen(var::gen), div(var::divers);
    std::vector<SweepCase> cases;
    for (double v : {0.0, 10e6, 20e6}) cases.push_back({npv, v, gen, div});
    for (double v : {0.0, 15.0, 30.0}) cases.push_back({gen, v, npv, div});
    for (double v : {0.0, 2.5, 5.0}) cases.push_back({div, v, npv, gen});
    return cases;
}

namespace {

// Most negative step change along any of the lines.
double worst_step(const std::vector<std::vector<double>>& lines) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& l : lines)
        for (std::size_t i = 1; i < l.size(); ++i) worst = std::min(worst, l[i] - l[i - 1]);
    return worst;
}

std::vector<std::vector<double>> columns(const SurfaceGrid& g) {
    std::vector<std::vector<double>> out;
    for (std::size_t ix = 0; ix < g.x_axis.steps; ++ix) out.push_back(g.column(ix));
    return out;
}

SurfaceGrid surface(const FisDefinition& fis, std::string_view fixed, double value, std::string_view x,
                    std::string_view y) {
    return sweep(fis, {std::string(fixed), value}, x, y, kDefaultSteps);
}

class Builder {
public:
    void within(std::string id, std::string description, double measured, double lo, double hi) {
        add(std::move(id), std::move(description), fmt::format("[{}, {}]", lo, hi), measured,
            measured >= lo && measured <= hi);
    }
    void at_least(std::string id, std::string description, double measured, double bound) {
        add(std::move(id), std::move(description), fmt::format(">= {}", bound), measured, measured >= bound);
    }
    void at_most(std::string id, std::string description, double measured, double bound) {
        add(std::move(id), std::move(description), fmt::format("<= {}", bound), measured, measured <= bound);
    }
    void below(std::string id, std::string description, double measured, double bound) {
        add(std::move(id), std::move(description), fmt::format("< {}", bound), measured, measured < bound);
    }
    void add(std::string id, std::string description, std::string target, double measured, bool passed) {
        report.anchors.push_back({std::move(id), std::move(description), std::move(target), measured, passed});
    }

    CalibrationReport report;
};

// Number of distinct (NPV, GEN, DIVERS) label cells covered by AND rules
// that test all three inputs; 27 means the table is complete.
double distinct_cells(const FisDefinition& fis) {
    std::set<std::tuple<std::string, std::string, std::string>> cells;
    for (const auto& r : fis.rules()) {
        if (r.connective != Connective::And || r.antecedent.size() != 3) return -1;
        std::string n, g, d;
        for (const auto& c : r.antecedent) {
            if (c.variable == var::npv) n = c.label;
            if (c.variable == var::gen) g = c.label;
            if (c.variable == var::divers) d = c.label;
        }
        if (!cells.emplace(n, g, d).second) return -1;
    }
    return static_cast<double>(cells.size());
}

}  // namespace

CalibrationReport check_calibration(const FisDefinition& stable, const FisDefinition& growth) {
    Builder b;
    const auto npv = var::npv;
    const auto gen = var::gen;
    const auto div = var::divers;

    b.within("point", "stable, NPV=20e6 GEN=18 DIVERS=4, reference 71.4",
             evaluate_permanence(stable, {20e6, 18.0, 4.0}).output, 66.4, 76.4);

    const auto high_npv = surface(stable, npv, 20e6, gen, div);
    b.within("stable_high_npv.min", "stable NPV=20e6 surface floor, reference 60", high_npv.stats.min, 55, 65);
    b.within("stable_high_npv.max", "stable NPV=20e6 surface peak, reference 85", high_npv.stats.max, 80, 90);
    b.at_least("stable_high_npv.monotone", "stable NPV=20e6 worst step along GEN and DIVERS",
               std::min(worst_step(high_npv.values), worst_step(columns(high_npv))), -kMonotoneTolerance);

    const auto mid_divers = surface(stable, div, 2.5, npv, gen);
    double plateau = std::numeric_limits<double>::infinity();
    for (std::size_t ix = 0; ix < mid_divers.x_axis.steps; ++ix)
        if (mid_divers.x_axis.at(ix) >= 2e7) {
            const auto col = mid_divers.column(ix);
            plateau = std::min(plateau, *std::min_element(col.begin(), col.end()));
        }
    b.at_least("stable_mid_divers.plateau", "stable DIVERS=2.5 minimum over NPV >= 2e7", plateau, 50);
    b.within("stable_mid_divers.max", "stable DIVERS=2.5 surface peak, reference 70", mid_divers.stats.max, 65, 76);

    const auto low_npv = surface(stable, npv, 0.0, gen, div);
    b.at_most("stable_low_npv.max", "stable NPV=0 surface peak, reference 30", low_npv.stats.max, 32);
    b.at_least("stable_low_npv.divers_monotone", "stable NPV=0 worst step along DIVERS", worst_step(columns(low_npv)),
               -kMonotoneTolerance);
    const auto gain_low = low_npv.column(0).back() - low_npv.column(0).front();
    const auto gain_high = low_npv.column(low_npv.x_axis.steps - 1).back() - low_npv.column(low_npv.x_axis.steps - 1).front();
    b.at_least("stable_low_npv.gain", "stable NPV=0 DIVERS gain at GEN=0 minus gain at GEN=30", gain_low - gain_high, 0);

    const auto growth_mid = surface(growth, npv, 10e6, gen, div);
    b.within("growth_mid_npv.max", "growth NPV=10e6 surface peak, reference 70", growth_mid.stats.max, 65, 76);
    double low_div = -std::numeric_limits<double>::infinity();
    for (std::size_t iy = 0; iy < growth_mid.y_axis.steps; ++iy)
        if (growth_mid.y_axis.at(iy) <= 1.25) {
            const auto& row = growth_mid.values[iy];
            low_div = std::max(low_div, *std::max_element(row.begin(), row.end()));
        }
    b.below("growth_mid_npv.low_divers", "growth NPV=10e6 maximum over DIVERS <= 1.25", low_div, 50);
    const auto top = growth_mid.row(growth_mid.y_axis.steps - 1);
    const auto peak = static_cast<std::size_t>(std::max_element(top.begin(), top.end()) - top.begin());
    b.add("growth_mid_npv.unimodal", "growth NPV=10e6 GEN line at DIVERS=5 peaks inside (measured: GEN at peak)",
          "unimodal", growth_mid.x_axis.at(peak), line_shape(top) == LineShape::unimodal);

    const auto growth_high = surface(growth, npv, 20e6, gen, div);
    b.within("growth_high_npv.min", "growth NPV=20e6 surface floor, reference 70", growth_high.stats.min, 66, 76);
    b.at_least("growth_high_npv.max", "growth NPV=20e6 surface peak, reference 95", growth_high.stats.max, 93);

    double dominance = std::numeric_limits<double>::infinity();
    for (const auto& c : standard_sweeps()) {
        const auto s = surface(stable, c.fixed, c.value, c.x, c.y);
        const auto g = surface(growth, c.fixed, c.value, c.x, c.y);
        for (std::size_t iy = 0; iy < s.values.size(); ++iy)
            for (std::size_t ix = 0; ix < s.values[iy].size(); ++ix)
                dominance = std::min(dominance, g.values[iy][ix] - s.values[iy][ix]);
    }
    b.at_least("dominance", "growth minus stable, worst cell over the 9 standard surfaces", dominance,
               -kMonotoneTolerance);

    double ruspini = 0.0;
    bool covered = true;
    for (const auto* fis : {&stable, &growth}) {
        std::vector<const LinguisticVariable*> vars;
        for (const auto& v : fis->inputs()) vars.push_back(&v);
        vars.push_back(&fis->output());
        for (const auto* v : vars) {
            const auto cov = check_coverage(*v, 1001);
            ruspini = std::max(ruspini, cov.ruspini_deviation);
            covered = covered && cov.covered();
        }
    }
    b.add("ruspini", "largest |sum of degrees - 1| over every variable of both systems", "<= 1e-09", ruspini,
          covered && ruspini <= 1e-9);

    b.add("rules.stable", "distinct NPV x GEN x DIVERS cells in the stable rule base", "27", distinct_cells(stable),
          distinct_cells(stable) == 27 && stable.rules().size() == 27);
    b.add("rules.growth", "distinct NPV x GEN x DIVERS cells in the growth rule base", "27", distinct_cells(growth),
          distinct_cells(growth) == 27 && growth.rules().size() == 27);

    return std::move(b.report);
}

CalibrationReport check_calibration(const std::filesystem::path& models_dir) {
    const auto models = PermanenceModels::load(models_dir);
    return check_calibration(models.system(Scenario::stable), models.system(Scenario::growth));
}

}  // namespace permadss
