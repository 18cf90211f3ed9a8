#include "permadss/permanence.hpp"

#include "permadss/errors.hpp"
#include "permadss/fis_text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef PERMADSS_SOURCE_MODELS_DIR
#define PERMADSS_SOURCE_MODELS_DIR "models"
#endif

namespace permadss {

std::string_view to_string(Scenario s) noexcept { return s == Scenario::stable ? "stable" : "growth"; }

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
    if (text == "stable") return Scenario::stable;
    if (text == "growth") return Scenario::growth;
    return std::nullopt;
}

std::string field_name(std::string_view variable) {
    std::string out(variable);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double npv(const CashFlowSchedule& schedule) {
    if (!std::isfinite(schedule.rate) || schedule.rate <= -1.0)
        throw InputError(fmt::format("discount rate must be finite and > -1, got {}", schedule.rate));
    double total = 0.0;
    for (const auto& cf : schedule.flows) {
        if (cf.period < 0) throw InputError(fmt::format("cash-flow period must be >= 0, got {}", cf.period));
        if (!std::isfinite(cf.amount)) throw InputError("cash-flow amounts must be finite");
        total += cf.amount / std::pow(1.0 + schedule.rate, cf.period);
    }
    return total;
}

namespace {

// Rows are GEN low/med/high, columns DIVERS low/med/high.
constexpr ConsequentTable kStable{{
    {{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}},  // NPV low
    {{{3, 3, 4}, {3, 4, 5}, {3, 4, 5}}},  // NPV med
    {{{5, 5, 5}, {5, 5, 6}, {5, 6, 7}}},  // NPV high
}};

constexpr ConsequentTable kGrowth{{
    {{{2, 3, 4}, {2, 3, 5}, {2, 3, 4}}},
    {{{3, 4, 5}, {3, 5, 6}, {3, 5, 5}}},
    {{{6, 6, 7}, {6, 7, 7}, {7, 7, 8}}},
}};

const std::vector<std::string> kLevels{"low", "med", "high"};

LinguisticVariable npv_variable() {
    return LinguisticVariable(
        std::string(var::npv), kNpvMin, kNpvMax,
        {
            {"low", MembershipFunction::trapezoidal(kNpvMin, kNpvMin, 2e6, 10e6)},
            {"med", MembershipFunction::triangular(2e6, 10e6, 20e6)},
            {"high", MembershipFunction::trapezoidal(10e6, 20e6, kNpvMax, kNpvMax)},
        });
}

}  // namespace

const ConsequentTable& consequent_table(Scenario s) noexcept { return s == Scenario::stable ? kStable : kGrowth; }

FisDefinition build_permanence_fis(std::string name, const ConsequentTable& table) {
    std::vector<std::string> out_labels;
    for (int k = 1; k <= 8; ++k) out_labels.push_back(fmt::format("mf{}", k));

    std::vector<LinguisticVariable> inputs;
    inputs.push_back(npv_variable());
    inputs.push_back(make_symmetric_partition(std::string(var::gen), 0.0, kGenMax, kLevels));
    inputs.push_back(make_symmetric_partition(std::string(var::divers), 0.0, kDiversMax, kLevels));
    auto output = make_symmetric_partition(std::string(var::incentive), 0.0, kIncentiveMax, out_labels);

    std::vector<FuzzyRule> rules;
    for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t g = 0; g < 3; ++g)
            for (std::size_t d = 0; d < 3; ++d) {
                const int mf = table[n][g][d];
                if (mf < 1 || mf > 8)
                    throw DefinitionError(DefinitionIssue::unknown_label, fmt::format("consequent mf{} does not exist", mf));
                FuzzyRule rule;
                rule.antecedent = {{std::string(var::npv), kLevels[n]},
                                   {std::string(var::gen), kLevels[g]},
                                   {std::string(var::divers), kLevels[d]}};
                rule.consequent = {std::string(var::incentive), fmt::format("mf{}", mf)};
                rules.push_back(std::move(rule));
            }
    return FisDefinition(std::move(name), std::move(inputs), std::move(output), std::move(rules));
}

FisDefinition build_permanence_fis(Scenario s) {
    return build_permanence_fis(fmt::format("permanence_{}", to_string(s)), consequent_table(s));
}

std::string_view model_filename(Scenario s) noexcept {
    return s == Scenario::stable ? "permanence_stable.fis" : "permanence_growth.fis";
}

std::filesystem::path default_models_dir() {
    if (const char* env = std::getenv("PERMADSS_MODELS_DIR"); env != nullptr && *env != '\0') return env;
    return PERMADSS_SOURCE_MODELS_DIR;
}

FisDefinition load_permanence_fis(Scenario s, const std::filesystem::path& dir) {
    const auto path = dir / model_filename(s);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open model file {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_fis(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.issue(), e.position(), fmt::format("{}: {}", path.string(), e.detail()));
    }
}

PermanenceModels PermanenceModels::load(const std::filesystem::path& dir) {
    return PermanenceModels(load_permanence_fis(Scenario::stable, dir), load_permanence_fis(Scenario::growth, dir));
}

PermanenceModels PermanenceModels::builtin() {
    return PermanenceModels(build_permanence_fis(Scenario::stable), build_permanence_fis(Scenario::growth));
}

namespace {

std::array<std::size_t, 3> input_slots(const FisDefinition& fis) {
    std::array<std::size_t, 3> slots{fis.find_input(var::npv), fis.find_input(var::gen), fis.find_input(var::divers)};
    if (fis.inputs().size() != 3 || std::any_of(slots.begin(), slots.end(), [&](auto i) { return i == fis.inputs().size(); }))
        throw InputError(fmt::format("{} is not a permanence system (needs inputs NPV, GEN, DIVERS)", fis.name()));
    return slots;
}

}  // namespace

InferenceResult evaluate_permanence(const FisDefinition& fis, const PermanenceInput& in) {
    const auto slots = input_slots(fis);
    std::array<double, 3> values{};
    values[slots[0]] = in.npv;
    values[slots[1]] = in.gen;
    values[slots[2]] = in.divers;
    return infer(fis, values);
}

PermanenceInput clamp_input(const FisDefinition& fis, const PermanenceInput& in) {
    const auto slots = input_slots(fis);
    auto clamp = [&](std::size_t slot, double x) {
        const auto& v = fis.inputs()[slot];
        return std::clamp(x, v.lo(), v.hi());
    };
    return {clamp(slots[0], in.npv), clamp(slots[1], in.gen), clamp(slots[2], in.divers)};
}

}  // namespace permadss
