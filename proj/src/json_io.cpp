#include "permadss/json_io.hpp"

namespace permadss {

using nlohmann::json;

std::string antecedent_text(const FuzzyRule& rule) {
    std::string out;
    for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
        if (i > 0) out += rule.connective == Connective::And ? " and " : " or ";
        out += rule.antecedent[i].variable + " is " + rule.antecedent[i].label;
    }
    return out;
}

json variable_json(const LinguisticVariable& v) {
    json labels = json::array();
    for (const auto& l : v.labels()) {
        const auto p = l.mf.params();
        labels.push_back({{"name", l.name},
                          {"shape", l.mf.kind() == MembershipKind::triangular ? "tri" : "trap"},
                          {"params", std::vector<double>(p.begin(), p.end())}});
    }
    return {{"name", v.name()}, {"range", {v.lo(), v.hi()}}, {"labels", std::move(labels)}};
}

json model_json(Scenario s, const FisDefinition& fis) {
    json inputs = json::array();
    for (const auto& v : fis.inputs()) inputs.push_back(variable_json(v));
    json rules = json::array();
    for (std::size_t i = 0; i < fis.rules().size(); ++i) {
        const auto& r = fis.rules()[i];
        json antecedent = json::array();
        for (const auto& c : r.antecedent) antecedent.push_back({{"variable", c.variable}, {"label", c.label}});
        rules.push_back({{"index", i + 1},
                         {"connective", r.connective == Connective::And ? "and" : "or"},
                         {"antecedent", std::move(antecedent)},
                         {"consequent", {{"variable", r.consequent.variable}, {"label", r.consequent.label}}},
                         {"weight", r.weight}});
    }
    return {{"scenario", to_string(s)},
            {"name", fis.name()},
            {"options",
             {{"and_op", "min"},
              {"or_op", "max"},
              {"implication", "min"},
              {"aggregation", "max"},
              {"defuzz", "centroid"},
              {"resolution", fis.options().resolution}}},
            {"inputs", std::move(inputs)},
            {"output", variable_json(fis.output())},
            {"rules", std::move(rules)}};
}

json evaluation_json(Scenario s, const FisDefinition& fis, const PermanenceInput& in, const InferenceResult& result,
                     TraceOptions opts) {
    json firing = json::array();
    for (std::size_t i = 0; i < result.firing.size(); ++i) {
        if (opts.positive_only && !(result.firing[i] > 0.0)) continue;
        const auto& r = fis.rules()[i];
        firing.push_back({{"rule", i + 1},
                          {"strength", result.firing[i]},
                          {"antecedent", antecedent_text(r)},
                          {"consequent", r.consequent.label}});
    }
    json out{{"scenario", to_string(s)},
             {"inputs", {{"npv", in.npv}, {"gen", in.gen}, {"divers", in.divers}}},
             {"incentive", result.output},
             {"firing", std::move(firing)}};
    if (opts.include_aggregate) {
        std::vector<double> xs, mu;
        xs.reserve(result.aggregate.size());
        mu.reserve(result.aggregate.size());
        for (const auto& smp : result.aggregate) {
            xs.push_back(smp.x);
            mu.push_back(smp.mu);
        }
        out["aggregate"] = {{"x", std::move(xs)}, {"mu", std::move(mu)}};
    }
    return out;
}

}  // namespace permadss
