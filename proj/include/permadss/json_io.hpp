#pragma once

#include "permadss/inference.hpp"
#include "permadss/permanence.hpp"

#include "json.hpp"

#include <string>

namespace permadss {

/// "NPV is high and GEN is med and DIVERS is med"
std::string antecedent_text(const FuzzyRule& rule);

nlohmann::json variable_json(const LinguisticVariable& v);

/// Variables with exact breakpoints, options and the rule table.
nlohmann::json model_json(Scenario s, const FisDefinition& fis);

struct TraceOptions {
    bool positive_only = false;      // drop rules that did not fire
    bool include_aggregate = false;  // sampled output set as {x: [...], mu: [...]}
};

/// Evaluation result with rule-level explanation. Numbers keep full double
/// precision so consumers read back the exact values.
nlohmann::json evaluation_json(Scenario s, const FisDefinition& fis, const PermanenceInput& in,
                               const InferenceResult& result, TraceOptions opts);

}  // namespace permadss
