#pragma once

#include "permadss/membership.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permadss {

enum class Connective { And, Or };

struct Clause {
    std::string variable;
    std::string label;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct FuzzyRule {
    std::vector<Clause> antecedent;
    Connective connective = Connective::And;
    Clause consequent;
    double weight = 1.0;

    friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

// Each operator slot supports exactly the Mamdani default. They are kept as
// enums so a definition states its configuration explicitly.
enum class AndMethod { min };
enum class OrMethod { max };
enum class ImplicationMethod { min };
enum class AggregationMethod { max };
enum class DefuzzMethod { centroid };

struct FisOptions {
    AndMethod and_op = AndMethod::min;
    OrMethod or_op = OrMethod::max;
    ImplicationMethod implication = ImplicationMethod::min;
    AggregationMethod aggregation = AggregationMethod::max;
    DefuzzMethod defuzz = DefuzzMethod::centroid;
    /// Number of uniform samples over the output universe.
    std::size_t resolution = 1001;

    friend bool operator==(const FisOptions&, const FisOptions&) = default;
};

inline constexpr std::size_t kMinResolution = 11;
inline constexpr std::size_t kMaxResolution = 1'000'001;

struct InferenceResult;

/// A validated Mamdani system with one output. Immutable after construction
/// and safe to share between threads.
class FisDefinition {
public:
    /// Throws DefinitionError when a rule references an unknown variable or
    /// label, a variable name repeats, a rule repeats a variable, a weight is
    /// outside (0, 1], resolution is outside [11, 1000001], or there are no rules.
    FisDefinition(std::string name, std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                  std::vector<FuzzyRule> rules, FisOptions options = {});

    const std::string& name() const noexcept { return name_; }
    const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
    const LinguisticVariable& output() const noexcept { return output_; }
    const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
    const FisOptions& options() const noexcept { return options_; }

    /// Index into inputs(), or inputs().size() when absent.
    std::size_t find_input(std::string_view name) const noexcept;

    /// Structural equality; cached sample tables are not compared.
    friend bool operator==(const FisDefinition& a, const FisDefinition& b) {
        return a.name_ == b.name_ && a.inputs_ == b.inputs_ && a.output_ == b.output_ &&
               a.rules_ == b.rules_ && a.options_ == b.options_;
    }

private:
    friend InferenceResult infer(const FisDefinition& fis, std::span<const double> values);

    struct ResolvedClause {
        std::size_t input;
        std::size_t label;
    };
    struct ResolvedRule {
        std::vector<ResolvedClause> clauses;
        std::size_t consequent_label;
    };

    std::string name_;
    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    std::vector<FuzzyRule> rules_;
    FisOptions options_;

    std::vector<ResolvedRule> resolved_;
    std::vector<double> grid_;                       // output universe samples
    std::vector<std::vector<double>> output_degrees_;  // [label][sample]
};

struct Sample {
    double x;
    double mu;

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct InferenceResult {
    double output = 0.0;
    /// Firing strength of every rule, indexed like FisDefinition::rules().
    std::vector<double> firing;
    /// Aggregated output set at `resolution` uniform points.
    std::vector<Sample> aggregate;

    friend bool operator==(const InferenceResult&, const InferenceResult&) = default;
};

using Degrees = std::map<std::string, double, std::less<>>;
using FuzzifiedInputs = std::map<std::string, Degrees, std::less<>>;

/// Degree of every label of v at x. Throws OutOfRangeError if x is outside
/// the universe.
Degrees fuzzify(const LinguisticVariable& v, double x);

/// min (AND) or max (OR) over the clause degrees, times the rule weight.
/// Throws InputError if a clause names a variable or label missing from
/// `fuzzified`.
double firing_strength(const FuzzyRule& rule, const FuzzifiedInputs& fuzzified);

/// Centroid of a sampled set using trapezoid weights on a uniform grid.
/// Throws InputError for fewer than 11 samples, a non-uniform grid or invalid
/// degrees, and NoRuleFiredError when every degree is zero.
double defuzz_centroid(std::span<const Sample> samples);

/// Runs the full pipeline. `values` follows the order of fis.inputs().
InferenceResult infer(const FisDefinition& fis, std::span<const double> values);

/// Same, keyed by input name. Every input must be present and no other key.
InferenceResult infer(const FisDefinition& fis, const std::map<std::string, double, std::less<>>& values);

}  // namespace permadss
