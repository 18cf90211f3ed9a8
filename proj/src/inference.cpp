#include "permadss/inference.hpp"

#include "permadss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace permadss {

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + static_cast<double>(i) * step;
    xs.back() = hi;
    return xs;
}

}  // namespace

FisDefinition::FisDefinition(std::string name, std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                             std::vector<FuzzyRule> rules, FisOptions options)
    : name_(std::move(name)),
      inputs_(std::move(inputs)),
      output_(std::move(output)),
      rules_(std::move(rules)),
      options_(options) {
    if (!is_identifier(name_))
        throw DefinitionError(DefinitionIssue::invalid_name, fmt::format("'{}' is not a valid system name", name_));
    if (options_.resolution < kMinResolution || options_.resolution > kMaxResolution)
        throw DefinitionError(DefinitionIssue::invalid_resolution,
                              fmt::format("resolution must be in [{}, {}], got {}", kMinResolution, kMaxResolution,
                                          options_.resolution));

    std::set<std::string, std::less<>> names;
    for (const auto& v : inputs_)
        if (!names.insert(v.name()).second)
            throw DefinitionError(DefinitionIssue::duplicate_variable, fmt::format("variable {} declared twice", v.name()));
    if (!names.insert(output_.name()).second)
        throw DefinitionError(DefinitionIssue::duplicate_variable,
                              fmt::format("variable {} declared twice", output_.name()));
    if (rules_.empty()) throw DefinitionError(DefinitionIssue::no_rules, "the system has no rules");

    resolved_.reserve(rules_.size());
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        auto& rule = rules_[r];
        // The connective of a one-clause rule has no effect; store it as AND so
        // the text form (which omits it) round-trips.
        if (rule.antecedent.size() == 1) rule.connective = Connective::And;
        if (rule.antecedent.empty())
            throw DefinitionError(DefinitionIssue::syntax, fmt::format("rule {} has an empty antecedent", r + 1));
        if (!(rule.weight > 0.0 && rule.weight <= 1.0))
            throw DefinitionError(DefinitionIssue::invalid_weight,
                                  fmt::format("rule {} weight {} is outside (0, 1]", r + 1, rule.weight));
        ResolvedRule resolved;
        std::vector<bool> used(inputs_.size(), false);
        for (const auto& clause : rule.antecedent) {
            const std::size_t vi = find_input(clause.variable);
            if (vi == inputs_.size())
                throw DefinitionError(DefinitionIssue::unknown_variable,
                                      fmt::format("rule {} uses unknown input {}", r + 1, clause.variable));
            if (used[vi])
                throw DefinitionError(DefinitionIssue::duplicate_clause,
                                      fmt::format("rule {} tests {} more than once", r + 1, clause.variable));
            used[vi] = true;
            const std::size_t li = inputs_[vi].find_label(clause.label);
            if (li == inputs_[vi].label_count())
                throw DefinitionError(DefinitionIssue::unknown_label,
                                      fmt::format("rule {}: {} has no label {}", r + 1, clause.variable, clause.label));
            resolved.clauses.push_back({vi, li});
        }
        if (rule.consequent.variable != output_.name())
            throw DefinitionError(DefinitionIssue::unknown_variable,
                                  fmt::format("rule {} concludes on {}, which is not the output",
                                              r + 1, rule.consequent.variable));
        resolved.consequent_label = output_.find_label(rule.consequent.label);
        if (resolved.consequent_label == output_.label_count())
            throw DefinitionError(DefinitionIssue::unknown_label,
                                  fmt::format("rule {}: {} has no label {}", r + 1, output_.name(), rule.consequent.label));
        resolved_.push_back(std::move(resolved));
    }

    grid_ = uniform_grid(output_.lo(), output_.hi(), options_.resolution);
    output_degrees_.reserve(output_.label_count());
    for (const auto& label : output_.labels()) {
        std::vector<double> mu(grid_.size());
        std::transform(grid_.begin(), grid_.end(), mu.begin(), [&](double x) { return label.mf.eval(x); });
        output_degrees_.push_back(std::move(mu));
    }
}

std::size_t FisDefinition::find_input(std::string_view name) const noexcept {
    auto it = std::find_if(inputs_.begin(), inputs_.end(), [&](const LinguisticVariable& v) { return v.name() == name; });
    return static_cast<std::size_t>(it - inputs_.begin());
}

Degrees fuzzify(const LinguisticVariable& v, double x) {
    if (!v.contains(x)) throw OutOfRangeError(v.name(), x, v.lo(), v.hi());
    Degrees out;
    for (const auto& label : v.labels()) out.emplace(label.name, label.mf.eval(x));
    return out;
}

double firing_strength(const FuzzyRule& rule, const FuzzifiedInputs& fuzzified) {
    if (rule.antecedent.empty()) throw InputError("rule has an empty antecedent");
    double strength = rule.connective == Connective::And ? 1.0 : 0.0;
    for (const auto& clause : rule.antecedent) {
        auto var = fuzzified.find(clause.variable);
        if (var == fuzzified.end())
            throw InputError(fmt::format("no fuzzified degrees for variable {}", clause.variable));
        auto label = var->second.find(clause.label);
        if (label == var->second.end())
            throw InputError(fmt::format("no degree for {} is {}", clause.variable, clause.label));
        strength = rule.connective == Connective::And ? std::min(strength, label->second)
                                                      : std::max(strength, label->second);
    }
    return strength * rule.weight;
}

double defuzz_centroid(std::span<const Sample> samples) {
    const std::size_t n = samples.size();
    if (n < kMinResolution)
        throw InputError(fmt::format("centroid needs at least {} samples, got {}", kMinResolution, n));
    const double x0 = samples.front().x;
    const double xn = samples.back().x;
    const double step = (xn - x0) / static_cast<double>(n - 1);
    if (!std::isfinite(step) || !(step > 0.0)) throw InputError("centroid samples must span an increasing range");
    const double tol = 1e-6 * step;

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = samples[i];
        if (std::abs(s.x - (x0 + static_cast<double>(i) * step)) > tol)
            throw InputError("centroid samples must be uniformly spaced");
        if (!(s.mu >= 0.0 && s.mu <= 1.0)) throw InputError(fmt::format("degree {} at x = {} is outside [0, 1]", s.mu, s.x));
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        num += w * s.x * s.mu;
        den += w * s.mu;
    }
    if (den <= 0.0) throw NoRuleFiredError();
    return std::clamp(num / den, x0, xn);
}

InferenceResult infer(const FisDefinition& fis, std::span<const double> values) {
    const auto& inputs = fis.inputs_;
    if (values.size() != inputs.size())
        throw InputError(fmt::format("{} expects {} inputs, got {}", fis.name_, inputs.size(), values.size()));
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (!inputs[i].contains(values[i])) throw OutOfRangeError(inputs[i].name(), values[i], inputs[i].lo(), inputs[i].hi());

    // Fuzzification.
    std::vector<std::vector<double>> degrees(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        degrees[i].reserve(inputs[i].label_count());
        for (const auto& label : inputs[i].labels()) degrees[i].push_back(label.mf.eval(values[i]));
    }

    // Antecedent operators. Rules sharing a consequent label clip it at the
    // largest of their strengths, which is what min-implication followed by
    // max-aggregation reduces to.
    InferenceResult result;
    result.firing.reserve(fis.rules_.size());
    std::vector<double> clip(fis.output_.label_count(), 0.0);
    for (std::size_t r = 0; r < fis.rules_.size(); ++r) {
        const auto& rule = fis.rules_[r];
        const auto& resolved = fis.resolved_[r];
        const bool conj = rule.connective == Connective::And;
        double s = conj ? 1.0 : 0.0;
        for (const auto& c : resolved.clauses) {
            const double d = degrees[c.input][c.label];
            s = conj ? std::min(s, d) : std::max(s, d);
        }
        s *= rule.weight;
        result.firing.push_back(s);
        clip[resolved.consequent_label] = std::max(clip[resolved.consequent_label], s);
    }

    // Implication and aggregation over the sampled output universe.
    const auto& grid = fis.grid_;
    result.aggregate.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) result.aggregate[i] = {grid[i], 0.0};
    for (std::size_t l = 0; l < clip.size(); ++l) {
        if (clip[l] <= 0.0) continue;
        const auto& mu = fis.output_degrees_[l];
        for (std::size_t i = 0; i < grid.size(); ++i)
            result.aggregate[i].mu = std::max(result.aggregate[i].mu, std::min(clip[l], mu[i]));
    }

    result.output = defuzz_centroid(result.aggregate);
    return result;
}

InferenceResult infer(const FisDefinition& fis, const std::map<std::string, double, std::less<>>& values) {
    std::vector<double> ordered;
    ordered.reserve(fis.inputs().size());
    for (const auto& v : fis.inputs()) {
        auto it = values.find(v.name());
        if (it == values.end()) throw InputError(fmt::format("missing value for input {}", v.name()));
        ordered.push_back(it->second);
    }
    for (const auto& [name, value] : values)
        if (fis.find_input(name) == fis.inputs().size())
            throw InputError(fmt::format("{} has no input named {}", fis.name(), name));
    return infer(fis, ordered);
}

}  // namespace permadss
