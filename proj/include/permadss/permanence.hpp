#pragma once

#include "permadss/inference.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace permadss {

/// Market regime; each has its own 27-rule base.
enum class Scenario { stable, growth };

inline constexpr std::array<Scenario, 2> kScenarios{Scenario::stable, Scenario::growth};

std::string_view to_string(Scenario s) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

namespace var {
inline constexpr std::string_view npv = "NPV";
inline constexpr std::string_view gen = "GEN";
inline constexpr std::string_view divers = "DIVERS";
inline constexpr std::string_view incentive = "PERM-INCENT";
}  // namespace var

// Universes, in the variables' own units.
inline constexpr double kNpvMin = -0.5e6;  // euros
inline constexpr double kNpvMax = 185e6;
inline constexpr double kGenMax = 30.0;      // generics in the portfolio
inline constexpr double kDiversMax = 5.0;    // diversification score
inline constexpr double kIncentiveMax = 100.0;  // percent

struct PermanenceInput {
    double npv = 0.0;     // expected NPV, euros
    double gen = 0.0;     // number of generics
    double divers = 0.0;  // diversification score

    friend bool operator==(const PermanenceInput&, const PermanenceInput&) = default;
};

/// Lower-case request field for an input variable ("NPV" -> "npv").
std::string field_name(std::string_view variable);

struct CashFlow {
    int period = 0;
    double amount = 0.0;  // euros
};

struct CashFlowSchedule {
    std::vector<CashFlow> flows;
    double rate = 0.0;  // per-period discount rate, > -1
};

/// Sum of amount / (1 + rate)^period. Throws InputError for rate <= -1, a
/// negative period or non-finite values.
double npv(const CashFlowSchedule& schedule);

/// Consequent output label (1-based mf index) by [NPV][GEN][DIVERS] label
/// index, each 0 = low, 1 = med, 2 = high.
using ConsequentTable = std::array<std::array<std::array<int, 3>, 3>, 3>;

/// The bundled rule tables. Growth dominates stable cell by cell.
const ConsequentTable& consequent_table(Scenario s) noexcept;

/// Builds a scenario system from a consequent table: NPV with its
/// non-uniform low/med/high partition, GEN and DIVERS as symmetric 3-label
/// partitions, PERM-INCENT as a symmetric 8-label partition, one AND rule per
/// antecedent cell.
FisDefinition build_permanence_fis(std::string name, const ConsequentTable& table);
FisDefinition build_permanence_fis(Scenario s);

std::string_view model_filename(Scenario s) noexcept;

/// $PERMADSS_MODELS_DIR when set, otherwise the models/ directory of the
/// source tree this binary was built from.
std::filesystem::path default_models_dir();

/// Reads and parses a scenario file. Throws Error when the file is missing
/// (ParseError for bad content, with the file name prefixed).
FisDefinition load_permanence_fis(Scenario s, const std::filesystem::path& dir);

/// Both scenario systems, loaded once and shared read-only.
class PermanenceModels {
public:
    PermanenceModels(FisDefinition stable, FisDefinition growth)
        : stable_(std::move(stable)), growth_(std::move(growth)) {}

    static PermanenceModels load(const std::filesystem::path& dir);
    static PermanenceModels builtin();

    const FisDefinition& system(Scenario s) const noexcept { return s == Scenario::stable ? stable_ : growth_; }

private:
    FisDefinition stable_;
    FisDefinition growth_;
};

/// Incentive to remain, in percent. Throws OutOfRangeError naming the input
/// variable when a value is outside its universe.
InferenceResult evaluate_permanence(const FisDefinition& fis, const PermanenceInput& in);

inline InferenceResult evaluate_permanence(const PermanenceModels& models, Scenario s, const PermanenceInput& in) {
    return evaluate_permanence(models.system(s), in);
}

/// Snaps each value into its universe on `fis`.
PermanenceInput clamp_input(const FisDefinition& fis, const PermanenceInput& in);

}  // namespace permadss
