#pragma once

#include "permadss/inference.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace permadss {

/// One checked calibration target of the bundled scenario systems.
struct AnchorResult {
    std::string id;           // e.g. "stable_high_npv.max"
    std::string description;
    std::string target;       // human-readable acceptance band
    double measured = 0.0;
    bool passed = false;
};

struct CalibrationReport {
    std::vector<AnchorResult> anchors;

    bool all_passed() const noexcept;
    /// nullptr when no anchor has that id.
    const AnchorResult* find(std::string_view id) const noexcept;
    /// One line per anchor: status, id, measured value, target, description.
    std::string to_text() const;
};

/// Representative fixed values for the low/med/high surfaces of each input.
struct SweepCase {
    std::string fixed;
    double value;
    std::string x;
    std::string y;
};

/// The 9 fixed-variable surfaces shared by both scenarios.
std::vector<SweepCase> standard_sweeps();

/// Runs every anchor against a stable and a growth system: the single
/// worked inference, the four published surfaces, growth dominance over the
/// standard sweeps, partition and rule-table checks.
CalibrationReport check_calibration(const FisDefinition& stable, const FisDefinition& growth);

/// Loads both scenario files from `models_dir` first; throws Error if one is
/// missing.
CalibrationReport check_calibration(const std::filesystem::path& models_dir);

}  // namespace permadss
