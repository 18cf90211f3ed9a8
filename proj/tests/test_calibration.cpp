#include "doctest.h"

#include "permadss/calibration.hpp"
#include "permadss/errors.hpp"
#include "permadss/permanence.hpp"

#include <filesystem>

using namespace permadss;

TEST_SUITE("calibration") {

TEST_CASE("report lists every anchor with its measurement") {
    const auto report = check_calibration(build_permanence_fis(Scenario::stable), build_permanence_fis(Scenario::growth));
    for (const char* id : {"point", "stable_high_npv.min", "stable_high_npv.max", "stable_high_npv.monotone",
                           "stable_mid_divers.plateau", "stable_mid_divers.max", "stable_low_npv.max",
                           "stable_low_npv.divers_monotone", "stable_low_npv.gain", "growth_mid_npv.max",
                           "growth_mid_npv.low_divers", "growth_mid_npv.unimodal", "growth_high_npv.min",
                           "growth_high_npv.max", "dominance", "ruspini", "rules.stable", "rules.growth"})
        CHECK_MESSAGE(report.find(id) != nullptr, id);
    CHECK(report.find("nope") == nullptr);

    const auto* point = report.find("point");
    REQUIRE(point != nullptr);
    CHECK(point->measured == evaluate_permanence(build_permanence_fis(Scenario::stable), {20e6, 18, 4}).output);
    const auto text = report.to_text();
    CHECK(text.find("71.4") != std::string::npos);
    CHECK(text.find("point") != std::string::npos);
    CHECK(text.find(" of 18 anchors passed") != std::string::npos);
}

TEST_CASE("file-based entry point matches the in-memory one") {
    const auto a = check_calibration(default_models_dir());
    const auto b = check_calibration(build_permanence_fis(Scenario::stable), build_permanence_fis(Scenario::growth));
    CHECK(a.to_text() == b.to_text());
    CHECK_THROWS_AS(check_calibration(std::filesystem::path("/nonexistent/models")), Error);
}

TEST_CASE("perturbing a consequent by two labels breaks an anchor") {
    auto table = consequent_table(Scenario::stable);
    table[2][0][0] += 2;  // NPV high, GEN low, DIVERS low: mf5 -> mf7
    const auto perturbed = build_permanence_fis("perturbed", table);
    const auto report = check_calibration(perturbed, build_permanence_fis(Scenario::growth));
    CHECK_FALSE(report.all_passed());
    // mf7 in that cell overtakes the growth table's mf6.
    const auto* dominance = report.find("dominance");
    REQUIRE(dominance != nullptr);
    CHECK_FALSE(dominance->passed);
    CHECK(dominance->measured < -10.0);

    const auto baseline = check_calibration(build_permanence_fis(Scenario::stable), build_permanence_fis(Scenario::growth));
    CHECK(baseline.find("dominance")->passed);
}

TEST_CASE("nine standard sweeps cover each variable fixed at three levels") {
    const auto cases = standard_sweeps();
    CHECK(cases.size() == 9);
    for (const char* v : {"NPV", "GEN", "DIVERS"})
        CHECK(std::count_if(cases.begin(), cases.end(), [&](const SweepCase& c) { return c.fixed == v; }) == 3);
}

}
