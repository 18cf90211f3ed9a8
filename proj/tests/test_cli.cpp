#include "doctest.h"

#include "permadss/cli.hpp"
#include "permadss/fis_text.hpp"
#include "permadss/permanence.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace permadss;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / (stem + std::to_string(std::random_device{}()));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval prints the incentive") {
    const auto r = run({"eval", "--scenario", "stable", "--npv", "20e6", "--gen", "18", "--divers", "4"});
    CHECK(r.code == kExitOk);
    CHECK(r.err.empty());
    REQUIRE(r.out.rfind("incentive: ", 0) == 0);
    const double v = std::stod(r.out.substr(11));
    CHECK(std::abs(v - 71.4) <= 5.0);
}

TEST_CASE("eval --json agrees with the human-readable value") {
    const std::vector<std::string> base{"eval", "--scenario", "growth", "--npv", "7.25e6", "--gen", "3", "--divers", "0.5"};
    const auto plain = run(base);
    auto with_json = base;
    with_json.push_back("--json");
    const auto js = run(with_json);
    CHECK(js.code == kExitOk);
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc.at("incentive").get<double>() == std::stod(plain.out.substr(11)));
    CHECK(doc.at("firing").size() == 27);
    CHECK(doc.at("aggregate").at("mu").size() == 1001);
    CHECK(run(with_json).out == js.out);
}

TEST_CASE("eval range errors exit 1 naming the variable") {
    const auto r = run({"eval", "--scenario", "stable", "--npv", "999e6", "--gen", "1", "--divers", "1"});
    CHECK(r.code == kExitDomainError);
    CHECK(r.out.empty());
    CHECK(r.err.find("NPV") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"eval", "--scenario", "stable", "--npv", "1", "--gen", "1"}).code == kExitUsage);
    CHECK(run({"eval", "--scenario", "boom", "--npv", "1", "--gen", "1", "--divers", "1"}).code == kExitUsage);
    CHECK(run({"eval", "--scenario", "stable", "--npv", "x", "--gen", "1", "--divers", "1"}).code == kExitUsage);
    const auto r = run({"frobnicate"});
    CHECK(r.code == kExitUsage);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"eval", "--bogus"}).code == kExitUsage);
    CHECK(run({"sweep", "--scenario", "stable", "--fix", "NPV"}).code == kExitUsage);
    CHECK(run({"sweep", "--scenario", "stable", "--fix", "AGE=3"}).code == kExitUsage);
    CHECK(run({"serve", "--addr", "nowhere"}).code == kExitUsage);
}

TEST_CASE("help exits 0 on the output stream") {
    const auto r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("eval") != std::string::npos);
    CHECK(run({"eval", "--help"}).code == kExitOk);
}

TEST_CASE("validate") {
    const auto ok = run({"validate", (default_models_dir() / "permanence_growth.fis").string()});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out == "27 rules, 4 variables\n");

    const auto path = temp_file("bad-fis-");
    std::ofstream(path) << "system s\ninput X range 0 20\n  label a tri 0 15 30\n";
    const auto bad = run({"validate", path.string()});
    std::filesystem::remove(path);
    CHECK(bad.code == kExitDomainError);
    CHECK(bad.err.find(path.string() + ":3:15: support outside universe") == 0);

    CHECK(run({"validate", "/nonexistent.fis"}).code == kExitDomainError);
}

TEST_CASE("sweep writes CSV and JSON") {
    const auto csv = run({"sweep", "--scenario", "stable", "--fix", "npv=20e6", "--steps", "3"});
    CHECK(csv.code == kExitOk);
    CHECK(csv.out.rfind("fixed_var,fixed_value,x_var,y_var\nNPV,2e+07,GEN,DIVERS\n", 0) == 0);

    const auto path = temp_file("grid-");
    const auto js = run({"sweep", "--scenario", "growth", "--fix", "DIVERS=5", "--steps", "5", "--format", "json",
                         "--out", path.string()});
    CHECK(js.code == kExitOk);
    CHECK(js.out.empty());
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    std::filesystem::remove(path);
    CHECK(doc.at("values").size() == 5);
    CHECK(doc.at("fixed").at("variable") == "DIVERS");

    CHECK(run({"sweep", "--scenario", "stable", "--fix", "GEN=31"}).code == kExitDomainError);
}

TEST_CASE("calibrate prints the report") {
    const auto r = run({"calibrate"});
    CHECK(r.out.find("anchors passed") != std::string::npos);
    CHECK(r.out.find("point") != std::string::npos);
    CHECK(((r.code == kExitOk) == (r.out.find("FAIL") == std::string::npos)));
}

TEST_CASE("model directory override") {
    ::setenv("PERMADSS_MODELS_DIR", "/nonexistent", 1);
    const auto r = run({"eval", "--scenario", "stable", "--npv", "1", "--gen", "1", "--divers", "1"});
    ::unsetenv("PERMADSS_MODELS_DIR");
    CHECK(r.code == kExitDomainError);
    CHECK(r.err.find("/nonexistent") != std::string::npos);
}

}
