#include "doctest.h"

#include "permadss/errors.hpp"
#include "permadss/inference.hpp"
#include "support/oracle.hpp"
#include "support/random_fis.hpp"

#include <cmath>
#include <random>

using namespace permadss;

namespace {

LinguisticVariable lmh(const std::string& name, double lo, double hi) {
    return make_symmetric_partition(name, lo, hi, {"low", "med", "high"});
}

std::vector<Sample> sampled(double lo, double hi, std::size_t n, auto mu) {
    std::vector<Sample> s;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        s.push_back({x, mu(x)});
    }
    return s;
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("fuzzify symmetric partitions") {
    const auto d = fuzzify(lmh("DIVERS", 0, 5), 4);
    CHECK(d.at("low") == 0.0);
    CHECK(d.at("med") == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(d.at("high") == doctest::Approx(0.6).epsilon(1e-14));

    const auto g = fuzzify(lmh("GEN", 0, 30), 18);
    CHECK(g.at("low") == 0.0);
    CHECK(g.at("med") == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(g.at("high") == doctest::Approx(0.2).epsilon(1e-14));

    const LinguisticVariable one("X", 0, 10, {{"hill", MembershipFunction::trapezoidal(0, 0, 10, 10)}});
    for (double x : {0.0, 2.5, 7.0, 10.0}) {
        const auto m = fuzzify(one, x);
        CHECK(m.size() == 1);
        CHECK(m.at("hill") == eval_mf(one.labels()[0].mf, x));
    }
}

TEST_CASE("fuzzify rejects out-of-range values") {
    const auto v = lmh("GEN", 0, 30);
    try {
        fuzzify(v, 31);
        FAIL("expected OutOfRangeError");
    } catch (const OutOfRangeError& e) {
        CHECK(e.variable() == "GEN");
        CHECK(e.lo() == 0.0);
        CHECK(e.hi() == 30.0);
        CHECK(std::string(e.what()).find("GEN") != std::string::npos);
    }
    CHECK_THROWS_AS(fuzzify(v, -1e-9), OutOfRangeError);
    CHECK_THROWS_AS(fuzzify(v, NAN), OutOfRangeError);
    CHECK_NOTHROW(fuzzify(v, 0));
    CHECK_NOTHROW(fuzzify(v, 30));
}

TEST_CASE("firing strength") {
    const FuzzifiedInputs f{{"A", {{"x", 1.0}}}, {"B", {{"x", 0.8}}}, {"C", {{"x", 0.6}, {"y", 0.1}}}, {"D", {{"x", 0.0}}}};
    FuzzyRule and3{{{"A", "x"}, {"B", "x"}, {"C", "x"}}, Connective::And, {"OUT", "o"}};
    CHECK(firing_strength(and3, f) == 0.6);

    FuzzyRule or2{{{"C", "y"}, {"D", "x"}}, Connective::Or, {"OUT", "o"}};
    CHECK(firing_strength(or2, f) == 0.1);

    const FuzzifiedInputs g{{"A", {{"x", 0.8}}}, {"B", {{"x", 0.4}}}};
    FuzzyRule weighted{{{"A", "x"}, {"B", "x"}}, Connective::And, {"OUT", "o"}, 0.5};
    CHECK(firing_strength(weighted, g) == doctest::Approx(0.2).epsilon(1e-15));

    FuzzyRule missing{{{"Z", "x"}}, Connective::And, {"OUT", "o"}};
    CHECK_THROWS_AS(firing_strength(missing, f), InputError);
    FuzzyRule missing_label{{{"A", "nope"}}, Connective::And, {"OUT", "o"}};
    CHECK_THROWS_AS(firing_strength(missing_label, f), InputError);
}

TEST_CASE("firing strength is monotone in every clause degree") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 2000; ++k) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        FuzzyRule r;
        r.consequent = {"OUT", "o"};
        r.weight = std::bernoulli_distribution(0.5)(rng) ? 1.0 : u(rng) * 0.99 + 0.01;
        FuzzifiedInputs f;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string name = "V" + std::to_string(i);
            r.antecedent.push_back({name, "l"});
            f[name]["l"] = u(rng);
        }
        const double before = firing_strength(r, f);
        const std::string bump = "V" + std::to_string(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        auto& deg = f[bump]["l"];
        deg = deg + (1.0 - deg) * u(rng);
        CHECK(firing_strength(r, f) >= before);
    }
}

TEST_CASE("centroid of simple shapes") {
    // Symmetric triangle clipped at any level keeps its centre.
    for (double clip : {0.1, 0.5, 1.0}) {
        const auto s = sampled(0, 100, 1001, [&](double x) {
            return std::min(clip, oracle::degree(std::array{30.0, 40.0, 50.0}, x));
        });
        CHECK(defuzz_centroid(s) == doctest::Approx(40.0).epsilon(1e-12));
    }
    const auto flat = sampled(20, 60, 101, [](double) { return 0.3; });
    CHECK(defuzz_centroid(flat) == doctest::Approx(40.0).epsilon(1e-12));

    // Right half-triangle rising to 100 on [100*6/7, 100].
    const double a = 600.0 / 7.0;
    const std::array<double, 3> ramp{a, 100.0, 100.0};
    const double fine = oracle::centroid(ramp, 0, 100, 100001);
    CHECK(fine == doctest::Approx(95.238).epsilon(1e-4));
    const auto coarse = sampled(0, 100, 1001, [&](double x) { return oracle::degree(ramp, x); });
    CHECK(std::abs(defuzz_centroid(coarse) - fine) < 0.01);
}

TEST_CASE("centroid preconditions") {
    CHECK_THROWS_AS(defuzz_centroid(sampled(0, 1, 11, [](double) { return 0.0; })), NoRuleFiredError);
    CHECK_THROWS_AS(defuzz_centroid(sampled(0, 1, 10, [](double) { return 1.0; })), InputError);
    auto uneven = sampled(0, 1, 11, [](double) { return 1.0; });
    uneven[3].x += 0.01;
    CHECK_THROWS_AS(defuzz_centroid(uneven), InputError);
    auto bad_mu = sampled(0, 1, 11, [](double) { return 1.0; });
    bad_mu[2].mu = 1.5;
    CHECK_THROWS_AS(defuzz_centroid(bad_mu), InputError);
}

TEST_CASE("single rule at full strength lands on the consequent centre") {
    const auto in = make_symmetric_partition("IN", 0, 1, {"a", "b"});
    const LinguisticVariable out("OUT", 0, 100,
                                 {{"lo", MembershipFunction::triangular(0, 0, 50)},
                                  {"mid", MembershipFunction::triangular(20, 37.5, 55)},
                                  {"hi", MembershipFunction::triangular(50, 100, 100)}});
    FisDefinition fis("one", {in}, out, {{{{"IN", "b"}}, Connective::And, {"OUT", "mid"}}});
    const auto r = infer(fis, std::vector<double>{1.0});
    CHECK(r.firing.size() == 1);
    CHECK(r.firing[0] == 1.0);
    CHECK(std::abs(r.output - 37.5) <= 0.05);  // half a sample step
}

TEST_CASE("no rule fired is an error") {
    const auto in = make_symmetric_partition("IN", 0, 1, {"a", "b"});
    const auto out = make_symmetric_partition("OUT", 0, 10, {"lo", "hi"});
    FisDefinition fis("quiet", {in}, out, {{{{"IN", "b"}}, Connective::And, {"OUT", "hi"}}});
    CHECK_THROWS_AS(infer(fis, std::vector<double>{0.0}), NoRuleFiredError);
}

TEST_CASE("definition validation") {
    const auto in = lmh("IN", 0, 1);
    const auto out = make_symmetric_partition("OUT", 0, 10, {"lo", "hi"});
    auto issue = [&](std::vector<FuzzyRule> rules, FisOptions opts = {}) {
        try {
            FisDefinition("sys", {in}, out, std::move(rules), opts);
        } catch (const DefinitionError& e) {
            return e.issue();
        }
        FAIL("expected a DefinitionError");
        return DefinitionIssue::syntax;
    };
    const FuzzyRule ok{{{"IN", "low"}}, Connective::And, {"OUT", "lo"}};
    CHECK(issue({}) == DefinitionIssue::no_rules);
    CHECK(issue({{{{"IN", "huge"}}, Connective::And, {"OUT", "lo"}}}) == DefinitionIssue::unknown_label);
    CHECK(issue({{{{"NOPE", "low"}}, Connective::And, {"OUT", "lo"}}}) == DefinitionIssue::unknown_variable);
    CHECK(issue({{{{"IN", "low"}, {"IN", "med"}}, Connective::And, {"OUT", "lo"}}}) == DefinitionIssue::duplicate_clause);
    CHECK(issue({{{{"IN", "low"}}, Connective::And, {"OUT", "lo"}, 0.0}}) == DefinitionIssue::invalid_weight);
    CHECK(issue({{{{"IN", "low"}}, Connective::And, {"OUT", "lo"}, 1.5}}) == DefinitionIssue::invalid_weight);
    CHECK(issue({{{{"IN", "low"}}, Connective::And, {"IN", "low"}}}) == DefinitionIssue::unknown_variable);
    CHECK(issue({{{}, Connective::And, {"OUT", "lo"}}}) == DefinitionIssue::syntax);
    FisOptions coarse;
    coarse.resolution = 10;
    CHECK(issue({ok}, coarse) == DefinitionIssue::invalid_resolution);
    CHECK_THROWS_AS(FisDefinition("sys", {in, in}, out, {ok}), DefinitionError);
}

TEST_CASE("map inputs must match the declared inputs") {
    const auto fis = FisDefinition("sys", {lmh("A", 0, 1), lmh("B", 0, 1)}, lmh("OUT", 0, 10),
                                   {{{{"A", "low"}, {"B", "high"}}, Connective::Or, {"OUT", "med"}}});
    CHECK_NOTHROW(infer(fis, {{"A", 0.1}, {"B", 0.9}}));
    CHECK_THROWS_AS(infer(fis, {{"A", 0.1}}), InputError);
    CHECK_THROWS_AS(infer(fis, {{"A", 0.1}, {"B", 0.9}, {"C", 0.0}}), InputError);
    CHECK_THROWS_AS(infer(fis, std::vector<double>{0.1}), InputError);
    CHECK(infer(fis, {{"A", 0.1}, {"B", 0.9}}) == infer(fis, std::vector<double>{0.1, 0.9}));
}

TEST_CASE("engine matches the naive oracle on random systems") {
    std::mt19937_64 rng(20240611);
    int compared = 0;
    for (int k = 0; k < 300; ++k) {
        const auto fis = testgen::system(rng);
        const auto xs = testgen::inputs_in_range(rng, fis);
        const auto expected = oracle::mamdani(fis, xs, fis.options().resolution);
        if (!expected) {
            CHECK_THROWS_AS(infer(fis, xs), NoRuleFiredError);
            continue;
        }
        const auto got = infer(fis, xs);
        const double span = fis.output().hi() - fis.output().lo();
        CHECK(std::abs(got.output - *expected) <= 1e-6 * std::max(1.0, span));
        const auto s = oracle::strengths(fis, xs);
        REQUIRE(s.size() == got.firing.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(got.firing[i] == doctest::Approx(s[i]).epsilon(1e-12));
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("trace consistency, containment and determinism") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 200; ++k) {
        const auto fis = testgen::system(rng);
        const auto xs = testgen::inputs_in_range(rng, fis);
        try {
            const auto r = infer(fis, xs);
            CHECK(r.aggregate.size() == fis.options().resolution);
            CHECK(defuzz_centroid(r.aggregate) == r.output);
            CHECK(r.output >= fis.output().lo());
            CHECK(r.output <= fis.output().hi());
            for (double s : r.firing) CHECK((s >= 0.0 && s <= 1.0));
            for (const auto& smp : r.aggregate) CHECK((smp.mu >= 0.0 && smp.mu <= 1.0));
            CHECK(infer(fis, xs) == r);
        } catch (const NoRuleFiredError&) {
        }
    }
}

}
