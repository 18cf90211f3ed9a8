#include "doctest.h"

#include "permadss/errors.hpp"
#include "permadss/membership.hpp"

#include <cmath>
#include <random>

using namespace permadss;

TEST_SUITE("membership") {

TEST_CASE("triangle evaluation") {
    const auto t = MembershipFunction::triangular(0, 15, 30);
    CHECK(eval_mf(t, 15) == 1.0);
    CHECK(eval_mf(t, 31) == 0.0);
    CHECK(eval_mf(t, 18) == doctest::Approx((30.0 - 18.0) / 15.0).epsilon(1e-15));
    CHECK(eval_mf(t, 0) == 0.0);
    CHECK(eval_mf(t, 30) == 0.0);
    CHECK(eval_mf(t, -1) == 0.0);
}

TEST_CASE("trapezoid plateau and ramps") {
    const auto t = MembershipFunction::trapezoidal(10e6, 20e6, 185e6, 185e6);
    CHECK(eval_mf(t, 20e6) == 1.0);
    CHECK(eval_mf(t, 100e6) == 1.0);
    CHECK(eval_mf(t, 185e6) == 1.0);
    CHECK(eval_mf(t, 15e6) == doctest::Approx(0.5));
    CHECK(eval_mf(t, 10e6) == 0.0);
    CHECK(t.peak() == doctest::Approx(102.5e6));
}

TEST_CASE("degenerate shapes") {
    const auto left = MembershipFunction::triangular(0, 0, 10);
    CHECK(eval_mf(left, 0) == 1.0);
    CHECK(eval_mf(left, 5) == doctest::Approx(0.5));
    const auto right = MembershipFunction::triangular(0, 10, 10);
    CHECK(eval_mf(right, 10) == 1.0);
    const auto spike = MembershipFunction::triangular(3, 3, 3);
    CHECK(eval_mf(spike, 3) == 1.0);
    CHECK(eval_mf(spike, 3.0000001) == 0.0);
    CHECK(eval_mf(spike, 2.9999999) == 0.0);
}

TEST_CASE("breakpoints must be finite and ordered") {
    CHECK_THROWS_AS(MembershipFunction::triangular(0, 20, 10), DefinitionError);
    CHECK_THROWS_AS(MembershipFunction::trapezoidal(0, 1, 3, 2), DefinitionError);
    CHECK_THROWS_AS(MembershipFunction::triangular(0, NAN, 1), DefinitionError);
    CHECK_THROWS_AS(MembershipFunction::triangular(-INFINITY, 0, 1), DefinitionError);
    try {
        MembershipFunction::triangular(2, 1, 3);
    } catch (const DefinitionError& e) {
        CHECK(e.issue() == DefinitionIssue::invalid_breakpoints);
    }
}

TEST_CASE("degree stays in [0, 1] and is continuous at breakpoints") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int k = 0; k < 200; ++k) {
        double p[4] = {u(rng), u(rng), u(rng), u(rng)};
        std::sort(p, p + 4);
        const auto mf = MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3]);
        for (int i = 0; i <= 400; ++i) {
            const double x = -60 + 120.0 * i / 400;
            const double mu = eval_mf(mf, x);
            CHECK((mu >= 0.0 && mu <= 1.0));
        }
        for (double b : p) {
            const double h = 1e-9 * std::max(1.0, std::abs(b));
            const double here = eval_mf(mf, b);
            // One-sided limits only exist on a ramp of positive width.
            if (p[1] - p[0] > 1e-6 && p[3] - p[2] > 1e-6) {
                CHECK(std::abs(eval_mf(mf, b - h) - here) < 1e-6);
                CHECK(std::abs(eval_mf(mf, b + h) - here) < 1e-6);
            }
        }
    }
}

TEST_CASE("symmetric partition peaks") {
    const auto divers = make_symmetric_partition("DIVERS", 0, 5, {"low", "med", "high"});
    CHECK(divers.labels()[0].mf.peak() == 0.0);
    CHECK(divers.labels()[1].mf.peak() == 2.5);
    CHECK(divers.labels()[2].mf.peak() == 5.0);

    const auto gen = make_symmetric_partition("GEN", 0, 30, {"low", "med", "high"});
    CHECK(gen.labels()[1].mf.peak() == 15.0);
    CHECK(gen.labels()[2].mf.peak() == 30.0);

    const auto out = make_symmetric_partition("OUT", 0, 100, {"mf1", "mf2", "mf3", "mf4", "mf5", "mf6", "mf7", "mf8"});
    for (int k = 0; k < 8; ++k) CHECK(out.labels()[k].mf.peak() == doctest::Approx(k * 100.0 / 7).epsilon(1e-14));
    CHECK(out.labels()[5].mf.peak() == doctest::Approx(71.43).epsilon(1e-4));

    // Outer labels are half-triangles clamped at the universe ends.
    const auto first = out.labels().front().mf.params();
    CHECK(first[0] == 0.0);
    CHECK(first[1] == 0.0);
    const auto last = out.labels().back().mf.params();
    CHECK(last[1] == 100.0);
    CHECK(last[2] == 100.0);
}

TEST_CASE("symmetric partition errors") {
    CHECK_THROWS_AS(make_symmetric_partition("X", 0, 1, {"only"}), InputError);
    CHECK_THROWS_AS(make_symmetric_partition("X", 1, 1, {"a", "b"}), DefinitionError);
    CHECK_THROWS_AS(make_symmetric_partition("X", 2, 1, {"a", "b"}), DefinitionError);
}

TEST_CASE("Ruspini sum and reflection symmetry") {
    std::mt19937_64 rng(11);
    for (std::size_t n = 2; n <= 9; ++n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i));
        const double lo = std::uniform_real_distribution<double>(-100, 100)(rng);
        const double hi = lo + std::uniform_real_distribution<double>(0.5, 1000)(rng);
        const auto v = make_symmetric_partition("V", lo, hi, names);
        std::uniform_real_distribution<double> x(lo, hi);
        for (int k = 0; k < 500; ++k) {
            const double at = x(rng);
            double sum = 0.0;
            for (const auto& l : v.labels()) sum += eval_mf(l.mf, at);
            CHECK(std::abs(sum - 1.0) <= 1e-9);
            const double mirrored = lo + hi - at;
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(eval_mf(v.labels()[i].mf, at) - eval_mf(v.labels()[n - 1 - i].mf, mirrored)) <= 1e-12);
        }
    }
}

TEST_CASE("coverage report") {
    const auto v = make_symmetric_partition("DIVERS", 0, 5, {"low", "med", "high"});
    const auto r = check_coverage(v, 1001);
    CHECK(r.min_max_degree == doctest::Approx(0.5));
    CHECK(r.ruspini_deviation <= 1e-12);
    CHECK(r.covered());

    const std::vector<Label> gap{{"a", MembershipFunction::trapezoidal(0, 0, 0.5, 1)},
                                 {"b", MembershipFunction::trapezoidal(2, 2.5, 3, 3)}};
    const auto g = check_coverage(0, 3, gap, 301);
    CHECK_FALSE(g.covered());
    CHECK(g.min_max_degree == 0.0);
    for (double x : g.uncovered) CHECK((x >= 1.0 && x <= 2.0));

    const std::vector<Label> whole{{"all", MembershipFunction::trapezoidal(0, 0, 3, 3)}};
    const auto w = check_coverage(0, 3, whole, 301);
    CHECK(w.covered());
    CHECK(w.min_max_degree == 1.0);
}

TEST_CASE("linguistic variable validation") {
    auto tri = [](double a, double b, double c) { return MembershipFunction::triangular(a, b, c); };
    auto issue = [](auto&& f) {
        try {
            f();
        } catch (const DefinitionError& e) {
            return e.issue();
        }
        FAIL("expected a DefinitionError");
        return DefinitionIssue::syntax;
    };
    CHECK(issue([&] { LinguisticVariable("X", 0, 20, {{"a", tri(0, 15, 30)}}); }) ==
          DefinitionIssue::support_outside_universe);
    CHECK(issue([&] { LinguisticVariable("X", 0, 3, {{"a", tri(0, 0, 1)}, {"b", tri(2, 3, 3)}}); }) ==
          DefinitionIssue::uncovered_universe);
    CHECK(issue([&] { LinguisticVariable("X", 0, 2, {{"a", tri(0, 0, 2)}, {"a", tri(0, 2, 2)}}); }) ==
          DefinitionIssue::duplicate_label);
    CHECK(issue([&] { LinguisticVariable("X", 0, 2, {{"hi", tri(0, 2, 2)}, {"lo", tri(0, 0, 2)}}); }) ==
          DefinitionIssue::label_order);
    CHECK(issue([&] { LinguisticVariable("X", 0, 2, {}); }) == DefinitionIssue::no_labels);
    CHECK(issue([&] { LinguisticVariable("X", 2, 2, {{"a", tri(2, 2, 2)}}); }) == DefinitionIssue::empty_universe);
    CHECK(issue([&] { LinguisticVariable("9X", 0, 2, {{"a", tri(0, 0, 2)}, {"b", tri(0, 2, 2)}}); }) ==
          DefinitionIssue::invalid_name);

    // Open ends: two half-triangles meeting at a point leave it uncovered.
    CHECK(issue([&] { LinguisticVariable("X", 0, 2, {{"a", tri(0, 0, 1)}, {"b", tri(1, 2, 2)}}); }) ==
          DefinitionIssue::uncovered_universe);
}

TEST_CASE("identifiers") {
    CHECK(is_identifier("PERM-INCENT"));
    CHECK(is_identifier("_x1"));
    CHECK_FALSE(is_identifier(""));
    CHECK_FALSE(is_identifier("-x"));
    CHECK_FALSE(is_identifier("a b"));
}

}
