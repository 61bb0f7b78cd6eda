#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "metpath/error.hpp"
#include "metpath/fixtures.hpp"
#include "metpath/measures.hpp"
#include "metpath/variation.hpp"

using namespace metpath;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<double, double>> tabulate(const std::vector<double>& xs, double (*f)(double)) {
    std::vector<std::pair<double, double>> out;
    for (double x : xs) out.emplace_back(x, f(x));
    return out;
}

}  // namespace

TEST_CASE("interval unions and outer measure") {
    CHECK(outer_measure(IntervalUnion({{0.0, 1.0}})) == 1.0);
    CHECK(outer_measure(IntervalUnion({{0.5, 0.75}, {0.0, 0.25}})) == 0.5);
    CHECK(outer_measure(IntervalUnion()) == 0.0);
    CHECK(IntervalUnion({{0.5, 0.75}, {0.0, 0.25}}).components().front().lo == 0.0);
    CHECK_NOTHROW(IntervalUnion({{0.0, 0.5}, {0.5, 1.0}}));
    CHECK_THROWS_AS(IntervalUnion({{0.0, 0.6}, {0.5, 1.0}}), InputError);
    CHECK_THROWS_AS(IntervalUnion({{1.0, 0.0}}), InputError);
    const auto m = IntervalUnion::merged({{0.0, 0.6}, {0.5, 1.0}, {2.0, 3.0}});
    CHECK(m.components().size() == 2);
    CHECK(outer_measure(m) == 2.0);
    const auto c = IntervalUnion({{0.25, 0.5}}).complement_in({0.0, 1.0});
    CHECK(outer_measure(c) == 0.75);
}

TEST_CASE("outer measure is additive on disjoint unions") {
    auto gen = oracle::rng(67);
    std::uniform_int_distribution<int> u(0, 1023);
    for (int trial = 0; trial < 200; ++trial) {
        // Dyadic endpoints keep every sum exact.
        std::vector<double> cuts;
        for (int i = 0; i < 6; ++i) cuts.push_back(u(gen) / 1024.0);
        std::sort(cuts.begin(), cuts.end());
        const IntervalUnion a({{cuts[0], cuts[1]}, {cuts[4], cuts[5]}});
        const IntervalUnion b({{cuts[2], cuts[3]}});
        const IntervalUnion ab({{cuts[0], cuts[1]}, {cuts[2], cuts[3]}, {cuts[4], cuts[5]}});
        CHECK(outer_measure(ab) == outer_measure(a) + outer_measure(b));
    }
}

TEST_CASE("hausdorff length examples") {
    SUBCASE("constant") {
        CHECK(hausdorff_length(make_fixture("constant").path, IntervalUnion({{0.0, 1.0}})).upper == 0.0);
    }
    SUBCASE("segment") {
        const auto h = hausdorff_length(make_fixture("segment").path, IntervalUnion({{0.0, 2.0}}));
        CHECK(h.status == RefinementStatus::Converged);
        CHECK(std::abs(h.upper - 2.0) <= 1e-6);
        REQUIRE(h.trace.size() == 3);
        CHECK(h.trace[0].delta > h.trace[1].delta);
    }
    SUBCASE("cantor flat parts") {
        // Interval endpoints are not exact in binary; each one contributes
        // about 1e-11 through the Hoelder modulus of the staircase.
        for (int level : {1, 3, 6}) {
            const IntervalUnion flats({cantor_removed_intervals(level)});
            CHECK(hausdorff_length(make_fixture("cantor").path, flats).upper <= 1e-8);
        }
    }
    SUBCASE("snowflake is infinite") {
        const auto h = hausdorff_length(make_fixture("snowflake_id").path, IntervalUnion({{0.0, 1.0}}));
        CHECK(h.status == RefinementStatus::Infinite);
        CHECK(std::isinf(h.upper));
    }
    SUBCASE("errors") {
        const Path seg = make_fixture("segment").path;
        CHECK_THROWS_AS(hausdorff_length(seg, IntervalUnion({{0.0, 3.0}})), InputError);
        CHECK_THROWS_AS(hausdorff_length(seg, IntervalUnion({{0.0, 1.0}}), {0.1, 0.01}), InputError);
        CHECK_THROWS_AS(hausdorff_length(seg, IntervalUnion({{0.0, 1.0}}), {0.1, 0.2, 0.01}), InputError);
    }
}

TEST_CASE("hausdorff length is subadditive") {
    auto gen = oracle::rng(71);
    for (const char* name : {"circle", "sqrt", "cantor", "helix_embedded"}) {
        CAPTURE(name);
        const Path path = make_fixture(name).path;
        const Interval d = path.domain();
        std::uniform_real_distribution<double> u(d.lo, d.hi);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> cuts{u(gen), u(gen), u(gen), u(gen)};
            std::sort(cuts.begin(), cuts.end());
            const IntervalUnion e1({{cuts[0], cuts[1]}}), e2({{cuts[2], cuts[3]}});
            const IntervalUnion both({{cuts[0], cuts[1]}, {cuts[2], cuts[3]}});
            CHECK(hausdorff_length(path, both).upper <=
                  hausdorff_length(path, e1).upper + hausdorff_length(path, e2).upper + 1e-9);
        }
    }
}

TEST_CASE("hausdorff length matches variation on injective paths") {
    const Path half_circle = restrict(make_fixture("circle").path, 0.0, oracle::kPi);
    for (const Path& path : {make_fixture("segment").path, make_fixture("sqrt").path, half_circle,
                             make_fixture("segment", {{"speed", 3.0}, {"b", 1.0}}).path}) {
        const Interval d = path.domain();
        const double v = variation(path).value;
        const double h = hausdorff_length(path, IntervalUnion({d})).upper;
        CHECK(std::abs(h - v) <= 1e-3 * v);
    }
}

TEST_CASE("banach indicatrix") {
    CHECK(banach_indicatrix(make_fixture("segment").path, IntervalUnion({{0.0, 2.0}}), {0.7, 0.0}, 1e-3, 1e-4).count ==
          1);
    // y = (-1, 0) is hit once per loop and by neither endpoint.
    const Path loops = make_fixture("circle", {{"b", 4.0 * oracle::kPi}}).path;
    CHECK(banach_indicatrix(loops, IntervalUnion({{0.0, 4.0 * oracle::kPi}}), {-1.0, 0.0}, 1e-3, 1e-4).count == 2);
    CHECK(banach_indicatrix(make_fixture("constant").path, IntervalUnion({{0.0, 1.0}}), {0.0}, 1e-6, 1e-3).count == 1);
    CHECK(banach_indicatrix(make_fixture("segment").path, IntervalUnion({{0.0, 2.0}}), {5.0, 0.0}, 1e-3, 1e-3).count ==
          0);
    CHECK_THROWS_AS(banach_indicatrix(loops, IntervalUnion({{0.0, 1.0}}), {1.0, 0.0}, 0.0, 1e-3), InputError);
}

TEST_CASE("integrate_grid examples") {
    SUBCASE("constant integrand") {
        const auto e = integrate_grid(tabulate(graded_grid({0.0, 2.0}, 256), [](double) { return 1.0; }));
        CHECK(e.flag == IntegrabilityFlag::Integrable);
        CHECK(e.value == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("inverse square root from 1e-8") {
        const double eps = std::ldexp(1.0, -27);  // dyadic, ~7.5e-9
        const auto e = integrate_grid(tabulate(graded_grid({eps, 1.0}, 4096), [](double x) { return 0.5 / std::sqrt(x); }));
        CHECK(e.flag == IntegrabilityFlag::Integrable);
        CHECK(e.value == doctest::Approx(1.0 - std::sqrt(eps)).epsilon(1e-4));
    }
    SUBCASE("inverse square root with the singular endpoint") {
        const auto e = integrate_grid(
            tabulate(graded_grid({0.0, 1.0}, 4096), [](double x) { return x == 0.0 ? kInf : 0.5 / std::sqrt(x); }));
        CHECK(e.flag == IntegrabilityFlag::Integrable);
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(e.infinite_cells == 1);
    }
    SUBCASE("1/x is not integrable") {
        const auto e =
            integrate_grid(tabulate(graded_grid({0.0, 1.0}, 4096), [](double x) { return x == 0.0 ? kInf : 1.0 / x; }));
        CHECK(e.flag == IntegrabilityFlag::NonIntegrable);
        CHECK(e.shell_partials.size() >= 8);
    }
    SUBCASE("NaN points take the neighbouring value") {
        const auto e = integrate_grid({{0.0, 1.0}, {0.5, std::nan("")}, {1.0, 1.0}});
        CHECK(e.value == doctest::Approx(1.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(integrate_grid({{0.0, 1.0}, {0.0, 1.0}}), InputError);
        CHECK_THROWS_AS(integrate_grid({{0.0, 1.0}, {1.0, -1.0}}), InputError);
    }
}

TEST_CASE("integrate_grid is monotone in the integrand") {
    auto gen = oracle::rng(73);
    std::uniform_real_distribution<double> u(0.0, 5.0), bump(0.0, 1.0);
    const auto grid = graded_grid({0.0, 1.0}, 512);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> f, g;
        for (double x : grid) {
            const double v = u(gen);
            f.emplace_back(x, v);
            g.emplace_back(x, v + (bump(gen) < 0.3 ? bump(gen) : 0.0));
        }
        CHECK(integrate_grid(f).value <= integrate_grid(g).value);
    }
}

TEST_CASE("graded grid") {
    const auto g = graded_grid({0.0, 1.0}, 4096);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);
    CHECK(g[1] <= std::ldexp(1.0 / 16.0, -40) * 1.01);
    CHECK(graded_grid({1.0, 1.0}, 16).size() == 1);
    CHECK_THROWS_AS(graded_grid({0.0, 1.0}, 0), InputError);
}
