#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "metpath/error.hpp"
#include "metpath/fixtures.hpp"
#include "metpath/variation.hpp"

using namespace metpath;

TEST_CASE("partition_sum examples") {
    const auto circle = make_fixture("circle");
    const Path half = restrict(circle.path, 0.0, oracle::kPi);
    CHECK(partition_sum(half, Partition::uniform({0.0, oracle::kPi}, 3)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(partition_sum(half, Partition({0.0, oracle::kPi})) == doctest::Approx(2.0).epsilon(1e-15));
    const auto constant = make_fixture("constant", {{"dim", 3}, {"value", 1.0}});
    CHECK(partition_sum(constant.path, Partition({0.0, 0.2, 0.9, 1.0})) == 0.0);
    CHECK_THROWS_AS(partition_sum(half, Partition({0.0, 4.0})), InputError);
    CHECK_THROWS_AS(Partition({0.0, 0.0}), InputError);
    CHECK_THROWS_AS(Partition({}), InputError);
}

TEST_CASE("partition sums follow the chord oracle") {
    const auto circle = make_fixture("circle");
    for (std::size_t n : {1u, 2u, 5u, 64u, 1000u}) {
        const double s = partition_sum(circle.path, Partition::uniform(circle.path.domain(), n));
        CHECK(s == doctest::Approx(oracle::circle_chords(2.0 * oracle::kPi, n)).epsilon(1e-12));
    }
}

TEST_CASE("variation examples") {
    SUBCASE("segment") {
        const auto est = variation(make_fixture("segment").path);
        CHECK(est.status == RefinementStatus::Converged);
        CHECK(est.value == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(est.converged_level == 1);
    }
    SUBCASE("cantor") {
        const auto est = variation(make_fixture("cantor").path, 1e-6);
        CHECK(est.status == RefinementStatus::Converged);
        CHECK(std::abs(est.value - 1.0) <= 1e-6);
    }
    SUBCASE("circle") {
        const auto bv = is_bounded_variation(make_fixture("circle").path, 1e-6, 16);
        CHECK(bv.kind == BvKind::BV);
        CHECK(bv.estimate.value == doctest::Approx(2.0 * oracle::kPi).epsilon(1e-6));
    }
    SUBCASE("osc_bv_fail diverges") {
        CHECK(variation(make_fixture("osc_bv_fail").path).status == RefinementStatus::Diverging);
    }
    SUBCASE("snowflake and diff_not_bv are not BV") {
        CHECK(is_bounded_variation(make_fixture("snowflake_id").path).kind == BvKind::NotBV);
        CHECK(is_bounded_variation(make_fixture("diff_not_bv").path).kind == BvKind::NotBV);
    }
    SUBCASE("degenerate interval") {
        const auto est = variation(make_fixture("segment", {{"a", 1.0}, {"b", 1.0}}).path);
        CHECK(est.value == 0.0);
        CHECK(est.status == RefinementStatus::Converged);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(variation(make_fixture("segment").path, 0.0), InputError);
        CHECK_THROWS_AS(variation(make_fixture("segment").path, 1e-6, 2), InputError);
    }
}

TEST_CASE("snowflake partition sums grow like 2^(k/2)") {
    const auto est = variation(make_fixture("snowflake_id").path, 1e-6, 12);
    for (const auto& tp : est.trace)
        CHECK(tp.estimate == doctest::Approx(std::pow(2.0, tp.level / 2.0)).epsilon(1e-12));
}

TEST_CASE("converged traces settle within the tolerance") {
    for (const char* name : {"segment", "circle", "sqrt", "cantor", "helix_embedded", "seg_const"}) {
        CAPTURE(name);
        const auto est = variation(make_fixture(name).path, 1e-6, 16);
        REQUIRE(est.status == RefinementStatus::Converged);
        const double last = est.trace.back().estimate, prev = est.trace[est.trace.size() - 2].estimate;
        CHECK(std::abs(last - prev) <= est.tolerance_used * std::max(1.0, std::abs(est.value)));
    }
}

TEST_CASE("refinement monotonicity") {
    for (const auto& name : fixture_names()) {
        CAPTURE(name);
        const auto est = variation(make_fixture(name).path, 1e-6, 12);
        for (std::size_t i = 1; i < est.trace.size(); ++i) CHECK(est.trace[i].estimate >= est.trace[i - 1].estimate);
    }
}

TEST_CASE("adding a knot never decreases the partition sum") {
    auto gen = oracle::rng(41);
    for (const char* name : {"circle", "sqrt", "cantor", "osc_bv_fail", "helix_embedded"}) {
        CAPTURE(name);
        const Path path = make_fixture(name).path;
        const Interval d = path.domain();
        std::uniform_real_distribution<double> u(d.lo, d.hi);
        std::vector<double> knots{d.lo, d.hi};
        double prev = partition_sum(path, Partition(knots));
        CHECK(prev >= path.distance(d.lo, d.hi));
        for (int i = 0; i < 200; ++i) {
            const double t = u(gen);
            if (std::find(knots.begin(), knots.end(), t) != knots.end()) continue;
            knots.insert(std::upper_bound(knots.begin(), knots.end(), t), t);
            const double s = partition_sum(path, Partition(knots));
            CHECK(s >= prev * (1.0 - 1e-15));
            prev = s;
        }
    }
}

TEST_CASE("variation function") {
    const double tol = 1e-6;
    SUBCASE("constant") {
        const auto prof = variation_function(make_fixture("constant").path, {0.0, 0.5, 1.0}, tol);
        for (const auto& [t, v] : prof.values) CHECK(v == 0.0);
    }
    SUBCASE("segment") {
        const auto prof = variation_function(make_fixture("segment").path, {0.0, 0.3, 1.0, 1.7, 2.0}, tol);
        for (const auto& [t, v] : prof.values) CHECK(v == doctest::Approx(t).epsilon(1e-12));
    }
    SUBCASE("cantor on a dyadic grid") {
        std::vector<double> grid;
        for (int i = 0; i <= 16; ++i) grid.push_back(i / 16.0);
        const auto prof = variation_function(make_fixture("cantor").path, grid, tol, 14);
        for (const auto& [t, v] : prof.values) CHECK(std::abs(v - oracle::cantor(t)) <= 2e-6);
    }
    SUBCASE("unbounded") {
        const auto prof = variation_function(make_fixture("osc_bv_fail").path, {0.0, 0.5, 1.0}, tol);
        CHECK(prof.unbounded);
        CHECK(std::isinf(prof.values.back().second));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(variation_function(make_fixture("segment").path, {1.0, 0.5}), InputError);
        CHECK_THROWS_AS(variation_function(make_fixture("segment").path, {3.0}), InputError);
    }
}

TEST_CASE("v_f is nondecreasing and dominates chord distances") {
    const double tol = 1e-6;
    for (const char* name : {"circle", "sqrt", "helix_embedded", "cantor", "seg_const"}) {
        CAPTURE(name);
        const Path path = make_fixture(name).path;
        const Interval d = path.domain();
        std::vector<double> grid;
        for (int i = 0; i <= 24; ++i) grid.push_back(d.lo + d.length() * i / 24.0);
        grid.back() = d.hi;
        const auto prof = variation_function(path, grid, tol, 14);
        REQUIRE(prof.all_converged);
        const double scale = std::max(1.0, prof.values.back().second);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = i + 1; j < grid.size(); ++j) {
                const double dv = prof.values[j].second - prof.values[i].second;
                CHECK(dv >= 0.0);
                CHECK(path.distance(grid[i], grid[j]) <= dv + 2.0 * tol * scale);
            }
        }
    }
}

TEST_CASE("variation is additive over adjacent intervals") {
    const double tol = 1e-6;
    auto gen = oracle::rng(43);
    for (const char* name : {"circle", "sqrt", "cantor"}) {
        CAPTURE(name);
        const Path path = make_fixture(name).path;
        const Interval d = path.domain();
        std::uniform_real_distribution<double> u(d.lo, d.hi);
        for (int i = 0; i < 5; ++i) {
            const double c = u(gen);
            const double whole = variation(path, tol).value;
            const double left = variation(restrict(path, d.lo, c), tol).value;
            const double right = variation(restrict(path, c, d.hi), tol).value;
            CHECK(std::abs(whole - left - right) <= 2.0 * tol * std::max(1.0, whole) + 2e-6);
        }
    }
}

TEST_CASE("polyline variation equals the best knot partition") {
    auto gen = oracle::rng(47);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t count = 3 + trial % 10;
        std::vector<Point> pts(count, Point(2));
        std::vector<double> knots;
        for (std::size_t i = 0; i < count; ++i) {
            pts[i] = {n(gen), n(gen)};
            knots.push_back(static_cast<double>(i));
        }
        const Path path(
            Interval{0.0, static_cast<double>(count - 1)}, euclidean(2),
            [pts](double t) {
                const auto i = std::min(static_cast<std::size_t>(t), pts.size() - 2);
                const double w = t - static_cast<double>(i);
                return Point{pts[i][0] + w * (pts[i + 1][0] - pts[i][0]), pts[i][1] + w * (pts[i + 1][1] - pts[i][1])};
            },
            {Smoothness::PiecewiseGeodesic, 0.0}, std::vector<double>(knots.begin() + 1, knots.end() - 1));
        const double exact = oracle::exhaustive_knot_partition(pts);
        CHECK(oracle::best_knot_partition(pts) == doctest::Approx(exact).epsilon(1e-13));
        CHECK(variation(path).value == doctest::Approx(exact).epsilon(1e-13));
    }
}
