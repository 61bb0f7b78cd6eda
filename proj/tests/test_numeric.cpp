#include <cmath>
#include <vector>

#include "doctest.h"

#include "metpath/numeric.hpp"

using namespace metpath;

TEST_CASE("pairwise sum") {
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{1.5}) == 1.5);
    std::vector<double> tenths(1000, 0.1);
    CHECK(pairwise_sum(tenths) == doctest::Approx(100.0).epsilon(1e-14));
    std::vector<double> mixed{1e16, 1.0, -1e16, 1.0};
    CHECK(pairwise_sum(mixed) == pairwise_sum(mixed));
}

TEST_CASE("close enough") {
    CHECK(close_enough(1.0, 1.0 + 1e-7, 1e-6));
    CHECK_FALSE(close_enough(1.0, 1.0 + 1e-5, 1e-6));
    CHECK(close_enough(0.0, 1e-11, 1e-6, 1e-10));
    CHECK_FALSE(close_enough(0.0, 1e-9, 1e-6, 1e-10));
}

TEST_CASE("increments_diverge") {
    SUBCASE("logarithmic growth diverges") {
        std::vector<double> partial;
        double s = 0.0;
        for (int k = 1; k <= 16; ++k) {
            s += 1.0;  // sum over a dyadic block of a harmonic series
            partial.push_back(s);
        }
        CHECK(increments_diverge(partial, 1e-6));
    }
    SUBCASE("geometric convergence does not") {
        std::vector<double> partial;
        double s = 0.0;
        for (int k = 1; k <= 16; ++k) {
            s += std::pow(0.5, k);
            partial.push_back(s);
        }
        CHECK_FALSE(increments_diverge(partial, 1e-6));
    }
    SUBCASE("too short") { CHECK_FALSE(increments_diverge(std::vector<double>{1, 2, 3}, 1e-6)); }
    SUBCASE("stalled") { CHECK_FALSE(increments_diverge(std::vector<double>(16, 2.0), 1e-6)); }
}

TEST_CASE("status names") {
    CHECK(to_string(RefinementStatus::Converged) == "Converged");
    CHECK(to_string(RefinementStatus::Diverging) == "Diverging");
}
