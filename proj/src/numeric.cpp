#include "metpath/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace metpath {

double pairwise_sum(std::span<const double> terms) noexcept {
    constexpr std::size_t kLeaf = 8;
    if (terms.size() <= kLeaf) {
        double acc = 0.0;
        for (double t : terms) acc += t;
        return acc;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

std::string_view to_string(RefinementStatus s) noexcept {
    switch (s) {
        case RefinementStatus::Converged: return "Converged";
        case RefinementStatus::Diverging: return "Diverging";
        case RefinementStatus::Infinite: return "Infinite";
        case RefinementStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

bool close_enough(double x, double y, double rel, double abs_floor) noexcept {
    if (x == y) return true;
    return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)) + abs_floor;
}

bool increments_diverge(std::span<const double> partial, double tol) noexcept {
    constexpr std::size_t kBlocks = 3;
    if (partial.size() < kBlocks * kDivergenceBlock + 1) return false;
    const std::size_t n = partial.size() - 1;
    double block[kBlocks];  // block[0] is the most recent
    for (std::size_t j = 0; j < kBlocks; ++j)
        block[j] = partial[n - j * kDivergenceBlock] - partial[n - (j + 1) * kDivergenceBlock];
    if (!std::isfinite(block[0]) || block[0] <= tol * std::max(1.0, std::abs(partial[n]))) return false;
    for (std::size_t j = 0; j + 1 < kBlocks; ++j) {
        if (!(block[j + 1] > 0.0) || block[j] / block[j + 1] < kDivergenceRatio) return false;
    }
    return true;
}

}  // namespace metpath
