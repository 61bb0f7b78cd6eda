#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace metpath {

/// Sum with a fixed pairwise tree keyed by index, so results are
/// bit-reproducible regardless of how the terms were produced.
double pairwise_sum(std::span<const double> terms) noexcept;

enum class RefinementStatus { Converged, Diverging, Infinite, Inconclusive };

std::string_view to_string(RefinementStatus s) noexcept;

/// |x - y| <= rel * max(|x|, |y|) + abs_floor.
bool close_enough(double x, double y, double rel, double abs_floor = 0.0) noexcept;

/// Levels aggregated into one increment by increments_diverge.
inline constexpr std::size_t kDivergenceBlock = 4;
inline constexpr double kDivergenceRatio = 0.9;

/// Divergence test shared by every refinement sequence in the library.
/// `partial` holds nondecreasing partial results (one per refinement level).
/// Increments are taken over blocks of kDivergenceBlock levels counted back
/// from the last entry; the sequence diverges when the last two block
/// ratios are all >= kDivergenceRatio and the last block is not negligible
/// (> tol * max(1, |last|)). Single-level ratios are too noisy for
/// logarithmic growth, which is why blocks are used.
bool increments_diverge(std::span<const double> partial, double tol) noexcept;

}  // namespace metpath
