#pragma once

#include <utility>
#include <vector>

#include "metpath/numeric.hpp"
#include "metpath/path.hpp"

namespace metpath {

/// Strictly increasing knots x_0 < ... < x_n.
class Partition {
public:
    explicit Partition(std::vector<double> knots);

    /// n equal subintervals of [lo, hi].
    static Partition uniform(Interval iv, std::size_t n);

    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }
    [[nodiscard]] std::size_t intervals() const noexcept { return knots_.empty() ? 0 : knots_.size() - 1; }

private:
    std::vector<double> knots_;
};

struct TracePoint {
    int level = 0;
    double estimate = 0.0;
};

struct RefinementEstimate {
    double value = 0.0;  // may be +inf
    RefinementStatus status = RefinementStatus::Inconclusive;
    std::vector<TracePoint> trace;
    double tolerance_used = 0.0;
    /// First level of the agreeing run that established convergence (-1 otherwise).
    int converged_level = -1;
};

/// sum_i rho(f(x_i), f(x_{i+1})). Throws InputError if a knot leaves the domain.
double partition_sum(const Path& path, const Partition& partition);

/// Total variation by nested dyadic refinement (uniform 2^k cells plus the
/// path's breakpoints, k = 0..max_level). Every estimate is a lower bound.
/// Converged: three successive levels agree within tol (relative, floor 1);
/// Diverging: the last three increment ratios are all >= 0.9.
RefinementEstimate variation(const Path& path, double tol = 1e-6, int max_level = 16);

struct VariationProfile {
    std::vector<std::pair<double, double>> values;  // (t, v_f(t))
    bool unbounded = false;
    bool all_converged = true;
};

/// v_f(t) = variation on [a, t] at each grid point, accumulated piecewise
/// over consecutive grid cells so the result is additive by construction.
VariationProfile variation_function(const Path& path, const std::vector<double>& grid, double tol = 1e-6,
                                    int max_level = 12);

enum class BvKind { BV, NotBV, Inconclusive };

struct BvVerdict {
    BvKind kind = BvKind::Inconclusive;
    RefinementEstimate estimate;
};

BvVerdict is_bounded_variation(const Path& path, double tol = 1e-6, int max_level = 16);

}  // namespace metpath
