#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "metpath/numeric.hpp"
#include "metpath/path.hpp"

namespace metpath {

/// Finite union of closed intervals, sorted, with pairwise disjoint interiors.
class IntervalUnion {
public:
    IntervalUnion() = default;
    /// Sorts the components; throws InputError if two of them overlap in more
    /// than an endpoint or a component is reversed.
    explicit IntervalUnion(std::vector<Interval> components);

    /// Union of arbitrary (possibly overlapping) intervals.
    static IntervalUnion merged(std::vector<Interval> intervals);

    [[nodiscard]] const std::vector<Interval>& components() const noexcept { return components_; }
    [[nodiscard]] bool empty() const noexcept { return components_.empty(); }
    [[nodiscard]] bool inside(const Interval& domain) const noexcept;
    /// Closure of domain minus this union.
    [[nodiscard]] IntervalUnion complement_in(const Interval& domain) const;

private:
    std::vector<Interval> components_;
};

/// m*(E): sum of component lengths.
double outer_measure(const IntervalUnion& set);

struct CoverTracePoint {
    double delta = 0.0;
    double upper = 0.0;
    std::size_t pieces = 0;
};

struct CoverEstimate {
    double delta = 0.0;  // finest delta used
    double upper = 0.0;  // sum of sampled diameters at that delta; +inf when Infinite
    RefinementStatus status = RefinementStatus::Converged;
    std::vector<CoverTracePoint> trace;
};

inline constexpr int kDiameterSamples = 33;

/// H^1 proxy for f(E): for each delta, parameter subintervals of E are bisected
/// until their sampled image diameter (33 points, max pairwise distance) is
/// below delta, and the diameters are summed. Sampling under-estimates each
/// diameter, so the result is a desk-scale proxy, not a certified bound.
/// Status Infinite when subdivision stops shrinking the image or the sums keep
/// growing by >= 10% across the last deltas.
CoverEstimate hausdorff_length(const Path& path, const IntervalUnion& set,
                               const std::vector<double>& delta_schedule = {1e-1, 1e-2, 1e-3});

struct IndicatrixSample {
    Point y;
    double radius = 0.0;
    std::size_t count = 0;
};

/// Number of maximal runs of grid parameters in E whose image lies within
/// `radius` of y. Preimages closer than grid_step merge into one run.
IndicatrixSample banach_indicatrix(const Path& path, const IntervalUnion& set, const Point& y, double radius,
                                   double grid_step);

enum class IntegrabilityFlag { Integrable, NonIntegrable, Inconclusive };

std::string_view to_string(IntegrabilityFlag f) noexcept;

struct IntegralEstimate {
    double value = 0.0;
    IntegrabilityFlag flag = IntegrabilityFlag::Inconclusive;
    std::size_t infinite_cells = 0;
    /// Partial integrals approaching the worst singular point, outermost first.
    std::vector<double> shell_partials;
};

/// Trapezoid integral of sampled nonnegative values. Cells touching +inf are
/// left out of the sum; NaN marks a point where the integrand is undefined and
/// the cell takes the value at its other end. Endpoints and infinite samples
/// are treated as candidate singularities: the integral over dyadic distance
/// shells towards each is accumulated and tested with increments_diverge.
/// Integrable when no candidate diverges and the sum moves by <= 1e-4
/// (relative) when every other interior grid point is dropped.
IntegralEstimate integrate_grid(const std::vector<std::pair<double, double>>& values);

/// Uniform grid of `cells` cells on iv whose outer sixteenths are replaced by
/// `shells` geometric shells of `per_shell` points each, so that integrands
/// singular at an endpoint are resolved down to (length / 16) * 2^-shells.
/// The defaults match the uniform spacing at the zone boundary for 4096 cells.
std::vector<double> graded_grid(const Interval& iv, std::size_t cells, int shells = 40, int per_shell = 128);

}  // namespace metpath
