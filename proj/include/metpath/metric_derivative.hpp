#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "metpath/path.hpp"

namespace metpath {

enum class MdStatus { Converged, Infinite, NoLimit, Inconclusive };

std::string_view to_string(MdStatus s) noexcept;

struct MdEstimate {
    double x = 0.0;
    double value = 0.0;  // >= 0, may be +inf
    MdStatus status = MdStatus::Inconclusive;
    /// (t, quotient); negative t records the left-hand quotient.
    std::vector<std::pair<double, double>> step_trace;
    /// Largest step below which every probed quotient was <= 1e-12 (0 if none).
    /// Used to build md = 0 regions.
    double zero_radius = 0.0;
};

/// Geometric step schedule t_k = t0 * ratio^k, k = 0..steps.
/// t0 <= 0 selects the default 1e-2 * (b - a).
struct StepSchedule {
    double t0 = 0.0;
    double ratio = 0.5;
    int steps = 30;
};

struct MdOptions {
    double rel_tol = 1e-6;
    double abs_floor = 1e-10;  // absolute agreement floor for quotients near 0
    double cap = 1e12;
};

/// rho(f(x + t), f(x)) / |t|. Requires t != 0 and x, x + t in the domain.
double metric_quotient(const Path& path, double x, double t);

/// md(f, x) from a geometric step schedule. Interior points use both sides,
/// starting no further than the nearest endpoint; each one-sided quotient must
/// settle over three steps and the two sides must agree. Endpoints are one-sided.
/// Infinite when the quotients pass the cap while increasing, or are still
/// growing geometrically (ratio >= 1.1) over the last six steps of the schedule.
MdEstimate metric_derivative(const Path& path, double x, const StepSchedule& schedule = {},
                             const MdOptions& options = {});

struct DefectEstimate {
    double x = 0.0;
    double r = 0.0;
    double defect = 0.0;
    std::size_t pairs = 0;
};

/// Sampled sup of |rho(f(y), f(z)) - md |y - z|| / (|x - y| + |x - z|) over
/// (y, z) in [x - r, x + r]^2 (clipped to the domain), using a deterministic
/// low-discrepancy pair sequence. A lower bound for the true sup.
DefectEstimate metric_differentiability_defect(const Path& path, double x, double md_value, double r,
                                               int samples = 256);

struct MdSample {
    double x = 0.0;
    double md = 0.0;
    MdStatus status = MdStatus::Inconclusive;
    double zero_radius = 0.0;
};

/// metric_derivative at every grid point.
std::vector<MdSample> md_profile(const Path& path, const std::vector<double>& grid, const StepSchedule& schedule = {},
                                 const MdOptions& options = {});

/// Value used when md enters an integral: the estimate itself, +inf when
/// Infinite, NaN (undefined at that point) when NoLimit.
double integrand_value(const MdSample& s) noexcept;

enum class SLabel { BoundedQuotient, Unbounded, Inconclusive };

std::string_view to_string(SLabel s) noexcept;

struct SClassification {
    double x = 0.0;
    SLabel label = SLabel::Inconclusive;
    double max_quotient = 0.0;
};

/// Labels points by whether limsup_{t->0} rho(f(x+t), f(x)) / |t| looks finite.
std::vector<SClassification> classify_S(const Path& path, const std::vector<double>& grid,
                                        const StepSchedule& probes = {}, double bound = 1e6);

}  // namespace metpath
