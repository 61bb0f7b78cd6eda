#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "metpath/metric_space.hpp"

namespace metpath {

/// Closed interval [lo, hi] with lo <= hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double t, double slack = 0.0) const noexcept {
        return t >= lo - slack && t <= hi + slack;
    }
};

/// Evaluation points within this distance of the domain are clamped onto it.
inline constexpr double kDomainSlack = 1e-12;

enum class Smoothness {
    Generic,
    Lipschitz,         // see SmoothnessHint::lipschitz_constant
    PiecewiseSmooth,
    PiecewiseGeodesic  // geodesic between consecutive breakpoints
};

struct SmoothnessHint {
    Smoothness kind = Smoothness::Generic;
    double lipschitz_constant = 0.0;
};

/// f : [a, b] -> (M, rho). Immutable; the evaluator must be deterministic.
class Path {
public:
    using Evaluator = std::function<Point(double)>;

    Path(Interval domain, MetricSpace space, Evaluator evaluator, SmoothnessHint hint = {},
         std::vector<double> breakpoints = {});

    [[nodiscard]] const Interval& domain() const noexcept { return domain_; }
    [[nodiscard]] const MetricSpace& space() const noexcept { return space_; }
    [[nodiscard]] const SmoothnessHint& hint() const noexcept { return hint_; }
    /// Interior parameters where the path may fail to be smooth (knots of a
    /// sampled path, junctions of a piecewise fixture). Sorted, inside the domain.
    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    /// f(t). Throws InputError if t is outside the domain beyond kDomainSlack.
    [[nodiscard]] Point evaluate(double t) const;

    /// rho(f(s), f(t)).
    [[nodiscard]] double distance(double s, double t) const;

    [[nodiscard]] const Evaluator& evaluator() const noexcept { return *evaluator_; }

private:
    Interval domain_;
    MetricSpace space_;
    std::shared_ptr<const Evaluator> evaluator_;
    SmoothnessHint hint_;
    std::vector<double> breakpoints_;
};

/// g : [a, b] -> [c, d], with an optional closed-form derivative.
struct RealFunction {
    Interval domain;
    Interval range;
    std::function<double(double)> value;
    std::function<double(double)> derivative;  // may be empty

    [[nodiscard]] double operator()(double x) const { return value(x); }
    /// g'(x); falls back to a central difference when no closed form is given.
    [[nodiscard]] double derivative_at(double x) const;
};

RealFunction identity_function(Interval domain);
RealFunction affine_function(Interval domain, double slope, double intercept);

/// t -> f(g(t)) on the domain of g. Requires range(g) inside domain(f).
Path compose(const Path& f, const RealFunction& g);

/// Same evaluator on [c, d]; requires a <= c <= d <= b.
Path restrict(const Path& path, double c, double d);

}  // namespace metpath
