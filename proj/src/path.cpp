#include "metpath/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metpath/error.hpp"

namespace metpath {

Path::Path(Interval domain, MetricSpace space, Evaluator evaluator, SmoothnessHint hint,
           std::vector<double> breakpoints)
    : domain_(domain),
      space_(std::move(space)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      hint_(hint),
      breakpoints_(std::move(breakpoints)) {
    if (!(domain_.lo <= domain_.hi) || !std::isfinite(domain_.lo) || !std::isfinite(domain_.hi))
        throw InputError("path: domain must be a finite interval with a <= b");
    std::sort(breakpoints_.begin(), breakpoints_.end());
    std::erase_if(breakpoints_, [&](double t) { return !(t > domain_.lo && t < domain_.hi); });
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

Point Path::evaluate(double t) const {
    if (!domain_.contains(t, kDomainSlack)) {
        std::ostringstream os;
        os.precision(17);
        os << "evaluate: t=" << t << " outside domain [" << domain_.lo << ", " << domain_.hi << "]";
        throw InputError(os.str());
    }
    return (*evaluator_)(std::clamp(t, domain_.lo, domain_.hi));
}

double Path::distance(double s, double t) const { return space_.distance(evaluate(s), evaluate(t)); }

double RealFunction::derivative_at(double x) const {
    if (derivative) return derivative(x);
    const double h = 1e-6 * std::max(1.0, domain.length());
    const double lo = std::max(domain.lo, x - h);
    const double hi = std::min(domain.hi, x + h);
    if (hi <= lo) return 0.0;
    return (value(hi) - value(lo)) / (hi - lo);
}

RealFunction identity_function(Interval domain) {
    return RealFunction{domain, domain, [](double x) { return x; }, [](double) { return 1.0; }};
}

RealFunction affine_function(Interval domain, double slope, double intercept) {
    const double y0 = slope * domain.lo + intercept;
    const double y1 = slope * domain.hi + intercept;
    return RealFunction{domain,
                        Interval{std::min(y0, y1), std::max(y0, y1)},
                        [slope, intercept](double x) { return slope * x + intercept; },
                        [slope](double) { return slope; }};
}

Path compose(const Path& f, const RealFunction& g) {
    const Interval& fd = f.domain();
    if (!(g.range.lo >= fd.lo - kDomainSlack && g.range.hi <= fd.hi + kDomainSlack)) {
        std::ostringstream os;
        os << "compose: range [" << g.range.lo << ", " << g.range.hi << "] of g escapes domain [" << fd.lo
           << ", " << fd.hi << "] of f";
        throw InputError(os.str());
    }
    auto eval = [f, gv = g.value](double t) { return f.evaluate(gv(t)); };
    return Path(g.domain, f.space(), std::move(eval));
}

Path restrict(const Path& path, double c, double d) {
    const Interval& dom = path.domain();
    if (!(dom.lo <= c && c <= d && d <= dom.hi))
        throw InputError("restrict: require a <= c <= d <= b");
    return Path(Interval{c, d}, path.space(), path.evaluator(), path.hint(), path.breakpoints());
}

}  // namespace metpath
