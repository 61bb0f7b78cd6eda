#include "metpath/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metpath/error.hpp"

namespace metpath {

namespace {

constexpr int kAgreementRun = 3;

struct Knot {
    double t;
    Point p;
};

double chain_sum(const MetricSpace& space, const std::vector<const Knot*>& chain) {
    std::vector<double> d;
    d.reserve(chain.size());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) d.push_back(space.distance(chain[i]->p, chain[i + 1]->p));
    return pairwise_sum(d);
}

// Dyadic knots of the current level merged with the fixed breakpoints.
std::vector<const Knot*> merged(const std::vector<Knot>& uniform, const std::vector<Knot>& breaks) {
    std::vector<const Knot*> out;
    out.reserve(uniform.size() + breaks.size());
    std::size_t i = 0, j = 0;
    while (i < uniform.size() || j < breaks.size()) {
        if (j == breaks.size() || (i < uniform.size() && uniform[i].t <= breaks[j].t)) {
            if (j < breaks.size() && uniform[i].t == breaks[j].t) ++j;
            out.push_back(&uniform[i++]);
        } else {
            out.push_back(&breaks[j++]);
        }
    }
    return out;
}

bool diverging(const std::vector<TracePoint>& trace, double tol) {
    std::vector<double> estimates;
    for (const auto& tp : trace) estimates.push_back(tp.estimate);
    return increments_diverge(estimates, tol);
}

}  // namespace

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw InputError("partition: needs at least one knot");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i] > knots_[i - 1])) throw InputError("partition: knots must be strictly increasing");
    }
}

Partition Partition::uniform(Interval iv, std::size_t n) {
    if (iv.length() == 0.0) return Partition({iv.lo});
    n = std::max<std::size_t>(n, 1);
    std::vector<double> k(n + 1);
    for (std::size_t i = 0; i <= n; ++i) k[i] = iv.lo + iv.length() * (static_cast<double>(i) / n);
    k[n] = iv.hi;
    return Partition(std::move(k));
}

double partition_sum(const Path& path, const Partition& partition) {
    const auto& knots = partition.knots();
    for (double t : knots) {
        if (!path.domain().contains(t, kDomainSlack)) {
            std::ostringstream os;
            os.precision(17);
            os << "partition_sum: knot " << t << " outside the path domain";
            throw InputError(os.str());
        }
    }
    std::vector<double> d;
    d.reserve(knots.size());
    Point prev = path.evaluate(knots.front());
    for (std::size_t i = 1; i < knots.size(); ++i) {
        Point cur = path.evaluate(knots[i]);
        d.push_back(path.space().distance(prev, cur));
        prev = std::move(cur);
    }
    return pairwise_sum(d);
}

RefinementEstimate variation(const Path& path, double tol, int max_level) {
    if (!(tol > 0.0)) throw InputError("variation: tol must be positive");
    if (max_level < 3) throw InputError("variation: max_level must be at least 3");

    RefinementEstimate est;
    est.tolerance_used = tol;
    const Interval dom = path.domain();

    if (dom.length() == 0.0) {
        est.value = 0.0;
        est.status = RefinementStatus::Converged;
        est.trace.push_back({0, 0.0});
        est.converged_level = 0;
        return est;
    }

    std::vector<Knot> breaks;
    for (double t : path.breakpoints()) breaks.push_back({t, path.evaluate(t)});

    // Geodesic between knots: the knot partition already attains the supremum.
    if (path.hint().kind == Smoothness::PiecewiseGeodesic) {
        std::vector<double> knots{dom.lo};
        knots.insert(knots.end(), path.breakpoints().begin(), path.breakpoints().end());
        knots.push_back(dom.hi);
        est.value = partition_sum(path, Partition(std::move(knots)));
        est.status = RefinementStatus::Converged;
        est.trace.push_back({0, est.value});
        est.converged_level = 0;
        return est;
    }

    // Agreement only counts once every piece between breakpoints gets refined;
    // before that, levels can repeat the breakpoint partition unchanged.
    double min_gap = dom.length();
    double last = dom.lo;
    for (double t : path.breakpoints()) {
        min_gap = std::min(min_gap, t - last);
        last = t;
    }
    min_gap = std::min(min_gap, dom.hi - last);
    const int first_counted = std::min(max_level - kAgreementRun,
                                       static_cast<int>(std::ceil(std::log2(dom.length() / min_gap))));

    std::vector<Knot> uniform{{dom.lo, path.evaluate(dom.lo)}, {dom.hi, path.evaluate(dom.hi)}};
    int run = 0;
    for (int level = 0; level <= max_level; ++level) {
        if (level > 0) {
            const std::size_t cells = uniform.size() - 1;
            const double n = static_cast<double>(2 * cells);
            std::vector<Knot> next;
            next.reserve(2 * cells + 1);
            for (std::size_t i = 0; i < cells; ++i) {
                next.push_back(std::move(uniform[i]));
                const double t = dom.lo + dom.length() * (static_cast<double>(2 * i + 1) / n);
                next.push_back({t, path.evaluate(t)});
            }
            next.push_back(std::move(uniform.back()));
            uniform = std::move(next);
        }
        const double s = chain_sum(path.space(), merged(uniform, breaks));
        est.trace.push_back({level, s});
        est.value = s;
        if (std::isinf(s)) {
            est.status = RefinementStatus::Infinite;
            return est;
        }
        if (level == 0 || level <= first_counted) continue;
        const double prev = est.trace[est.trace.size() - 2].estimate;
        if (std::abs(s - prev) <= tol * std::max(1.0, std::abs(s))) {
            if (++run >= kAgreementRun) {
                est.status = RefinementStatus::Converged;
                est.converged_level = level - run + 1;
                return est;
            }
        } else {
            run = 0;
        }
    }
    if (run > 0) {
        est.status = RefinementStatus::Converged;
        est.converged_level = max_level - run + 1;
    } else if (diverging(est.trace, tol)) {
        est.status = RefinementStatus::Diverging;
    }
    return est;
}

VariationProfile variation_function(const Path& path, const std::vector<double>& grid, double tol,
                                    int max_level) {
    VariationProfile out;
    const Interval dom = path.domain();
    double prev_t = dom.lo;
    double acc = 0.0;
    for (double t : grid) {
        if (!dom.contains(t, kDomainSlack)) throw InputError("variation_function: grid point outside the domain");
        if (t < prev_t) throw InputError("variation_function: grid must be nondecreasing");
        t = std::clamp(t, dom.lo, dom.hi);
        if (t > prev_t) {
            const auto piece = variation(restrict(path, prev_t, t), tol, max_level);
            if (piece.status == RefinementStatus::Diverging || piece.status == RefinementStatus::Infinite)
                out.unbounded = true;
            if (piece.status != RefinementStatus::Converged) out.all_converged = false;
            acc += piece.value;
        }
        out.values.emplace_back(t, acc);
        prev_t = t;
    }
    if (out.unbounded) {
        for (auto& [t, v] : out.values) {
            if (t > dom.lo) v = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

BvVerdict is_bounded_variation(const Path& path, double tol, int max_level) {
    BvVerdict v;
    v.estimate = variation(path, tol, max_level);
    switch (v.estimate.status) {
        case RefinementStatus::Converged: v.kind = BvKind::BV; break;
        case RefinementStatus::Diverging: v.kind = BvKind::NotBV; break;
        case RefinementStatus::Infinite:
        case RefinementStatus::Inconclusive: v.kind = BvKind::Inconclusive; break;
    }
    return v;
}

}  // namespace metpath
