#include "metpath/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metpath/error.hpp"

namespace metpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDepth = 60;
constexpr std::size_t kMaxPieces = std::size_t{1} << 22;
constexpr double kGrowthRatio = 1.1;
constexpr double kStabilityTol = 1e-4;
constexpr std::size_t kMaxSingularCandidates = 64;
constexpr double kGradedZone = 1.0 / 16.0;

double sampled_diameter(const Path& path, double lo, double hi) {
    if (hi <= lo) return 0.0;
    std::vector<Point> pts;
    pts.reserve(kDiameterSamples);
    for (int i = 0; i < kDiameterSamples; ++i) {
        const double t = i == kDiameterSamples - 1 ? hi : lo + (hi - lo) * (static_cast<double>(i) / (kDiameterSamples - 1));
        pts.push_back(path.evaluate(t));
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, path.space().distance(pts[i], pts[j]));
    return diam;
}

struct CellSums {
    double value = 0.0;
    std::size_t infinite = 0;
};

// Contribution of cell [t0, t1]; +inf when either end is infinite.
double cell_integral(double t0, double v0, double t1, double v1) {
    const double h = t1 - t0;
    if (std::isinf(v0) || std::isinf(v1)) return kInf;
    const bool n0 = std::isnan(v0), n1 = std::isnan(v1);
    if (n0 && n1) return 0.0;
    if (n0) return v1 * h;
    if (n1) return v0 * h;
    return 0.5 * (v0 + v1) * h;
}

CellSums trapezoid(const std::vector<std::pair<double, double>>& pts, std::size_t stride) {
    CellSums out;
    std::vector<double> terms;
    std::size_t prev = 0;
    for (std::size_t i = stride; ; i += stride) {
        const std::size_t cur = std::min(i, pts.size() - 1);
        const double c = cell_integral(pts[prev].first, pts[prev].second, pts[cur].first, pts[cur].second);
        if (std::isinf(c)) ++out.infinite;
        else terms.push_back(c);
        prev = cur;
        if (cur == pts.size() - 1) break;
    }
    out.value = pairwise_sum(terms);
    return out;
}

// Partial integrals over dyadic distance shells approaching `s` from one side,
// outermost shell first. Stops at the first shell the grid does not reach.
std::vector<double> shell_partials(const std::vector<std::pair<double, double>>& pts, const std::vector<double>& cells,
                                   double s, bool right_side) {
    const double extent = right_side ? pts.back().first - s : s - pts.front().first;
    std::vector<double> partials;
    if (!(extent > 0.0)) return partials;
    std::vector<double> shell_sum(kMaxDepth + 1, 0.0);
    std::vector<int> shell_count(kMaxDepth + 1, 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double mid = 0.5 * (pts[i].first + pts[i + 1].first);
        const double dist = right_side ? mid - s : s - mid;
        if (!(dist > 0.0)) continue;
        const int j = static_cast<int>(std::floor(std::log2(extent / dist)));
        if (j < 0 || j > kMaxDepth) continue;
        ++shell_count[static_cast<std::size_t>(j)];
        if (std::isfinite(cells[i])) shell_sum[static_cast<std::size_t>(j)] += cells[i];
    }
    double acc = 0.0;
    for (int j = 0; j <= kMaxDepth; ++j) {
        if (shell_count[static_cast<std::size_t>(j)] == 0) break;
        acc += shell_sum[static_cast<std::size_t>(j)];
        partials.push_back(acc);
    }
    return partials;
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> components) : components_(std::move(components)) {
    std::sort(components_.begin(), components_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (!(components_[i].lo <= components_[i].hi)) throw InputError("interval union: component with lo > hi");
        if (i > 0 && components_[i].lo < components_[i - 1].hi)
            throw InputError("interval union: overlapping components");
    }
}

IntervalUnion IntervalUnion::merged(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : intervals) {
        if (!(iv.lo <= iv.hi)) throw InputError("interval union: component with lo > hi");
        if (!out.empty() && iv.lo <= out.back().hi) out.back().hi = std::max(out.back().hi, iv.hi);
        else out.push_back(iv);
    }
    return IntervalUnion(std::move(out));
}

bool IntervalUnion::inside(const Interval& domain) const noexcept {
    return std::all_of(components_.begin(), components_.end(), [&](const Interval& iv) {
        return iv.lo >= domain.lo - kDomainSlack && iv.hi <= domain.hi + kDomainSlack;
    });
}

IntervalUnion IntervalUnion::complement_in(const Interval& domain) const {
    std::vector<Interval> out;
    double cursor = domain.lo;
    for (const auto& iv : components_) {
        if (iv.lo > cursor) out.push_back({cursor, std::min(iv.lo, domain.hi)});
        cursor = std::max(cursor, iv.hi);
    }
    if (cursor < domain.hi) out.push_back({cursor, domain.hi});
    return IntervalUnion(std::move(out));
}

double outer_measure(const IntervalUnion& set) {
    std::vector<double> lengths;
    for (const auto& iv : set.components()) lengths.push_back(iv.length());
    return pairwise_sum(lengths);
}

CoverEstimate hausdorff_length(const Path& path, const IntervalUnion& set, const std::vector<double>& deltas) {
    if (deltas.size() < 3) throw InputError("hausdorff_length: delta schedule needs at least 3 entries");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw InputError("hausdorff_length: delta schedule must be positive and strictly decreasing");
    }
    if (!set.inside(path.domain())) throw InputError("hausdorff_length: set leaves the path domain");

    CoverEstimate est;
    for (double delta : deltas) {
        std::vector<double> diameters;
        bool stuck = false;
        // Sums only grow as pieces are added, so once the running sum passes
        // the growth bound after an earlier growth step the verdict is fixed.
        const std::size_t n = est.trace.size();
        const bool grew = n >= 2 && est.trace[n - 2].upper > 0.0 &&
                          est.trace[n - 1].upper >= kGrowthRatio * est.trace[n - 2].upper &&
                          delta == deltas.back();
        const double bound = grew ? kGrowthRatio * est.trace[n - 1].upper : kInf;
        double running = 0.0;
        bool outgrown = false;
        struct Piece {
            double lo, hi;
            int depth;
        };
        for (const auto& comp : set.components()) {
            std::vector<Piece> stack{{comp.lo, comp.hi, 0}};
            while (!stack.empty() && !stuck) {
                const Piece p = stack.back();
                stack.pop_back();
                const double diam = sampled_diameter(path, p.lo, p.hi);
                if (diam < delta) {
                    diameters.push_back(diam);
                    running += diam;
                    if (diameters.size() > kMaxPieces) stuck = true;
                    if (running >= bound) outgrown = stuck = true;
                    continue;
                }
                const double mid = 0.5 * (p.lo + p.hi);
                if (p.depth >= kMaxDepth || !(mid > p.lo && mid < p.hi)) {
                    stuck = true;
                    break;
                }
                // Right half first so pieces are summed in parameter order.
                stack.push_back({mid, p.hi, p.depth + 1});
                stack.push_back({p.lo, mid, p.depth + 1});
            }
        }
        est.delta = delta;
        if (stuck) {
            est.upper = kInf;
            est.status = RefinementStatus::Infinite;
            est.trace.push_back({delta, outgrown ? running : kInf, diameters.size()});
            return est;
        }
        est.upper = pairwise_sum(diameters);
        est.trace.push_back({delta, est.upper, diameters.size()});
    }
    const std::size_t n = est.trace.size();
    const double u0 = est.trace[n - 3].upper, u1 = est.trace[n - 2].upper, u2 = est.trace[n - 1].upper;
    // The finite sums stay in the trace.
    if (u0 > 0.0 && u1 >= kGrowthRatio * u0 && u2 >= kGrowthRatio * u1) {
        est.status = RefinementStatus::Infinite;
        est.upper = kInf;
    }
    return est;
}

IndicatrixSample banach_indicatrix(const Path& path, const IntervalUnion& set, const Point& y, double radius,
                                   double grid_step) {
    if (!(radius > 0.0) || !(grid_step > 0.0)) throw InputError("banach_indicatrix: radius and grid_step must be positive");
    IndicatrixSample out{y, radius, 0};
    for (const auto& comp : set.components()) {
        const auto steps = static_cast<std::size_t>(std::ceil(comp.length() / grid_step));
        bool in_run = false;
        for (std::size_t i = 0; i <= steps; ++i) {
            const double t = i == steps ? comp.hi : comp.lo + static_cast<double>(i) * grid_step;
            const bool inside = path.space().distance(path.evaluate(t), y) <= radius;
            if (inside && !in_run) ++out.count;
            in_run = inside;
        }
    }
    return out;
}

std::string_view to_string(IntegrabilityFlag f) noexcept {
    switch (f) {
        case IntegrabilityFlag::Integrable: return "integrable";
        case IntegrabilityFlag::NonIntegrable: return "non_integrable";
        case IntegrabilityFlag::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

IntegralEstimate integrate_grid(const std::vector<std::pair<double, double>>& values) {
    IntegralEstimate est;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && !(values[i].first > values[i - 1].first))
            throw InputError("integrate_grid: abscissae must be strictly increasing");
        if (values[i].second < 0.0) throw InputError("integrate_grid: integrand must be nonnegative");
    }
    if (values.size() < 2) {
        est.flag = IntegrabilityFlag::Integrable;
        return est;
    }

    const CellSums full = trapezoid(values, 1);
    est.value = full.value;
    est.infinite_cells = full.infinite;

    std::vector<double> cells(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        cells[i] = cell_integral(values[i].first, values[i].second, values[i + 1].first, values[i + 1].second);

    // A run of three infinite samples: the integrand is infinite on a set the
    // grid keeps resolving, not at an isolated point.
    for (std::size_t i = 2; i < values.size(); ++i) {
        if (std::isinf(values[i].second) && std::isinf(values[i - 1].second) && std::isinf(values[i - 2].second)) {
            est.flag = IntegrabilityFlag::NonIntegrable;
            return est;
        }
    }

    std::vector<double> candidates{values.front().first, values.back().first};
    for (const auto& [t, v] : values) {
        if (std::isinf(v) && t != values.front().first && t != values.back().first &&
            candidates.size() < kMaxSingularCandidates + 2)
            candidates.push_back(t);
    }
    bool have_default = false;
    for (double s : candidates) {
        for (bool right : {true, false}) {
            auto partials = shell_partials(values, cells, s, right);
            if (partials.empty()) continue;
            if (!have_default) {
                est.shell_partials = partials;
                have_default = true;
            }
            if (increments_diverge(partials, 1e-12)) {
                est.shell_partials = std::move(partials);
                est.flag = IntegrabilityFlag::NonIntegrable;
                return est;
            }
        }
    }

    const CellSums half = trapezoid(values, 2);
    const bool stable = std::abs(full.value - half.value) <= kStabilityTol * std::max(1.0, std::abs(full.value));
    est.flag = stable ? IntegrabilityFlag::Integrable : IntegrabilityFlag::Inconclusive;
    return est;
}

std::vector<double> graded_grid(const Interval& iv, std::size_t cells, int shells, int per_shell) {
    if (cells == 0) throw InputError("graded_grid: need at least one cell");
    if (shells < 0 || per_shell < 1) throw InputError("graded_grid: invalid shell layout");
    if (iv.length() == 0.0) return {iv.lo};
    const double zone = iv.length() * kGradedZone;
    std::vector<double> out;
    auto push = [&](double t) {
        if (out.empty() || t > out.back()) out.push_back(t);
    };
    push(iv.lo);
    // Left zone, innermost shell first: distances in [zone 2^-j, zone 2^-(j-1)).
    for (int j = shells; j >= 1; --j) {
        const double inner = std::ldexp(zone, -j);
        for (int i = 0; i < per_shell; ++i) push(iv.lo + inner * (1.0 + static_cast<double>(i) / per_shell));
    }
    for (std::size_t i = 0; i <= cells; ++i) {
        const double t = iv.lo + iv.length() * (static_cast<double>(i) / static_cast<double>(cells));
        if (t >= iv.lo + zone && t <= iv.hi - zone) push(t);
    }
    // Right zone, outermost shell first.
    for (int j = 1; j <= shells; ++j) {
        const double outer = std::ldexp(zone, -j + 1);
        for (int i = 0; i < per_shell; ++i) push(iv.hi - outer * (1.0 - 0.5 * static_cast<double>(i) / per_shell));
    }
    push(iv.hi);
    return out;
}

}  // namespace metpath
