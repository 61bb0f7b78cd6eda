#include "metpath/metric_derivative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "metpath/error.hpp"
#include "metpath/numeric.hpp"

namespace metpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGrowthRatio = 1.1;
constexpr int kGrowthSteps = 6;
constexpr int kSettleSteps = 3;
constexpr double kZeroQuotient = 1e-12;

bool grows_geometrically(const std::vector<double>& seq) {
    if (seq.size() < kGrowthSteps + 1) return false;
    for (std::size_t i = seq.size() - kGrowthSteps; i < seq.size(); ++i) {
        if (!(seq[i - 1] > 0.0) || seq[i] / seq[i - 1] < kGrowthRatio) return false;
    }
    return true;
}

bool passes_cap_increasing(const std::vector<double>& seq, double cap) {
    if (seq.size() < 3) return false;
    const std::size_t n = seq.size();
    return seq[n - 1] > cap && seq[n - 1] > seq[n - 2] && seq[n - 2] > seq[n - 3];
}

double spread(const std::vector<double>& seq, std::size_t from, std::size_t to) {
    const auto [lo, hi] = std::minmax_element(seq.begin() + from, seq.begin() + to);
    return *hi - *lo;
}

}  // namespace

std::string_view to_string(MdStatus s) noexcept {
    switch (s) {
        case MdStatus::Converged: return "Converged";
        case MdStatus::Infinite: return "Infinite";
        case MdStatus::NoLimit: return "NoLimit";
        case MdStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string_view to_string(SLabel s) noexcept {
    switch (s) {
        case SLabel::BoundedQuotient: return "BoundedQuotient";
        case SLabel::Unbounded: return "Unbounded";
        case SLabel::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

double metric_quotient(const Path& path, double x, double t) {
    if (t == 0.0) throw InputError("metric_quotient: step must be nonzero");
    const Interval& d = path.domain();
    if (!d.contains(x, kDomainSlack) || !d.contains(x + t, kDomainSlack))
        throw InputError("metric_quotient: x and x + t must lie in the domain");
    return path.distance(x + t, x) / std::abs(t);
}

MdEstimate metric_derivative(const Path& path, double x, const StepSchedule& schedule, const MdOptions& opt) {
    if (!(schedule.ratio > 0.0 && schedule.ratio < 1.0)) throw InputError("metric_derivative: ratio must lie in (0, 1)");
    const Interval& dom = path.domain();
    if (!dom.contains(x, kDomainSlack)) throw InputError("metric_derivative: x outside the domain");
    x = std::clamp(x, dom.lo, dom.hi);

    MdEstimate est;
    est.x = x;
    if (dom.length() == 0.0) return est;

    const double t0 = schedule.t0 > 0.0 ? schedule.t0 : 1e-2 * dom.length();
    const double left_room = x - dom.lo;
    const double right_room = dom.hi - x;
    const bool use_left = left_room > 0.0;
    const bool use_right = right_room > 0.0;
    double start = t0;
    if (use_left && use_right) start = std::min({t0, left_room, right_room});
    else if (use_left) start = std::min(t0, left_room);
    else start = std::min(t0, right_room);

    const Point fx = path.evaluate(x);
    auto quotient = [&](double t) {
        return path.space().distance(path.evaluate(std::clamp(x + t, dom.lo, dom.hi)), fx) / std::abs(t);
    };

    std::vector<double> averaged;
    std::vector<double> left_q;
    std::vector<double> right_q;
    std::vector<double> steps;
    double t = start;
    int zero_run_start = -1;

    for (int k = 0; k <= schedule.steps; ++k, t *= schedule.ratio) {
        if (t <= 0.0) break;
        double l = 0.0, r = 0.0;
        if (use_right) {
            r = quotient(t);
            right_q.push_back(r);
            est.step_trace.emplace_back(t, r);
        }
        if (use_left) {
            l = quotient(-t);
            left_q.push_back(l);
            est.step_trace.emplace_back(-t, l);
        }
        const double avg = use_left && use_right ? 0.5 * (l + r) : (use_left ? l : r);
        averaged.push_back(avg);
        steps.push_back(t);

        if (std::max(l, r) <= kZeroQuotient) {
            if (zero_run_start < 0) zero_run_start = k;
        } else {
            zero_run_start = -1;
        }

        if (averaged.size() >= kSettleSteps) {
            const std::size_t n = averaged.size();
            // Each side must settle on its own: symmetric self-similar paths can
            // keep the average fixed while both one-sided quotients move.
            bool settled = true;
            for (const auto* seq : {&left_q, &right_q}) {
                if (seq->empty()) continue;
                for (std::size_t i = n - kSettleSteps + 1; i < n; ++i)
                    settled = settled && close_enough((*seq)[i], (*seq)[i - 1], opt.rel_tol, opt.abs_floor);
            }
            const bool sides_agree = !(use_left && use_right) || close_enough(l, r, opt.rel_tol, opt.abs_floor);
            if (settled && sides_agree) {
                est.value = avg;
                est.status = MdStatus::Converged;
                if (zero_run_start >= 0) est.zero_radius = steps[static_cast<std::size_t>(zero_run_start)];
                return est;
            }
        }
        if (passes_cap_increasing(averaged, opt.cap)) {
            est.value = kInf;
            est.status = MdStatus::Infinite;
            return est;
        }
    }
    // Growth only counts when it persists down to the finest steps: oscillating
    // paths show 1/t growth until their oscillation scale is resolved.
    if (grows_geometrically(averaged)) {
        est.value = kInf;
        est.status = MdStatus::Infinite;
        return est;
    }

    est.value = averaged.empty() ? 0.0 : averaged.back();
    if (zero_run_start >= 0) est.zero_radius = steps[static_cast<std::size_t>(zero_run_start)];

    // Persistent side disagreement or non-shrinking oscillation means no limit.
    constexpr std::size_t kWindow = 6;
    if (averaged.size() >= 2 * kWindow) {
        const std::size_t n = averaged.size();
        bool sides_split = use_left && use_right;
        for (std::size_t i = n - kWindow; i < n && sides_split; ++i)
            sides_split = !close_enough(left_q[i], right_q[i], 10.0 * opt.rel_tol, opt.abs_floor);
        const double recent = spread(averaged, n - kWindow, n);
        const double earlier = spread(averaged, n - 2 * kWindow, n - kWindow);
        const double scale = std::max(std::abs(averaged.back()), opt.abs_floor);
        const bool oscillating = recent > 10.0 * opt.rel_tol * scale && recent >= 0.5 * earlier;
        if (sides_split || oscillating) est.status = MdStatus::NoLimit;
    }
    return est;
}

std::vector<MdSample> md_profile(const Path& path, const std::vector<double>& grid, const StepSchedule& schedule,
                                 const MdOptions& options) {
    std::vector<MdSample> out;
    out.reserve(grid.size());
    for (double x : grid) {
        const MdEstimate e = metric_derivative(path, x, schedule, options);
        out.push_back({e.x, e.value, e.status, e.zero_radius});
    }
    return out;
}

double integrand_value(const MdSample& s) noexcept {
    switch (s.status) {
        case MdStatus::Infinite: return kInf;
        case MdStatus::NoLimit: return std::numeric_limits<double>::quiet_NaN();
        default: return s.md;
    }
}

DefectEstimate metric_differentiability_defect(const Path& path, double x, double md_value, double r, int samples) {
    if (!std::isfinite(md_value) || md_value < 0.0) throw InputError("defect: md_value must be finite and nonnegative");
    if (!(r > 0.0)) throw InputError("defect: r must be positive");
    if (samples < 16) throw InputError("defect: need at least 16 samples");
    const Interval& dom = path.domain();
    const double lo = std::max(dom.lo, x - r);
    const double hi = std::min(dom.hi, x + r);

    DefectEstimate out{x, r, 0.0, 0};
    if (!(hi > lo)) return out;
    // R2 low-discrepancy sequence (generalized golden ratio in two dimensions).
    constexpr double kPlastic = 1.32471795724474602596;
    constexpr double a1 = 1.0 / kPlastic;
    constexpr double a2 = 1.0 / (kPlastic * kPlastic);
    for (int n = 0; n < samples; ++n) {
        const double u = std::fmod(0.5 + a1 * n, 1.0);
        const double v = std::fmod(0.5 + a2 * n, 1.0);
        const double y = lo + (hi - lo) * u;
        const double z = lo + (hi - lo) * v;
        const double denom = std::abs(x - y) + std::abs(x - z);
        if (denom == 0.0) continue;
        const double gap = std::abs(path.distance(y, z) - md_value * std::abs(y - z));
        out.defect = std::max(out.defect, gap / denom);
        ++out.pairs;
    }
    return out;
}

std::vector<SClassification> classify_S(const Path& path, const std::vector<double>& grid, const StepSchedule& probes,
                                        double bound) {
    const Interval& dom = path.domain();
    const double t0 = probes.t0 > 0.0 ? probes.t0 : 1e-2 * dom.length();
    std::vector<SClassification> out;
    out.reserve(grid.size());
    for (double x : grid) {
        if (!dom.contains(x, kDomainSlack)) throw InputError("classify_S: grid point outside the domain");
        x = std::clamp(x, dom.lo, dom.hi);
        SClassification c{x, SLabel::Inconclusive, 0.0};
        std::vector<double> seq;
        double t = t0;
        for (int k = 0; k <= probes.steps && t > 0.0; ++k, t *= probes.ratio) {
            double q = -1.0;
            if (x + t <= dom.hi) q = std::max(q, metric_quotient(path, x, t));
            if (x - t >= dom.lo) q = std::max(q, metric_quotient(path, x, -t));
            if (q < 0.0) continue;  // step too large for either side
            seq.push_back(q);
            c.max_quotient = std::max(c.max_quotient, q);
        }
        if (seq.empty()) {
            out.push_back(c);
            continue;
        }
        if (grows_geometrically(seq) || passes_cap_increasing(seq, bound)) c.label = SLabel::Unbounded;
        else if (c.max_quotient <= bound) c.label = SLabel::BoundedQuotient;
        out.push_back(c);
    }
    return out;
}

}  // namespace metpath
