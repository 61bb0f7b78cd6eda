#include "metpath/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "metpath/error.hpp"
#include "metpath/variation.hpp"

namespace metpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kAcWindow = 4;
constexpr double kAcShrink = 0.5;
constexpr std::size_t kMinComponentCells = 64;
constexpr std::size_t kDiameterGrid = 512;
constexpr std::size_t kSlopeCells = 64;

struct TheoremName {
    TheoremId id;
    std::string_view name;
};

constexpr std::array<TheoremName, 10> kTheoremNames{{
    {TheoremId::VariationIdentity, "variation_identity"},
    {TheoremId::FundamentalLemma, "fundamental_lemma"},
    {TheoremId::ImageBound, "image_bound"},
    {TheoremId::Sard, "sard"},
    {TheoremId::AcModulus, "ac_modulus"},
    {TheoremId::BanachZarecki, "banach_zarecki"},
    {TheoremId::Constancy, "constancy"},
    {TheoremId::InjectiveIdentity, "injective_identity"},
    {TheoremId::VfImage, "vf_image"},
    {TheoremId::Composition, "composition"},
}};

double scaled(double tol, double reference) {
    return tol * std::max(1.0, std::isfinite(reference) ? std::abs(reference) : 1.0);
}

CheckReport& finish(CheckReport& r) {
    if (std::isinf(r.lhs) && std::isinf(r.rhs) && (r.lhs > 0) == (r.rhs > 0)) r.slack = 0.0;
    else r.slack = r.rhs - r.lhs;
    return r;
}

void note(CheckReport& r, const std::string& text) {
    if (!r.notes.empty()) r.notes += "; ";
    r.notes += text;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// lhs <= rhs + allowance; a failure counts only when both sides are trustworthy.
Verdict inequality(double lhs, double rhs, double allowance, bool conclusive) {
    if (lhs <= rhs + allowance) return Verdict::Holds;
    return conclusive ? Verdict::Violated : Verdict::Inconclusive;
}

double value_or_inf(const RefinementEstimate& e) {
    return e.status == RefinementStatus::Converged ? e.value : kInf;
}

std::vector<double> component_grid(const Path& path, const Interval& c, const CheckOptions& opts) {
    const double share = path.domain().length() > 0.0 ? c.length() / path.domain().length() : 1.0;
    const auto cells = std::max(kMinComponentCells, static_cast<std::size_t>(std::ceil(share * opts.grid)));
    return graded_grid(c, cells);
}

// Component endpoints and declared breakpoints form the finite exceptional set.
// Samples closer to one of them than the last three probe steps cannot be
// resolved by the schedule and are counted with it.
bool is_known_point(const Path& path, const Interval& c, double x, const StepSchedule& schedule) {
    const double t0 = schedule.t0 > 0.0 ? schedule.t0 : 1e-2 * path.domain().length();
    const double unresolved = t0 * std::pow(schedule.ratio, schedule.steps - 3);
    const double eps = std::max(1e-12 * std::max(1.0, path.domain().length()), unresolved);
    if (std::abs(x - c.lo) <= eps || std::abs(x - c.hi) <= eps) return true;
    return std::any_of(path.breakpoints().begin(), path.breakpoints().end(),
                       [&](double b) { return std::abs(x - b) <= eps; });
}

IntegrabilityFlag combine(IntegrabilityFlag a, IntegrabilityFlag b) {
    if (a == IntegrabilityFlag::NonIntegrable || b == IntegrabilityFlag::NonIntegrable)
        return IntegrabilityFlag::NonIntegrable;
    if (a == IntegrabilityFlag::Inconclusive || b == IntegrabilityFlag::Inconclusive)
        return IntegrabilityFlag::Inconclusive;
    return IntegrabilityFlag::Integrable;
}

double image_diameter(const Path& path) {
    const Interval& d = path.domain();
    std::vector<Point> pts;
    pts.reserve(kDiameterGrid + 1);
    for (std::size_t i = 0; i <= kDiameterGrid; ++i)
        pts.push_back(path.evaluate(d.lo + d.length() * (static_cast<double>(i) / kDiameterGrid)));
    double diam = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, path.space().distance(pts[i], pts[j]));
    return diam;
}

// Median relative gap between finite-difference slopes of v_f and md at cell midpoints.
std::optional<double> vf_slope_deviation(const Path& path, const CheckOptions& opts) {
    const Interval& d = path.domain();
    if (d.length() == 0.0) return std::nullopt;
    std::vector<double> grid;
    for (std::size_t i = 0; i <= kSlopeCells; ++i) grid.push_back(d.lo + d.length() * (static_cast<double>(i) / kSlopeCells));
    const VariationProfile vf = variation_function(path, grid, opts.refine_tol, std::min(opts.max_level, 12));
    if (vf.unbounded) return std::nullopt;
    std::vector<double> devs;
    for (std::size_t i = 0; i + 1 < vf.values.size(); ++i) {
        const double h = vf.values[i + 1].first - vf.values[i].first;
        const double slope = (vf.values[i + 1].second - vf.values[i].second) / h;
        const MdEstimate m = metric_derivative(path, 0.5 * (vf.values[i].first + vf.values[i + 1].first), opts.schedule, opts.md);
        if (m.status != MdStatus::Converged) continue;
        devs.push_back(std::abs(slope - m.value) / std::max(1.0, m.value));
    }
    if (devs.empty()) return std::nullopt;
    std::nth_element(devs.begin(), devs.begin() + static_cast<std::ptrdiff_t>(devs.size() / 2), devs.end());
    return devs[devs.size() / 2];
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
    for (const auto& t : kTheoremNames)
        if (t.id == id) return t.name;
    return "unknown";
}

std::optional<TheoremId> theorem_from_string(std::string_view name) {
    for (const auto& t : kTheoremNames)
        if (t.name == name) return t.id;
    return std::nullopt;
}

const std::vector<TheoremId>& all_theorems() {
    static const std::vector<TheoremId> ids = [] {
        std::vector<TheoremId> out;
        for (const auto& t : kTheoremNames) out.push_back(t.id);
        return out;
    }();
    return ids;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(AcEvidence e) noexcept {
    return e == AcEvidence::NotAc ? "NotAC-evidence" : "AC-consistent";
}

MdIntegral md_integral(const Path& path, const IntervalUnion& set, const CheckOptions& opts) {
    if (!set.inside(path.domain())) throw InputError("md_integral: set must lie inside the path domain");
    MdIntegral out;
    std::vector<double> parts;
    for (const Interval& c : set.components()) {
        if (c.length() == 0.0) continue;
        const auto grid = component_grid(path, c, opts);
        const auto profile = md_profile(path, grid, opts.schedule, opts.md);
        std::vector<std::pair<double, double>> values;
        values.reserve(profile.size());
        for (const MdSample& s : profile) {
            values.emplace_back(s.x, integrand_value(s));
            if (s.status == MdStatus::Converged) {
                out.max_finite_md = std::max(out.max_finite_md, s.md);
                continue;
            }
            if (s.status == MdStatus::Infinite) ++out.infinite_points;
            else ++out.undefined_points;
            if (!is_known_point(path, c, s.x, opts.schedule)) ++out.exceptional_points;
        }
        out.points += profile.size();
        const IntegralEstimate est = integrate_grid(values);
        parts.push_back(est.value);
        out.flag = combine(out.flag, est.flag);
    }
    out.value = pairwise_sum(parts);
    return out;
}

CheckReport check_variation_identity(const Path& path, const FixtureMeta& meta, const CheckOptions& opts) {
    CheckReport r;
    r.theorem_id = TheoremId::VariationIdentity;
    const RefinementEstimate var = variation(path, opts.refine_tol, opts.max_level);
    const MdIntegral integral = md_integral(path, IntervalUnion({path.domain()}), opts);
    r.lhs = integral.value;
    r.rhs = value_or_inf(var);
    r.params["tol"] = opts.tol;
    r.params["max_level"] = opts.max_level;
    r.params["grid"] = static_cast<double>(opts.grid);
    r.params["variation_estimate"] = var.value;
    r.params["md_points"] = static_cast<double>(integral.points);

    if (meta.known && !(meta.is_continuous && meta.is_bv)) {
        note(r, "hypothesis unmet: path is not continuous BV");
        return finish(r);
    }
    if (var.status != RefinementStatus::Converged) {
        note(r, "variation " + std::string(to_string(var.status)));
        return finish(r);
    }
    if (integral.flag == IntegrabilityFlag::NonIntegrable) {
        note(r, "md integral flagged non_integrable on a converged BV path");
        r.lhs = kInf;
        return finish(r);
    }
    const bool conclusive = integral.flag == IntegrabilityFlag::Integrable;
    if (!conclusive) note(r, "md integral inconclusive");
    const double allowance = scaled(opts.tol, r.rhs);
    r.verdict = inequality(r.lhs, r.rhs, allowance, conclusive);

    if (meta.known && meta.is_ac) {
        const auto dev = vf_slope_deviation(path, opts);
        if (dev) r.params["vf_slope_median_dev"] = *dev;
        if (std::abs(r.lhs - r.rhs) > allowance) {
            r.verdict = conclusive ? Verdict::Violated : Verdict::Inconclusive;
            note(r, "equality leg failed for an AC path");
        } else {
            note(r, "equality holds (AC)");
        }
    } else if (meta.known) {
        note(r, meta.has_property_n ? "equality not asserted: path is not AC"
                                    : "equality not asserted: property (N) fails");
    } else {
        note(r, "no metadata: inequality leg only");
    }
    return finish(r);
}

CheckReport check_fundamental_lemma(const Path& path, const IntervalUnion& set, double k, const CheckOptions& opts) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw InputError("fundamental_lemma: K must be finite and nonnegative");
    CheckReport r;
    r.theorem_id = TheoremId::FundamentalLemma;
    r.params["K"] = k;
    r.params["tol"] = opts.tol;
    const double measure = outer_measure(set);
    r.params["outer_measure"] = measure;
    r.rhs = k * measure * (1.0 + opts.tol);

    const MdIntegral integral = md_integral(path, set, opts);
    r.params["max_md"] = integral.max_finite_md;
    // Estimates carry a relative error of md.rel_tol, so K = md is not a violation.
    const bool above_k = integral.max_finite_md > k * (1.0 + opts.md.rel_tol) + opts.md.abs_floor;
    if (integral.exceptional_points > 0 || above_k) {
        r.lhs = kInf;
        note(r, integral.exceptional_points > 0 ? "hypothesis unmet: md not finite on the grid of E"
                                                : "hypothesis unmet: md exceeds K on the grid");
        return finish(r);
    }
    const CoverEstimate h = hausdorff_length(path, set, opts.deltas);
    r.lhs = h.upper;
    if (h.status == RefinementStatus::Infinite) {
        r.verdict = Verdict::Violated;
        note(r, "infinite length estimate against finite K m*(E)");
        return finish(r);
    }
    r.verdict = inequality(r.lhs, r.rhs, 1e-12, h.status == RefinementStatus::Converged);
    return finish(r);
}

CheckReport check_image_bound(const Path& path, const IntervalUnion& set, const CheckOptions& opts) {
    CheckReport r;
    r.theorem_id = TheoremId::ImageBound;
    r.params["tol"] = opts.tol;
    const MdIntegral integral = md_integral(path, set, opts);
    r.rhs = integral.value;
    r.params["exceptional_points"] = static_cast<double>(integral.exceptional_points);
    if (integral.exceptional_points > 0) {
        r.lhs = kInf;
        note(r, "hypothesis unmet: md not finite at " + std::to_string(integral.exceptional_points) +
                    " grid points of E");
        return finish(r);
    }
    if (integral.flag != IntegrabilityFlag::Integrable) {
        r.rhs = integral.flag == IntegrabilityFlag::NonIntegrable ? kInf : integral.value;
        note(r, "md integral " + std::string(to_string(integral.flag)));
        return finish(r);
    }
    const CoverEstimate h = hausdorff_length(path, set, opts.deltas);
    r.lhs = h.upper;
    r.verdict = inequality(r.lhs, r.rhs, scaled(opts.tol, r.rhs), h.status == RefinementStatus::Converged);
    return finish(r);
}

IntervalUnion md_zero_region(const Path& path, const CheckOptions& opts) {
    const Interval& d = path.domain();
    if (d.length() == 0.0) return IntervalUnion({d});
    const auto profile = md_profile(path, graded_grid(d, opts.grid), opts.schedule, opts.md);
    std::vector<Interval> windows;
    for (const MdSample& s : profile) {
        if (s.status != MdStatus::Converged || s.md > opts.zero_tol || !(s.zero_radius > 0.0)) continue;
        windows.push_back({std::max(d.lo, s.x - s.zero_radius), std::min(d.hi, s.x + s.zero_radius)});
    }
    return IntervalUnion::merged(std::move(windows));
}

CheckReport check_sard(const Path& path, const CheckOptions& opts) {
    CheckReport r;
    r.theorem_id = TheoremId::Sard;
    r.params["tol"] = opts.tol;
    r.params["zero_tol"] = opts.zero_tol;
    const IntervalUnion zero = md_zero_region(path, opts);
    r.params["zero_region_measure"] = outer_measure(zero);
    r.params["zero_region_components"] = static_cast<double>(zero.components().size());

    const RefinementEstimate var = variation(path, opts.refine_tol, opts.max_level);
    const bool var_ok = var.status == RefinementStatus::Converged;
    r.rhs = opts.tol * (1.0 + (var_ok ? var.value : 0.0));
    if (!var_ok) note(r, "variation " + std::string(to_string(var.status)) + ": bound uses tol alone");
    if (zero.empty()) {
        r.verdict = Verdict::Holds;
        note(r, "md = 0 region empty");
        return finish(r);
    }
    const CoverEstimate h = hausdorff_length(path, zero, opts.deltas);
    r.lhs = h.upper;
    r.verdict = inequality(r.lhs, r.rhs, 0.0, h.status == RefinementStatus::Converged && var_ok);
    return finish(r);
}

AcModulusResult ac_modulus(const Path& path, const std::vector<double>& eps_list, int levels) {
    if (eps_list.empty()) throw InputError("ac_modulus: eps list must not be empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw InputError("ac_modulus: eps must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw InputError("ac_modulus: eps list must be decreasing");
    }
    if (levels < kAcWindow + 1 || levels > 10) throw InputError("ac_modulus: levels must lie in [5, 10]");

    const Interval& d = path.domain();
    AcModulusResult out;
    out.levels = levels;
    for (double eps : eps_list) out.points.push_back({eps, {}, d.length()});

    const std::size_t finest = std::size_t{1} << levels;
    std::vector<Point> pts;
    pts.reserve(finest + 1);
    for (std::size_t i = 0; i <= finest; ++i)
        pts.push_back(path.evaluate(d.lo + d.length() * (static_cast<double>(i) / static_cast<double>(finest))));

    for (int m = 1; m <= levels; ++m) {
        const std::size_t cells = std::size_t{1} << m;
        const std::size_t stride = finest / cells;
        const double h = d.length() / static_cast<double>(cells);
        std::vector<double> inc(cells);
        for (std::size_t i = 0; i < cells; ++i) inc[i] = path.space().distance(pts[i * stride], pts[(i + 1) * stride]);
        std::sort(inc.begin(), inc.end(), std::greater<>());
        for (auto& p : out.points) {
            double sum = 0.0;
            double length = kInf;
            for (std::size_t k = 0; k < cells; ++k) {
                sum += inc[k];
                if (sum >= p.eps) {
                    length = static_cast<double>(k + 1) * h;
                    break;
                }
            }
            p.violating_length.push_back(length);
        }
    }
    for (auto& p : out.points) {
        p.delta_hat = std::min(p.violating_length.back(), d.length());
        const std::size_t n = p.violating_length.size();
        bool shrinking = std::isfinite(p.violating_length[n - 1 - kAcWindow]);
        for (std::size_t i = n - kAcWindow; i < n && shrinking; ++i)
            shrinking = p.violating_length[i] < p.violating_length[i - 1];
        if (shrinking && p.violating_length[n - 1] <= kAcShrink * p.violating_length[n - 1 - kAcWindow])
            out.evidence = AcEvidence::NotAc;
    }
    return out;
}

CheckReport check_ac_modulus(const Path& path, const FixtureMeta& meta, const std::vector<double>& eps_list,
                             const CheckOptions& opts) {
    CheckReport r;
    r.theorem_id = TheoremId::AcModulus;
    r.params["tol"] = opts.tol;
    const AcModulusResult res = ac_modulus(path, eps_list);
    // lhs/rhs: shortest violating family at the finest level and four levels coarser.
    auto shrinks = [](const AcModulusPoint& p) {
        const std::size_t n = p.violating_length.size();
        return p.violating_length[n - 1] <= kAcShrink * p.violating_length[n - 1 - kAcWindow];
    };
    const AcModulusPoint* shown = &res.points.front();
    for (const auto& p : res.points) {
        r.params["delta_hat[eps=" + fmt(p.eps) + "]"] = p.delta_hat;
        if (res.evidence == AcEvidence::NotAc && shrinks(p) && !shrinks(*shown)) shown = &p;
    }
    const std::size_t n = shown->violating_length.size();
    r.lhs = shown->violating_length[n - 1];
    r.rhs = shown->violating_length[n - 1 - kAcWindow];
    r.params["eps"] = shown->eps;
    note(r, std::string(to_string(res.evidence)) + " (evidence only)");
    if (!meta.known) return finish(r);
    const bool agrees = meta.is_ac == (res.evidence == AcEvidence::Consistent);
    r.verdict = agrees ? Verdict::Holds : Verdict::Inconclusive;
    if (!agrees) note(r, "evidence disagrees with metadata");
    return finish(r);
}

CheckReport check_banach_zarecki(const Fixture& fixture, const CheckOptions& opts) {
    const FixtureMeta& meta = fixture.meta;
    CheckReport r;
    r.theorem_id = TheoremId::BanachZarecki;
    r.params["is_continuous"] = meta.is_continuous;
    r.params["is_bv"] = meta.is_bv;
    r.params["has_property_n"] = meta.has_property_n;
    r.params["is_ac"] = meta.is_ac;
    r.params["tol"] = opts.tol;
    if (!meta.known) {
        note(r, "no metadata");
        return finish(r);
    }
    if (!meta.consistent()) {
        r.verdict = Verdict::Violated;
        note(r, "metadata violates AC <=> continuous, BV and (N)");
        return finish(r);
    }

    if (!meta.is_continuous) {
        r.verdict = Verdict::Holds;
        note(r, "not continuous => not AC (metadata)");
        return finish(r);
    }
    if (!meta.is_bv) {
        const RefinementEstimate var = variation(fixture.path, opts.refine_tol, opts.max_level);
        r.lhs = var.value;
        r.rhs = kInf;
        if (var.status == RefinementStatus::Diverging) {
            r.verdict = Verdict::Holds;
            note(r, "not BV => not AC; variation Diverging confirms");
        } else {
            note(r, "not BV by metadata but variation " + std::string(to_string(var.status)));
        }
        return finish(r);
    }

    const CheckReport vi = check_variation_identity(fixture.path, meta, opts);
    r.lhs = vi.lhs;
    r.rhs = vi.rhs;
    const AcModulusResult ac = ac_modulus(fixture.path, {0.5, 0.1});
    if (meta.is_ac) {
        if (vi.verdict != Verdict::Holds) {
            r.verdict = vi.verdict;
            note(r, "equality leg: " + vi.notes);
        } else if (ac.evidence == AcEvidence::NotAc) {
            note(r, "NotAC-evidence on an AC path");
        } else {
            r.verdict = Verdict::Holds;
            note(r, "continuous, BV and (N) => AC; equality holds, no NotAC-evidence");
        }
        return finish(r);
    }
    // Continuous and BV without (N): the equality leg must fail.
    const double gap = vi.rhs - vi.lhs;
    r.params["gap"] = gap;
    if (vi.verdict == Verdict::Holds && gap > scaled(opts.tol, vi.rhs)) {
        r.verdict = Verdict::Holds;
        note(r, "not (N) leg identified: integral of md falls short of the variation by " + fmt(gap));
        if (ac.evidence == AcEvidence::NotAc) note(r, "NotAC-evidence corroborates");
    } else {
        note(r, "expected strict gap not observed");
    }
    return finish(r);
}

CheckReport check_constancy(const Path& path, const FixtureMeta& meta, const CheckOptions& opts, bool hypothesis_free) {
    CheckReport r;
    r.theorem_id = TheoremId::Constancy;
    r.params["tol"] = opts.tol;
    r.params["zero_tol"] = opts.zero_tol;
    r.rhs = opts.tol;
    const bool ac = meta.known && meta.is_ac;
    if (!ac && !hypothesis_free) {
        note(r, "skipped: path not flagged AC");
        return finish(r);
    }
    const Interval& d = path.domain();
    double max_md = 0.0;
    std::size_t infinite = 0;
    if (d.length() > 0.0) {
        for (const MdSample& s : md_profile(path, graded_grid(d, opts.grid), opts.schedule, opts.md)) {
            if (s.status == MdStatus::Infinite) ++infinite;
            else if (s.status == MdStatus::Converged) max_md = std::max(max_md, s.md);
        }
    }
    r.params["max_md"] = infinite > 0 ? kInf : max_md;
    if (infinite > 0 || max_md > opts.zero_tol) {
        r.lhs = d.length() > 0.0 ? image_diameter(path) : 0.0;
        note(r, "hypothesis md = 0 unmet");
        return finish(r);
    }
    r.lhs = d.length() > 0.0 ? image_diameter(path) : 0.0;
    if (r.lhs <= r.rhs) {
        r.verdict = Verdict::Holds;
        return finish(r);
    }
    if (ac) {
        r.verdict = Verdict::Violated;
        note(r, "AC path with md = 0 is not constant");
    } else {
        note(r, "counterexample without AC: md = 0 on the grid but image diameter " + fmt(r.lhs));
    }
    return finish(r);
}

CheckReport check_injective_identity(const Path& path, const FixtureMeta& meta, const IntervalUnion& set,
                                     const CheckOptions& opts) {
    if (meta.known && !meta.is_injective) throw InputError("injective_identity: path is not injective");
    CheckReport r;
    r.theorem_id = TheoremId::InjectiveIdentity;
    r.params["tol"] = opts.tol;
    const MdIntegral integral = md_integral(path, set, opts);
    r.lhs = integral.value;
    if (!meta.known) {
        note(r, "injectivity unknown");
        return finish(r);
    }
    if (integral.flag != IntegrabilityFlag::Integrable) {
        note(r, "md integral " + std::string(to_string(integral.flag)));
        return finish(r);
    }
    const CoverEstimate h = hausdorff_length(path, set, opts.deltas);
    r.rhs = h.upper;
    if (h.status != RefinementStatus::Converged) {
        note(r, "length estimate " + std::string(to_string(h.status)));
        return finish(r);
    }
    const double allowance = scaled(opts.tol, r.rhs);
    if (meta.is_ac) {
        r.verdict = std::abs(r.lhs - r.rhs) <= allowance ? Verdict::Holds : Verdict::Violated;
        note(r, "equality asserted (AC)");
    } else {
        r.verdict = inequality(r.lhs, r.rhs, allowance, true);
        note(r, "inequality leg only: path is not AC");
    }
    return finish(r);
}

CheckReport check_vf_image(const Path& path, const FixtureMeta& meta, const IntervalUnion& set, const CheckOptions& opts) {
    if (!set.inside(path.domain())) throw InputError("vf_image: set must lie inside the path domain");
    CheckReport r;
    r.theorem_id = TheoremId::VfImage;
    r.params["tol"] = opts.tol;
    const MdIntegral integral = md_integral(path, set, opts);
    r.lhs = integral.value;
    if (meta.known && !meta.is_bv) {
        r.rhs = kInf;
        note(r, "hypothesis unmet: path is not BV");
        return finish(r);
    }
    const double a = path.domain().lo;
    auto vf = [&](double t) {
        return t <= a ? RefinementEstimate{0.0, RefinementStatus::Converged, {}, opts.refine_tol, 0}
                      : variation(restrict(path, a, t), opts.refine_tol, opts.max_level);
    };
    std::vector<Interval> images;
    bool converged = true;
    for (const Interval& c : set.components()) {
        const RefinementEstimate lo = vf(c.lo);
        const RefinementEstimate hi = vf(c.hi);
        converged = converged && lo.status == RefinementStatus::Converged && hi.status == RefinementStatus::Converged;
        images.push_back({lo.value, std::max(lo.value, hi.value)});
    }
    r.rhs = outer_measure(IntervalUnion::merged(std::move(images)));
    if (!converged) {
        note(r, "variation function did not converge");
        return finish(r);
    }
    const bool integrable = integral.flag == IntegrabilityFlag::Integrable;
    if (!integrable) note(r, "md integral " + std::string(to_string(integral.flag)));
    // The theorem reads m*(v_f(A)) >= integral, i.e. integral <= measure.
    const double allowance = scaled(opts.tol, r.rhs);
    r.verdict = inequality(r.lhs, r.rhs, allowance, integrable);
    if (meta.known && meta.is_ac && r.verdict == Verdict::Holds) {
        if (std::abs(r.lhs - r.rhs) > allowance) {
            r.verdict = integrable ? Verdict::Violated : Verdict::Inconclusive;
            note(r, "equality leg failed for an AC path");
        } else {
            note(r, "equality holds (AC)");
        }
    } else if (meta.known && !meta.is_ac) {
        note(r, "inequality leg only: path is not AC");
    }
    return finish(r);
}

CheckReport check_composition(const Path& f, const RealFunction& g, const FixtureMeta& f_meta, const CheckOptions& opts) {
    const Path fg = compose(f, g);
    CheckReport r;
    r.theorem_id = TheoremId::Composition;
    r.params["tol"] = opts.tol;
    r.params["deriv_tol"] = opts.deriv_tol;

    const Interval& d = g.domain;
    std::vector<std::pair<double, double>> h;
    std::size_t zero_derivative = 0;
    if (d.length() > 0.0) {
        for (double x : graded_grid(d, opts.grid)) {
            const double gp = std::abs(g.derivative_at(x));
            if (gp <= opts.deriv_tol) {
                h.emplace_back(x, 0.0);
                ++zero_derivative;
                continue;
            }
            const MdEstimate m = metric_derivative(f, g(x), opts.schedule, opts.md);
            h.emplace_back(x, integrand_value({m.x, m.value, m.status, m.zero_radius}) * gp);
        }
    }
    const IntegralEstimate integral = d.length() > 0.0 ? integrate_grid(h) : IntegralEstimate{0.0, IntegrabilityFlag::Integrable, 0, {}};
    const RefinementEstimate var = variation(fg, opts.refine_tol, opts.max_level);
    r.lhs = integral.value;
    r.rhs = value_or_inf(var);
    r.params["h_zero_by_convention"] = static_cast<double>(zero_derivative);
    r.params["variation_estimate"] = var.value;

    // Chain rule and existence of md(f, g(x)) at interior points.
    double max_dev = 0.0;
    double max_allowed_excess = 0.0;
    std::size_t compared = 0;
    std::size_t outer_md_unresolved = 0;
    if (d.length() > 0.0) {
        for (int i = 0; i < kChainRulePoints; ++i) {
            const double x = d.lo + d.length() * ((i + 0.5) / kChainRulePoints);
            const double gp = std::abs(g.derivative_at(x));
            const MdEstimate outer = metric_derivative(fg, x, opts.schedule, opts.md);
            if (outer.status != MdStatus::Converged || gp <= opts.deriv_tol) continue;
            const MdEstimate inner = metric_derivative(f, g(x), opts.schedule, opts.md);
            if (inner.status != MdStatus::Converged) {
                ++outer_md_unresolved;
                continue;
            }
            const double expected = inner.value * gp;
            const double dev = std::abs(outer.value - expected);
            max_dev = std::max(max_dev, dev);
            max_allowed_excess = std::max(max_allowed_excess, dev - scaled(opts.tol, expected));
            ++compared;
        }
    }
    r.params["chain_rule_points"] = static_cast<double>(compared);
    r.params["chain_rule_max_dev"] = max_dev;
    r.params["outer_md_unresolved"] = static_cast<double>(outer_md_unresolved);

    if (f_meta.known && !f_meta.is_ac) {
        note(r, "hypothesis unmet: outer path is not AC");
        return finish(r);
    }
    if (max_allowed_excess > 0.0) {
        r.verdict = Verdict::Violated;
        note(r, "chain rule deviation " + fmt(max_dev));
        return finish(r);
    }
    if (outer_md_unresolved > 0) note(r, "md(f, g(x)) unresolved at " + std::to_string(outer_md_unresolved) + " points");

    const bool bv = var.status == RefinementStatus::Converged;
    const bool not_bv = var.status == RefinementStatus::Diverging;
    switch (integral.flag) {
        case IntegrabilityFlag::Integrable:
            if (bv) {
                const bool equal = std::abs(r.lhs - r.rhs) <= scaled(opts.tol, r.rhs);
                r.verdict = equal ? Verdict::Holds : Verdict::Violated;
                note(r, equal ? "integrable <=> AC: variation equals integral of h"
                              : "integrable h but variation differs from its integral");
            } else if (not_bv) {
                r.verdict = Verdict::Violated;
                note(r, "integrable h but composition not BV");
            } else {
                note(r, "variation " + std::string(to_string(var.status)));
            }
            break;
        case IntegrabilityFlag::NonIntegrable:
            r.lhs = kInf;
            if (not_bv) {
                r.verdict = Verdict::Holds;
                note(r, "non-integrable <=> not BV");
            } else if (bv) {
                r.verdict = Verdict::Violated;
                note(r, "non-integrable h but composition BV");
            } else {
                note(r, "variation " + std::string(to_string(var.status)));
            }
            break;
        case IntegrabilityFlag::Inconclusive:
            note(r, "integral of h inconclusive");
            break;
    }
    return finish(r);
}

}  // namespace metpath
