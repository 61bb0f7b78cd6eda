#include "metpath/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "metpath/error.hpp"

namespace metpath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

double param(const FixtureParams& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Interval domain_param(const FixtureParams& params, double a, double b) {
    Interval d{param(params, "a", a), param(params, "b", b)};
    if (!(d.lo <= d.hi)) throw InputError("fixture: parameter a must not exceed b");
    return d;
}

Path real_path(Interval domain, std::function<double(double)> fn, SmoothnessHint hint = {}) {
    return Path(domain, euclidean(1), [fn = std::move(fn)](double t) { return Point{fn(t)}; }, hint);
}

Fixture constant_fixture(const FixtureParams& params) {
    const auto dim = static_cast<std::size_t>(param(params, "dim", 1));
    const double value = param(params, "value", 0.0);
    const Interval dom = domain_param(params, 0.0, 1.0);
    Point p(dim, value);
    Path path(dom, euclidean(dim), [p](double) { return p; }, {Smoothness::Lipschitz, 0.0});
    FixtureMeta meta{"constant", true, true, true, true, dom.length() == 0.0, 0.0,
                     [](double) { return 0.0; }};
    return {path, meta, {}, {}, {}};
}

Fixture segment_fixture(const FixtureParams& params) {
    const double speed = param(params, "speed", 1.0);
    const Interval dom = domain_param(params, 0.0, 2.0);
    if (speed < 0.0) throw InputError("segment: speed must be nonnegative");
    Path path(
        dom, euclidean(2), [a = dom.lo, speed](double t) { return Point{(t - a) * speed, 0.0}; },
        {Smoothness::Lipschitz, speed});
    FixtureMeta meta{"segment", true, true, true, true, speed > 0.0, speed * dom.length(),
                     [speed](double) { return speed; }};
    return {path, meta, {}, {}, {}};
}

Fixture circle_fixture(const FixtureParams& params) {
    const double r = param(params, "radius", 1.0);
    const Interval dom = domain_param(params, 0.0, 2.0 * kPi);
    Path path(
        dom, euclidean(2), [r](double t) { return Point{r * std::cos(t), r * std::sin(t)}; },
        {Smoothness::Lipschitz, r});
    FixtureMeta meta{"circle", true, true, true, true, dom.length() < 2.0 * kPi, r * dom.length(),
                     [r](double) { return r; }};
    return {path, meta, {}, {}, {}};
}

// Unit circle on [0, 2pi] pushed through the Kuratowski map over n equally
// spaced anchors on the circle. The image coordinate i is 2|sin((t - phi_i)/2)|
// shifted by a constant, so md(t) = max_i |cos((t - phi_i)/2)| and the
// variation is 4 n sin(pi / (2n)). Coordinate i has a corner at phi_i.
Fixture helix_fixture(const FixtureParams& params) {
    const int n = static_cast<int>(param(params, "anchors", 16));
    if (n < 1) throw InputError("helix_embedded: anchors must be positive");
    std::vector<Point> anchors;
    std::vector<double> phases;
    for (int i = 0; i < n; ++i) {
        const double phi = 2.0 * kPi * i / n;
        phases.push_back(phi);
        anchors.push_back(Point{std::cos(phi), std::sin(phi)});
    }
    auto emb = kuratowski_embed(euclidean(2), anchors);
    Path path(
        Interval{0.0, 2.0 * kPi}, emb.target,
        [map = emb.map](double t) { return map(Point{std::cos(t), std::sin(t)}); },
        {Smoothness::Lipschitz, 1.0}, std::vector<double>(phases.begin() + 1, phases.end()));
    auto md = [phases](double t) {
        double m = 0.0;
        for (double phi : phases) m = std::max(m, std::abs(std::cos(0.5 * (t - phi))));
        return m;
    };
    FixtureMeta meta{"helix_embedded", true, true, true, true, false, 4.0 * n * std::sin(kPi / (2.0 * n)), md};
    return {path, meta, {}, {}, {}};
}

Fixture cantor_fixture(const FixtureParams&) {
    Path path = real_path(Interval{0.0, 1.0}, cantor_function);
    auto md = [](double t) { return cantor_in_removed_interval(t) ? 0.0 : kNaN; };
    FixtureMeta meta{"cantor", true, true, false, false, false, 1.0, md};
    return {path, meta, {}, {}, {}};
}

Fixture sqrt_fixture(const FixtureParams& params) {
    const Interval dom = domain_param(params, 0.0, 1.0);
    if (dom.lo < 0.0) throw InputError("sqrt: domain must lie in [0, inf)");
    Path path = real_path(dom, [](double t) { return std::sqrt(t); });
    auto md = [](double t) { return t == 0.0 ? kInf : 0.5 / std::sqrt(t); };
    FixtureMeta meta{"sqrt", true, true, true, true, true, std::sqrt(dom.hi) - std::sqrt(dom.lo), md};
    return {path, meta, {}, {}, {}};
}

Fixture osc_bv_fail_fixture(const FixtureParams& params) {
    const Interval dom = domain_param(params, 0.0, 1.0);
    Path path = real_path(dom, [](double t) { return t == 0.0 ? 0.0 : t * std::sin(1.0 / t); });
    auto md = [](double t) {
        if (t == 0.0) return kNaN;
        return std::abs(std::sin(1.0 / t) - std::cos(1.0 / t) / t);
    };
    // Differentiable off a single point, hence (N); the variation diverges
    // like (2/pi) log(1/t).
    FixtureMeta meta{"osc_bv_fail", true, false, false, true, false, kInf, md};
    return {path, meta, {}, {}, {}};
}

Fixture diff_not_bv_fixture(const FixtureParams& params) {
    const Interval dom = domain_param(params, 0.0, 1.0);
    Path path = real_path(dom, [](double t) { return t == 0.0 ? 0.0 : t * t * std::sin(1.0 / (t * t)); });
    auto md = [](double t) {
        if (t == 0.0) return 0.0;
        const double u = 1.0 / (t * t);
        return std::abs(2.0 * t * std::sin(u) - 2.0 / t * std::cos(u));
    };
    FixtureMeta meta{"diff_not_bv", true, false, false, true, false, kInf, md};
    return {path, meta, {}, {}, {}};
}

Fixture snowflake_id_fixture(const FixtureParams& params) {
    const double alpha = param(params, "alpha", 0.5);
    const Interval dom = domain_param(params, 0.0, 1.0);
    Path path(dom, snowflake(euclidean(1), alpha), [](double t) { return Point{t}; });
    const bool rectifiable = alpha == 1.0;
    auto md = [rectifiable](double) { return rectifiable ? 1.0 : kInf; };
    FixtureMeta meta{"snowflake_id", true, rectifiable, rectifiable, rectifiable, true,
                     rectifiable ? dom.length() : kInf, md};
    return {path, meta, {}, {}, {}};
}

// f = sqrt on [0, 1], g(x) = x^2 sin^2(1/x) on [0, 1]; f o g = |x sin(1/x)|.
Fixture vp_pair_fixture(const FixtureParams&) {
    Fixture outer = sqrt_fixture({});
    RealFunction g{
        Interval{0.0, 1.0}, Interval{0.0, 1.0},
        [](double x) {
            if (x == 0.0) return 0.0;
            const double s = std::sin(1.0 / x);
            return x * x * s * s;
        },
        [](double x) {
            if (x == 0.0) return 0.0;
            const double s = std::sin(1.0 / x);
            return 2.0 * x * s * s - std::sin(2.0 / x);
        }};
    Path path = compose(outer.path, g);
    auto md = [](double x) {
        if (x == 0.0) return kNaN;
        return std::abs(std::sin(1.0 / x) - std::cos(1.0 / x) / x);
    };
    FixtureMeta meta{"vp_pair", true, false, false, true, false, kInf, md};
    return {path, meta, outer.path, g, outer.meta};
}

// Unit-speed segment on [0, 1] followed by a constant on [1, 2].
Fixture seg_const_fixture(const FixtureParams&) {
    Path path(
        Interval{0.0, 2.0}, euclidean(2), [](double t) { return Point{std::min(t, 1.0), 0.0}; },
        {Smoothness::PiecewiseSmooth, 1.0}, {1.0});
    auto md = [](double t) { return t < 1.0 ? 1.0 : (t > 1.0 ? 0.0 : kNaN); };
    FixtureMeta meta{"seg_const", true, true, true, true, false, 1.0, md};
    return {path, meta, {}, {}, {}};
}

}  // namespace

FixtureMeta unknown_meta(std::string name) {
    FixtureMeta meta;
    meta.name = std::move(name);
    meta.known = false;
    return meta;
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"constant",    "segment",     "circle",       "helix_embedded",
                                                "cantor",      "sqrt",        "osc_bv_fail",  "diff_not_bv",
                                                "snowflake_id", "vp_pair",    "seg_const"};
    return names;
}

Fixture make_fixture(const std::string& name, const FixtureParams& params) {
    if (name == "constant") return constant_fixture(params);
    if (name == "segment") return segment_fixture(params);
    if (name == "circle") return circle_fixture(params);
    if (name == "helix_embedded") return helix_fixture(params);
    if (name == "cantor") return cantor_fixture(params);
    if (name == "sqrt") return sqrt_fixture(params);
    if (name == "osc_bv_fail") return osc_bv_fail_fixture(params);
    if (name == "diff_not_bv") return diff_not_bv_fixture(params);
    if (name == "snowflake_id") return snowflake_id_fixture(params);
    if (name == "vp_pair") return vp_pair_fixture(params);
    if (name == "seg_const") return seg_const_fixture(params);
    throw InputError("unknown fixture '" + name + "'");
}

namespace {

// Ternary digits of t in [0, 1), produced exactly for t >= 2^-9 (long double
// holds every intermediate frac(3^k t) exactly in that range).
struct TernaryScan {
    double value = 0.0;
    bool hit_one = false;
    bool tail_nonzero = false;
    int level = 0;
};

TernaryScan scan_ternary(double t) {
    TernaryScan out;
    if (t <= 0.0) return out;
    if (t >= 1.0) {
        out.value = 1.0;
        return out;
    }
    long double x = t;
    long double bit = 0.5L;
    long double acc = 0.0L;
    for (int k = 1; k <= 80 && x != 0.0L; ++k) {
        x *= 3.0L;
        const long double digit = std::floor(x);
        x -= digit;
        if (digit == 1.0L) {
            acc += bit;
            out.hit_one = true;
            out.tail_nonzero = x != 0.0L;
            out.level = k;
            break;
        }
        if (digit == 2.0L) acc += bit;
        bit *= 0.5L;
    }
    out.value = static_cast<double>(acc);
    return out;
}

}  // namespace

double cantor_function(double t) { return scan_ternary(t).value; }

bool cantor_in_removed_interval(double t, int* level) {
    if (!(t > 0.0 && t < 1.0)) return false;
    const TernaryScan s = scan_ternary(t);
    if (level) *level = s.level;
    return s.hit_one && s.tail_nonzero;
}

std::vector<Interval> cantor_level_intervals(int level) {
    std::vector<Interval> cur{{0.0, 1.0}};
    for (int k = 0; k < level; ++k) {
        std::vector<Interval> next;
        next.reserve(cur.size() * 2);
        for (const auto& iv : cur) {
            const double third = iv.length() / 3.0;
            next.push_back({iv.lo, iv.lo + third});
            next.push_back({iv.hi - third, iv.hi});
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<Interval> cantor_removed_intervals(int level) {
    std::vector<Interval> out;
    for (int k = 0; k < level; ++k) {
        for (const auto& iv : cantor_level_intervals(k)) {
            const double third = iv.length() / 3.0;
            out.push_back({iv.lo + third, iv.hi - third});
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    return out;
}

}  // namespace metpath
