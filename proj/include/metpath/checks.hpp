#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metpath/fixtures.hpp"
#include "metpath/measures.hpp"
#include "metpath/metric_derivative.hpp"
#include "metpath/path.hpp"

namespace metpath {

enum class TheoremId {
    VariationIdentity,
    FundamentalLemma,
    ImageBound,
    Sard,
    AcModulus,
    BanachZarecki,
    Constancy,
    InjectiveIdentity,
    VfImage,
    Composition
};

std::string_view to_string(TheoremId id) noexcept;
std::optional<TheoremId> theorem_from_string(std::string_view name);
/// Every theorem id, in report order.
const std::vector<TheoremId>& all_theorems();

enum class Verdict { Holds, Violated, Inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct CheckReport {
    TheoremId theorem_id = TheoremId::VariationIdentity;
    Verdict verdict = Verdict::Inconclusive;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    std::map<std::string, double> params;
    std::string notes;
};

struct CheckOptions {
    double tol = 1e-3;
    int max_level = 14;
    std::size_t grid = 4096;
    double refine_tol = 1e-6;  // convergence tolerance of the variation refinement
    double deriv_tol = 1e-9;   // |g'| at or below this counts as g' = 0
    double zero_tol = 1e-9;    // md at or below this counts as md = 0
    std::vector<double> deltas{1e-1, 1e-2, 1e-3};
    StepSchedule schedule;
    MdOptions md;
};

struct MdIntegral {
    double value = 0.0;
    IntegrabilityFlag flag = IntegrabilityFlag::Integrable;
    double max_finite_md = 0.0;
    std::size_t infinite_points = 0;
    std::size_t undefined_points = 0;  // NoLimit or Inconclusive
    /// Infinite or undefined samples other than component endpoints and path
    /// breakpoints, i.e. outside the finite set a theorem may ignore.
    std::size_t exceptional_points = 0;
    std::size_t points = 0;
};

/// Integral of md over a finite interval union, each component sampled on a
/// graded grid with density proportional to its share of the domain.
MdIntegral md_integral(const Path& path, const IntervalUnion& set, const CheckOptions& opts = {});

/// Integral of md versus total variation; equality asserted for AC fixtures.
CheckReport check_variation_identity(const Path& path, const FixtureMeta& meta, const CheckOptions& opts = {});

/// H^1(f(E)) <= K m*(E), provided md <= K on the grid of E.
CheckReport check_fundamental_lemma(const Path& path, const IntervalUnion& set, double k,
                                    const CheckOptions& opts = {});

/// H^1(f(E)) <= integral of md over E.
CheckReport check_image_bound(const Path& path, const IntervalUnion& set, const CheckOptions& opts = {});

/// The image of the md = 0 region has vanishing length.
CheckReport check_sard(const Path& path, const CheckOptions& opts = {});

/// Region where md = 0 was detected, built from the zero radii of the md profile.
IntervalUnion md_zero_region(const Path& path, const CheckOptions& opts = {});

struct AcModulusPoint {
    double eps = 0.0;
    /// Smallest total length of a dyadic family with sum >= eps, per level
    /// (index 0 is level 1); +inf when no family reaches eps.
    std::vector<double> violating_length;
    double delta_hat = 0.0;  // value at the finest level, capped at the domain length
};

enum class AcEvidence { Consistent, NotAc };
std::string_view to_string(AcEvidence e) noexcept;

struct AcModulusResult {
    std::vector<AcModulusPoint> points;
    AcEvidence evidence = AcEvidence::Consistent;
    int levels = 0;
};

/// Adversarial search for the AC modulus. At dyadic level m (1..levels, at most
/// 2^10 cells) the k cells with the largest increments form the family of
/// length k 2^-m |b - a| with the largest sum. NotAc when, for some eps, the
/// shortest violating family keeps shrinking (halving over the last four levels).
/// Heuristic evidence only.
AcModulusResult ac_modulus(const Path& path, const std::vector<double>& eps_list, int levels = 10);

CheckReport check_ac_modulus(const Path& path, const FixtureMeta& meta, const std::vector<double>& eps_list = {0.5, 0.1},
                             const CheckOptions& opts = {});

/// AC iff continuous, BV and (N): metadata cross-check plus numerical corroboration.
CheckReport check_banach_zarecki(const Fixture& fixture, const CheckOptions& opts = {});

/// md = 0 on the grid implies constancy. Skipped (inconclusive) unless the
/// path is flagged AC; with hypothesis_free the measurement runs anyway and a
/// non-constant outcome is reported as a counterexample note.
CheckReport check_constancy(const Path& path, const FixtureMeta& meta, const CheckOptions& opts = {},
                            bool hypothesis_free = false);

/// Integral of md over A versus H^1(f(A)) for injective paths.
/// Throws InputError when the metadata marks the path as not injective.
CheckReport check_injective_identity(const Path& path, const FixtureMeta& meta, const IntervalUnion& set,
                                     const CheckOptions& opts = {});

/// m*(v_f(A)) >= integral of md over A, with equality for AC paths.
CheckReport check_vf_image(const Path& path, const FixtureMeta& meta, const IntervalUnion& set,
                           const CheckOptions& opts = {});

/// f o g is AC iff h(x) = md(f, g(x)) |g'(x)| is integrable (h = 0 where
/// g' = 0), plus chain-rule spot checks at interior grid points.
/// Throws InputError when the range of g escapes the domain of f.
CheckReport check_composition(const Path& f, const RealFunction& g, const FixtureMeta& f_meta,
                              const CheckOptions& opts = {});

inline constexpr int kChainRulePoints = 100;

}  // namespace metpath
