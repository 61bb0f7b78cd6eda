#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metpath/path.hpp"

namespace metpath {

/// Analytic ground truth attached to a catalog path. Numerical checks read
/// these flags; they never write them.
struct FixtureMeta {
    std::string name;
    bool is_continuous = false;
    bool is_bv = false;
    bool is_ac = false;
    bool has_property_n = false;
    bool is_injective = false;
    /// Exact total variation; +inf when unbounded, nullopt when unknown.
    std::optional<double> variation_exact;
    /// Closed-form metric derivative. Returns +inf where it is infinite and
    /// NaN where the limit does not exist. Empty when unknown.
    std::function<double(double)> md_closed_form;
    /// False for paths without analytic information; the flags above are then
    /// placeholders and checks fall back to numerical evidence.
    bool known = true;

    /// AC => continuous, BV and (N); and conversely.
    [[nodiscard]] bool consistent() const noexcept {
        return is_ac == (is_continuous && is_bv && has_property_n);
    }
};

/// Metadata for paths with no analytic information (sampled data).
FixtureMeta unknown_meta(std::string name);

using FixtureParams = std::map<std::string, double>;

struct Fixture {
    Path path;
    FixtureMeta meta;
    /// Present for composite fixtures: path == compose(*outer, *inner).
    std::optional<Path> outer;
    std::optional<RealFunction> inner;
    std::optional<FixtureMeta> outer_meta;
};

/// Catalog names accepted by make_fixture.
const std::vector<std::string>& fixture_names();

/// Build a catalog path. Throws InputError on an unknown name or bad parameter.
Fixture make_fixture(const std::string& name, const FixtureParams& params = {});

/// Cantor staircase on [0, 1], computed by scanning ternary digits up to
/// the first digit 1.
double cantor_function(double t);

/// True when t lies in an open middle-third interval removed at some level;
/// `level` (if given) receives the 1-based position of the first digit 1.
bool cantor_in_removed_interval(double t, int* level = nullptr);

/// Open intervals removed at construction levels 1..level (2^level - 1 of them), sorted.
std::vector<Interval> cantor_removed_intervals(int level);

/// Closed intervals remaining after `level` construction steps (2^level of them).
std::vector<Interval> cantor_level_intervals(int level);

}  // namespace metpath
