#include "metpath/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <sstream>

#include "json.hpp"

#include "metpath/error.hpp"
#include "metpath/variation.hpp"

namespace metpath {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
    throw InputError("csv row " + std::to_string(row) + ": " + what);
}

double parse_number(const std::string& text, std::size_t row) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end) row_error(row, "not a number: '" + text + "'");
    if (!std::isfinite(v)) row_error(row, "non-finite value");
    return v;
}

ordered_json real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

CheckReport skipped(TheoremId id, const std::string& why) {
    CheckReport r;
    r.theorem_id = id;
    r.notes = "skipped: " + why;
    return r;
}

CheckReport run_one(const Fixture& fx, TheoremId id, const CheckOptions& opts, bool explicit_request) {
    const Path& path = fx.path;
    const Interval d = path.domain();
    const IntervalUnion whole({d});
    switch (id) {
        case TheoremId::VariationIdentity: return check_variation_identity(path, fx.meta, opts);
        case TheoremId::FundamentalLemma: {
            const MdIntegral mi = md_integral(path, whole, opts);
            return check_fundamental_lemma(path, whole, 1.001 * mi.max_finite_md, opts);
        }
        case TheoremId::ImageBound: return check_image_bound(path, whole, opts);
        case TheoremId::Sard: return check_sard(path, opts);
        case TheoremId::AcModulus: return check_ac_modulus(path, fx.meta, {0.5, 0.1}, opts);
        case TheoremId::BanachZarecki: return check_banach_zarecki(fx, opts);
        case TheoremId::Constancy: return check_constancy(path, fx.meta, opts);
        case TheoremId::InjectiveIdentity:
            if (fx.meta.known && !fx.meta.is_injective && !explicit_request)
                return skipped(id, "path not injective");
            return check_injective_identity(path, fx.meta, whole, opts);
        case TheoremId::VfImage: {
            const IntervalUnion middle({{d.lo + 0.25 * d.length(), d.hi - 0.25 * d.length()}});
            return check_vf_image(path, fx.meta, middle, opts);
        }
        case TheoremId::Composition:
            if (fx.outer && fx.inner) return check_composition(*fx.outer, *fx.inner, *fx.outer_meta, opts);
            return check_composition(path, identity_function(d), fx.meta, opts);
    }
    throw InputError("unknown theorem id");
}

void write_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write " + file.string());
    out << content;
    if (!out) throw InputError("cannot write " + file.string());
}

}  // namespace

Fixture parse_csv_path(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t row = 0;
    std::size_t columns = 0;
    std::vector<double> ts;
    std::vector<Point> xs;
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (row == 1) {
            const auto header = split(line, ',');
            if (header.size() < 2 || header.front() != "t") row_error(row, "header must read t,x1,...,xn");
            columns = header.size();
            continue;
        }
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != columns)
            row_error(row, "expected " + std::to_string(columns) + " columns, got " + std::to_string(cells.size()));
        const double t = parse_number(cells[0], row);
        if (!ts.empty() && !(t > ts.back())) row_error(row, "t must be strictly increasing");
        Point p;
        for (std::size_t i = 1; i < cells.size(); ++i) p.push_back(parse_number(cells[i], row));
        ts.push_back(t);
        xs.push_back(std::move(p));
    }
    if (row == 0) throw InputError("csv: empty input");
    if (ts.size() < 2) throw InputError("csv: need at least two data rows");

    auto evaluator = [ts, xs](double t) {
        const auto it = std::upper_bound(ts.begin(), ts.end(), t);
        if (it == ts.begin()) return xs.front();
        if (it == ts.end()) return xs.back();
        const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
        const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
        Point p(xs[i].size());
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = xs[i][k] + w * (xs[i + 1][k] - xs[i][k]);
        return p;
    };
    std::vector<double> knots(ts.begin() + 1, ts.end() - 1);
    Path path(Interval{ts.front(), ts.back()}, euclidean(columns - 1), evaluator,
              {Smoothness::PiecewiseGeodesic, 0.0}, std::move(knots));
    return {path, unknown_meta(name), {}, {}, {}};
}

Fixture parse_csv_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot read " + file.string());
    return parse_csv_path(in, file.filename().string());
}

std::vector<TheoremId> parse_check_list(const std::string& text) {
    if (trim(text) == "all") return all_theorems();
    std::vector<TheoremId> out;
    for (const auto& item : split(text, ',')) {
        const auto id = theorem_from_string(item);
        if (!id) throw InputError("unknown check '" + item + "'");
        if (std::find(out.begin(), out.end(), *id) == out.end()) out.push_back(*id);
    }
    if (out.empty()) throw InputError("empty check list");
    return out;
}

void validate(const RunConfig& c) {
    if (c.fixture.has_value() == c.csv.has_value()) throw InputError("give exactly one of --fixture and --csv");
    if (!(c.options.tol > 0.0)) throw InputError("tol must be positive");
    if (c.options.grid < 64) throw InputError("grid density must be at least 64");
    if (c.options.max_level < 3) throw InputError("max-level must be at least 3");
    const auto& deltas = c.options.deltas;
    if (deltas.size() < 3) throw InputError("delta schedule needs at least 3 entries");
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw InputError("delta schedule must be positive and strictly decreasing");
    if (c.checks.empty()) throw InputError("no checks selected");
}

Fixture load_input(const RunConfig& config) {
    if (config.csv) return parse_csv_file(*config.csv);
    if (config.fixture) return make_fixture(*config.fixture, config.params);
    throw InputError("no input given");
}

std::vector<CheckReport> run_checks(const Fixture& fixture, const std::vector<TheoremId>& ids,
                                    const CheckOptions& options, bool explicit_request) {
    std::vector<std::pair<TheoremId, std::future<CheckReport>>> jobs;
    for (TheoremId id : all_theorems()) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        jobs.emplace_back(id, std::async(std::launch::async, run_one, std::cref(fixture), id, std::cref(options),
                                         explicit_request));
    }
    std::vector<CheckReport> out;
    for (auto& [id, job] : jobs) out.push_back(job.get());
    return out;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : r.params) params[k] = real(v);
        arr.push_back({{"theorem_id", std::string(to_string(r.theorem_id))},
                       {"verdict", std::string(to_string(r.verdict))},
                       {"lhs", real(r.lhs)},
                       {"rhs", real(r.rhs)},
                       {"slack", real(r.slack)},
                       {"params", params},
                       {"notes", r.notes}});
    }
    return arr.dump(2) + "\n";
}

std::string md_profile_csv(const Path& path, std::size_t cells, const CheckOptions& options) {
    const Interval d = path.domain();
    std::vector<double> grid;
    if (d.length() == 0.0) grid.push_back(d.lo);
    else
        for (std::size_t i = 0; i <= cells; ++i)
            grid.push_back(i == cells ? d.hi : d.lo + d.length() * (static_cast<double>(i) / static_cast<double>(cells)));
    std::string out = "x,md,status\n";
    for (const MdSample& s : md_profile(path, grid, options.schedule, options.md))
        out += format_real(s.x) + "," + format_real(s.md) + "," + std::string(to_string(s.status)) + "\n";
    return out;
}

std::string variation_trace_csv(const Path& path, const CheckOptions& options) {
    const RefinementEstimate est = variation(path, options.refine_tol, options.max_level);
    std::string out = "level,estimate\n";
    for (const TracePoint& p : est.trace) out += std::to_string(p.level) + "," + format_real(p.estimate) + "\n";
    return out;
}

RunResult run(const RunConfig& config) {
    validate(config);
    const Fixture fixture = load_input(config);
    RunResult result;
    result.reports = run_checks(fixture, config.checks, config.options, config.checks_explicit);
    if (config.csv) {
        for (auto& r : result.reports) r.notes += r.notes.empty() ? "interpolation-dependent" : "; interpolation-dependent";
    }
    for (const auto& r : result.reports)
        if (r.verdict == Verdict::Violated) result.exit_code = kExitViolated;

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw InputError("cannot create " + config.output_dir.string() + ": " + ec.message());
    if (config.write_json) {
        result.written.push_back(config.output_dir / "report.json");
        write_file(result.written.back(), reports_to_json(result.reports));
    }
    if (config.write_csv) {
        result.written.push_back(config.output_dir / "md_profile.csv");
        write_file(result.written.back(), md_profile_csv(fixture.path, config.options.grid, config.options));
        result.written.push_back(config.output_dir / "variation_trace.csv");
        write_file(result.written.back(), variation_trace_csv(fixture.path, config.options));
    }
    return result;
}

}  // namespace metpath
