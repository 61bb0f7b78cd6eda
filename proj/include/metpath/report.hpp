#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metpath/checks.hpp"
#include "metpath/fixtures.hpp"

namespace metpath {

/// Piecewise-linear Euclidean path through the rows of a `t,x1,...,xn` table.
/// Throws InputError naming the offending row (1-based, header is row 1) for
/// non-numeric or non-finite entries, ragged rows and non-increasing t.
Fixture parse_csv_path(std::istream& in, const std::string& name = "csv");
Fixture parse_csv_file(const std::filesystem::path& file);

/// "all" or a comma-separated list of theorem ids. Throws InputError on an unknown id.
std::vector<TheoremId> parse_check_list(const std::string& text);

struct RunConfig {
    std::optional<std::string> fixture;
    FixtureParams params;
    std::optional<std::filesystem::path> csv;
    std::vector<TheoremId> checks = all_theorems();
    bool checks_explicit = false;  // named on the command line rather than "all"
    CheckOptions options;
    std::filesystem::path output_dir = ".";
    bool write_json = true;
    bool write_csv = true;
};

/// Throws InputError when tol <= 0, grid < 64, max_level < 3, the delta
/// schedule is not strictly decreasing, or the input is missing or ambiguous.
void validate(const RunConfig& config);

/// Fixture named by the config, or the parsed CSV path.
Fixture load_input(const RunConfig& config);

/// Runs the requested checks concurrently; reports come back in the order of
/// all_theorems(). A check that does not apply (injective_identity on a
/// non-injective path) is reported inconclusive unless `explicit_request`,
/// in which case its InputError propagates.
std::vector<CheckReport> run_checks(const Fixture& fixture, const std::vector<TheoremId>& ids,
                                    const CheckOptions& options = {}, bool explicit_request = false);

/// JSON array of reports. Infinite and NaN reals are written as the strings
/// "inf", "-inf" and "nan".
std::string reports_to_json(const std::vector<CheckReport>& reports);

/// `x,md,status` on a uniform grid of `cells` cells.
std::string md_profile_csv(const Path& path, std::size_t cells, const CheckOptions& options = {});

/// `level,estimate` from the variation refinement.
std::string variation_trace_csv(const Path& path, const CheckOptions& options = {});

struct RunResult {
    std::vector<CheckReport> reports;
    int exit_code = 0;  // 0 ok, 1 some check violated
    std::vector<std::filesystem::path> written;
};

/// Validates, runs the checks and writes report.json, md_profile.csv and
/// variation_trace.csv into output_dir. Output is byte-identical across runs
/// of the same config.
RunResult run(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInputError = 2;

}  // namespace metpath
