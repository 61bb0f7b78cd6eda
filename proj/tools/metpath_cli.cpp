// metpath: run theorem checks on catalog fixtures or sampled CSV paths.
//
//   metpath run --fixture circle --checks all --out out/
//   metpath run --csv samples.csv --checks variation_identity --format json
//   metpath md-profile --fixture sqrt --grid 256
//   metpath list
//
// Exit codes: 0 no violated check, 1 some check violated, 2 input error.

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "metpath/error.hpp"
#include "metpath/report.hpp"

namespace {

using namespace metpath;

FixtureParams parse_params(const std::vector<std::string>& items) {
    FixtureParams out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--param expects key=value, got '" + item + "'");
        try {
            std::size_t used = 0;
            const std::string value = item.substr(eq + 1);
            out[item.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw InputError("--param " + item.substr(0, eq) + ": not a number");
        }
    }
    return out;
}

struct InputFlags {
    std::string fixture;
    std::string csv;
    std::vector<std::string> params;

    void attach(CLI::App* app) {
        auto* fx = app->add_option("--fixture", fixture, "Catalog fixture name (see `metpath list`)");
        auto* cs = app->add_option("--csv", csv, "CSV file with header t,x1,...,xn");
        fx->excludes(cs);
        app->add_option("--param", params, "Fixture parameter key=value (repeatable)");
    }

    void apply(RunConfig& config) const {
        if (!fixture.empty()) config.fixture = fixture;
        if (!csv.empty()) config.csv = csv;
        config.params = parse_params(params);
    }
};

// TOML reader that files top-level keys under the `run` subcommand.
class RunSectionConfig : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigTOML::from_config(input);
        for (auto& item : items)
            if (item.parents.empty()) item.parents = {"run"};
        return items;
    }
};

int run_command(const RunConfig& config) {
    const RunResult result = run(config);
    for (const auto& r : result.reports) {
        std::cout << to_string(r.theorem_id) << ": " << to_string(r.verdict);
        if (!r.notes.empty()) std::cout << " (" << r.notes << ")";
        std::cout << "\n";
    }
    for (const auto& f : result.written) std::cout << "wrote " << f.string() << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric derivative, variation and theorem checks for paths in metric spaces"};
    app.require_subcommand(1);

    RunConfig config;
    InputFlags run_input;
    std::string checks = "all";
    std::string formats = "json,csv";
    std::string out_dir = ".";

    // Config files are read by the root app; plain keys belong to `run`.
    app.set_config("--config", "", "Key=value config file for `run`; command-line flags win");
    app.config_formatter(std::make_shared<RunSectionConfig>());
    auto* run_cmd = app.add_subcommand("run", "Run theorem checks and write report files");
    run_cmd->fallthrough();
    run_input.attach(run_cmd);
    run_cmd->add_option("--checks", checks, "Comma-separated theorem ids or 'all'")->capture_default_str();
    run_cmd->add_option("--tol", config.options.tol, "Check tolerance")->capture_default_str();
    run_cmd->add_option("--max-level", config.options.max_level, "Dyadic refinement depth for variation")
        ->capture_default_str();
    run_cmd->add_option("--grid", config.options.grid, "Grid density (cells) for md profiles")->capture_default_str();
    run_cmd->add_option("--deltas", config.options.deltas, "Covering scales for length estimates (decreasing)");
    run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run_cmd->add_option("--format", formats, "Output formats: json, csv or json,csv")->capture_default_str();

    InputFlags md_input;
    std::size_t md_cells = 256;
    auto* md_cmd = app.add_subcommand("md-profile", "Print x,md,status on a uniform grid");
    md_input.attach(md_cmd);
    md_cmd->add_option("--grid", md_cells, "Number of grid cells")->capture_default_str();

    auto* list_cmd = app.add_subcommand("list", "List fixtures and theorem ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*list_cmd) {
            std::cout << "fixtures:";
            for (const auto& n : fixture_names()) std::cout << " " << n;
            std::cout << "\ntheorems:";
            for (TheoremId id : all_theorems()) std::cout << " " << to_string(id);
            std::cout << "\n";
            return kExitOk;
        }
        if (*md_cmd) {
            RunConfig md_config;
            md_input.apply(md_config);
            if (md_config.fixture.has_value() == md_config.csv.has_value())
                throw InputError("give exactly one of --fixture and --csv");
            if (md_cells < 1) throw InputError("--grid must be positive");
            std::cout << md_profile_csv(load_input(md_config).path, md_cells);
            return kExitOk;
        }
        run_input.apply(config);
        config.checks = parse_check_list(checks);
        config.checks_explicit = checks != "all";
        config.output_dir = out_dir;
        config.write_json = config.write_csv = false;
        for (const auto& f : CLI::detail::split(formats, ',')) {
            const std::string name = CLI::detail::trim_copy(f);
            if (name == "json") config.write_json = true;
            else if (name == "csv") config.write_csv = true;
            else throw InputError("unknown format '" + name + "'");
        }
        return run_command(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
