// Command-line front end: simulate, compare, verify.

#include "winepbe/config.hpp"
#include "winepbe/errors.hpp"
#include "winepbe/oracles.hpp"
#include "winepbe/simulation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kConfigError = 1;
constexpr int kIntegrationFailure = 2;
constexpr int kVerificationFailure = 3;

void log_line(const std::string& s) { std::cerr << s << '\n'; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Population-balance simulator for white-wine fermentation"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Run a simulation and write CSV output");
    std::string config_path;
    std::optional<std::string> model, cells, dt, t_final, distribution, output_dir;
    simulate->add_option("--config", config_path, "Configuration file")->required();
    simulate->add_option("--model", model, "ide or ode");
    simulate->add_option("--cells", cells, "Number of mass cells");
    simulate->add_option("--dt", dt, "Time step in days");
    simulate->add_option("--t-final", t_final, "Horizon in days");
    simulate->add_option("--distribution", distribution,
                         "constant, beta, small_to_medium or two_normal_peak");
    simulate->add_option("--output-dir", output_dir, "Output directory");

    auto* compare = app.add_subcommand("compare", "Relative differences between two runs");
    std::string dir_a, dir_b, out_file;
    compare->add_option("--a", dir_a, "First run directory")->required();
    compare->add_option("--b", dir_b, "Second run directory")->required();
    compare->add_option("--out", out_file, "Output CSV")->required();

    auto* verify = app.add_subcommand("verify", "Run the oracle suite");
    std::string verify_config;
    verify->add_option("--config", verify_config, "Configuration file (defaults when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (simulate->parsed()) {
        winepbe::SimulationConfig cfg;
        try {
            winepbe::ConfigEntries overrides;
            auto put = [&](const char* key, const std::optional<std::string>& v) {
                if (v)
                    overrides[key] = *v;
            };
            put("run.model", model);
            put("grid.n_cells", cells);
            put("time.dt", dt);
            put("time.t_final", t_final);
            put("distribution.kind", distribution);
            put("output.output_dir", output_dir);
            cfg = winepbe::load_config(config_path, overrides);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kConfigError;
        }
        try {
            const int status = winepbe::run(cfg, log_line);
            if (status != 0)
                std::cerr << "integration failed; see " << (cfg.output_dir / "run_summary.txt").string() << '\n';
            return status;
        } catch (const std::exception& e) {
            std::cerr << "integration failure: " << e.what() << '\n';
            return kIntegrationFailure;
        }
    }

    if (compare->parsed()) {
        try {
            winepbe::write_comparison(winepbe::compare_runs(dir_a, dir_b), out_file);
        } catch (const std::exception& e) {
            std::cerr << "compare: " << e.what() << '\n';
            return kConfigError;
        }
        return 0;
    }

    winepbe::SimulationConfig cfg;
    try {
        cfg = verify_config.empty() ? winepbe::build_config({}) : winepbe::load_config(verify_config);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    bool all_pass = true;
    for (const winepbe::OracleReport& r : winepbe::run_verification(cfg, log_line)) {
        std::cout << winepbe::format_report(r) << '\n';
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : kVerificationFailure;
}
