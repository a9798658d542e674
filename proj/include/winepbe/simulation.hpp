#pragma once

#include "winepbe/config.hpp"
#include "winepbe/discretization.hpp"
#include "winepbe/integrator.hpp"
#include "winepbe/ode_model.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace winepbe {

struct SimulationResult {
    SimulationConfig config;
    MassGrid grid;  ///< population-balance runs only
    Trajectory trajectory;
    double setup_seconds = 0.0;
    double wall_seconds = 0.0;
};

/// Packed initial state (w, N, E, S, O) of the population-balance model.
Eigen::VectorXd initial_state(const SimulationConfig& cfg, const MassGrid& grid);

/// Reduced-model initial state with X(0) = sum_i centers_i w_i(0) dm.
OdeState matched_ode_state(const SimulationConfig& cfg);

/// Runs the configured model without touching the file system. Population
/// balance runs abort when a density value drops below -1e-9 times the
/// largest value of the same state.
SimulationResult simulate(const SimulationConfig& cfg, const std::function<void(const std::string&)>& log = {});

/// Writes trajectory.csv, density snapshots (population balance only) or
/// biomass.csv (reduced model), and run_summary.txt into `dir`.
void write_outputs(const SimulationResult& result, const std::filesystem::path& dir);

/// simulate + write_outputs into cfg.output_dir. Returns 0 on success, 2 on
/// integration failure (partial outputs are still written).
int run(const SimulationConfig& cfg, const std::function<void(const std::string&)>& log = {});

/// Header and numeric rows of a CSV file written by write_outputs.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_difference(double a, double b);

struct ComparisonReport {
    static constexpr const char* kStates[4] = {"N", "E", "S", "O"};
    std::vector<double> times;
    std::vector<std::array<double, 4>> at_times;
    std::array<double, 4> max_over_horizon{};
};

/**
 * Per-state relative differences of N, E, S, O between two run directories
 * at the snapshot times recorded in the first run's summary (the final time
 * when none are recorded), followed by a `max` row over the whole horizon.
 * Throws std::runtime_error when the runs do not share a time grid.
 */
ComparisonReport compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b);

void write_comparison(const ComparisonReport& report, const std::filesystem::path& out);

/// Decimal text with 17 significant digits.
std::string format_number(double value);

}  // namespace winepbe
