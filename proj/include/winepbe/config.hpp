#pragma once

#include "winepbe/initial_distribution.hpp"
#include "winepbe/integrator.hpp"
#include "winepbe/kinetics.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace winepbe {

enum class ModelKind { ide, ode };

ModelKind parse_model_kind(std::string_view name);
std::string to_string(ModelKind kind);

struct GridConfig {
    double m_min = 0.001;
    double m_max = 0.999;
    std::size_t n_cells = 150;
};

struct InitialConcentrations {
    double N0 = 0.5;     ///< g/l
    double S0 = 200.0;   ///< g/l
    double O0 = 0.0153;  ///< g/l
    double E0 = 0.0;     ///< g/l
};

struct SimulationConfig {
    KineticParams kinetic;
    DivisionParams division;
    TemperatureProfile profile;
    GridConfig grid;
    double dt = 1.0 / 192.0;
    double t_final = 20.0;
    DistributionSpec distribution;
    InitialConcentrations initial;
    NewtonConfig newton;
    int n_quad = 30;
    std::vector<double> snapshot_times{0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0};
    std::filesystem::path output_dir = "output";
    ModelKind model = ModelKind::ide;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Raw `key = value` pairs keyed by their full dotted name.
using ConfigEntries = std::map<std::string, std::string>;

/// All accepted dotted keys.
const std::vector<std::string>& config_keys();

/// Maps a dotted key, or a bare leaf name that is unique among the keys
/// (e.g. `tol`, `gamma`), to its dotted form. Throws ConfigError otherwise.
std::string resolve_key(std::string_view key);

/// Parses flat `key = value` text with `#` comments.
ConfigEntries parse_config_text(std::string_view text);

/**
 * Builds a validated configuration from defaults plus entries. Defaults that
 * depend on other values are derived after the entries are applied:
 * division.lambda from division.beta, the temperature ramp from t_final and
 * the snapshot times (defaults below t_final plus t_final itself), unless
 * given explicitly.
 */
SimulationConfig build_config(const ConfigEntries& entries);

SimulationConfig load_config(const std::filesystem::path& path, const ConfigEntries& overrides = {});

}  // namespace winepbe
