#include "winepbe/config.hpp"

#include "winepbe/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace winepbe {

ModelKind parse_model_kind(std::string_view name)
{
    if (name == "ide")
        return ModelKind::ide;
    if (name == "ode")
        return ModelKind::ode;
    throw ConfigError("model: expected 'ide' or 'ode', got '" + std::string(name) + "'");
}

std::string to_string(ModelKind kind)
{
    return kind == ModelKind::ide ? "ide" : "ode";
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, std::string_view text)
{
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
        throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
    return value;
}

long parse_integer(const std::string& key, std::string_view text)
{
    std::string_view s = trim(text);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(key + ": expected an integer, got '" + std::string(text) + "'");
    return value;
}

std::string parse_string(std::string_view text)
{
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<double> parse_list(const std::string& key, std::string_view text)
{
    std::vector<double> out;
    std::string_view rest = trim(text);
    if (rest.empty())
        return out;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_number(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

// Derived defaults that follow other keys unless given explicitly.
struct Explicit {
    bool lambda = false;
    bool ramp_start = false;
    bool ramp_end = false;
    bool snapshots = false;
};

using Setter = std::function<void(SimulationConfig&, Explicit&, const std::string& key, std::string_view value)>;

Setter number(double SimulationConfig::*member)
{
    return [member](SimulationConfig& c, Explicit&, const std::string& k, std::string_view v) {
        c.*member = parse_number(k, v);
    };
}

template <class Sub>
Setter number(Sub SimulationConfig::*sub, double Sub::*member)
{
    return [sub, member](SimulationConfig& c, Explicit&, const std::string& k, std::string_view v) {
        (c.*sub).*member = parse_number(k, v);
    };
}

const std::vector<std::pair<std::string, Setter>>& key_table()
{
    using C = SimulationConfig;
    static const std::vector<std::pair<std::string, Setter>> table = [] {
        std::vector<std::pair<std::string, Setter>> t;
        const std::pair<const char*, double KineticParams::*> kinetic[] = {
            {"mu1", &KineticParams::mu1}, {"mu2", &KineticParams::mu2},     {"beta1", &KineticParams::beta1},
            {"beta2", &KineticParams::beta2}, {"KE1", &KineticParams::KE1}, {"KE2", &KineticParams::KE2},
            {"KN", &KineticParams::KN},       {"KS1", &KineticParams::KS1}, {"KS2", &KineticParams::KS2},
            {"KO", &KineticParams::KO},       {"k1", &KineticParams::k1},   {"k2", &KineticParams::k2},
            {"k3", &KineticParams::k3},       {"k4", &KineticParams::k4},   {"kd", &KineticParams::kd},
            {"kd1", &KineticParams::kd1},     {"kd2", &KineticParams::kd2}, {"tol", &KineticParams::tol},
            {"eps", &KineticParams::eps},
        };
        for (const auto& [name, member] : kinetic)
            t.emplace_back(std::string("kinetic.") + name, number(&C::kinetic, member));

        t.emplace_back("division.gamma", number(&C::division, &DivisionParams::gamma));
        t.emplace_back("division.delta", number(&C::division, &DivisionParams::delta));
        t.emplace_back("division.lambda", [](C& c, Explicit& e, const std::string& k, std::string_view v) {
            c.division.lambda = parse_number(k, v);
            e.lambda = true;
        });
        t.emplace_back("division.beta", number(&C::division, &DivisionParams::beta));
        t.emplace_back("division.m_t", number(&C::division, &DivisionParams::m_t));
        t.emplace_back("division.m_d", number(&C::division, &DivisionParams::m_d));

        t.emplace_back("temperature.T_low", number(&C::profile, &TemperatureProfile::T_low));
        t.emplace_back("temperature.T_high", number(&C::profile, &TemperatureProfile::T_high));
        t.emplace_back("temperature.t_ramp_start", [](C& c, Explicit& e, const std::string& k, std::string_view v) {
            c.profile.t_ramp_start = parse_number(k, v);
            e.ramp_start = true;
        });
        t.emplace_back("temperature.t_ramp_end", [](C& c, Explicit& e, const std::string& k, std::string_view v) {
            c.profile.t_ramp_end = parse_number(k, v);
            e.ramp_end = true;
        });

        t.emplace_back("grid.m_min", number(&C::grid, &GridConfig::m_min));
        t.emplace_back("grid.m_max", number(&C::grid, &GridConfig::m_max));
        t.emplace_back("grid.n_cells", [](C& c, Explicit&, const std::string& k, std::string_view v) {
            const long n = parse_integer(k, v);
            if (n < 3)
                throw ConfigError(k + ": must be >= 3");
            c.grid.n_cells = static_cast<std::size_t>(n);
        });

        t.emplace_back("time.dt", number(&C::dt));
        t.emplace_back("time.t_final", number(&C::t_final));

        t.emplace_back("distribution.kind", [](C& c, Explicit&, const std::string&, std::string_view v) {
            c.distribution.kind = parse_distribution_kind(parse_string(v));
        });
        const std::pair<const char*, double DistributionSpec::*> dist[] = {
            {"total_cells", &DistributionSpec::total_cells}, {"beta_a", &DistributionSpec::beta_a},
            {"beta_b", &DistributionSpec::beta_b},           {"plateau_end", &DistributionSpec::plateau_end},
            {"taper_end", &DistributionSpec::taper_end},     {"mean1", &DistributionSpec::mean1},
            {"std1", &DistributionSpec::std1},               {"mean2", &DistributionSpec::mean2},
            {"std2", &DistributionSpec::std2},               {"weight", &DistributionSpec::weight},
        };
        for (const auto& [name, member] : dist)
            t.emplace_back(std::string("distribution.") + name, number(&C::distribution, member));

        t.emplace_back("initial.N0", number(&C::initial, &InitialConcentrations::N0));
        t.emplace_back("initial.S0", number(&C::initial, &InitialConcentrations::S0));
        t.emplace_back("initial.O0", number(&C::initial, &InitialConcentrations::O0));
        t.emplace_back("initial.E0", number(&C::initial, &InitialConcentrations::E0));

        t.emplace_back("newton.tolerance", number(&C::newton, &NewtonConfig::tolerance));
        t.emplace_back("newton.max_iterations", [](C& c, Explicit&, const std::string& k, std::string_view v) {
            c.newton.max_iterations = static_cast<int>(parse_integer(k, v));
        });
        t.emplace_back("quadrature.n_quad", [](C& c, Explicit&, const std::string& k, std::string_view v) {
            c.n_quad = static_cast<int>(parse_integer(k, v));
        });

        t.emplace_back("output.snapshot_times", [](C& c, Explicit& e, const std::string& k, std::string_view v) {
            c.snapshot_times = parse_list(k, v);
            e.snapshots = true;
        });
        t.emplace_back("output.output_dir", [](C& c, Explicit&, const std::string&, std::string_view v) {
            c.output_dir = parse_string(v);
        });
        t.emplace_back("run.model", [](C& c, Explicit&, const std::string&, std::string_view v) {
            c.model = parse_model_kind(parse_string(v));
        });
        return t;
    }();
    return table;
}

std::string_view leaf(std::string_view key)
{
    const auto dot = key.rfind('.');
    return dot == std::string_view::npos ? key : key.substr(dot + 1);
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& entry : key_table())
            out.push_back(entry.first);
        return out;
    }();
    return keys;
}

std::string resolve_key(std::string_view key)
{
    std::string match;
    int leaf_matches = 0;
    for (const std::string& full : config_keys()) {
        if (full == key)
            return full;
        if (key.find('.') == std::string_view::npos && leaf(full) == key) {
            match = full;
            ++leaf_matches;
        }
    }
    if (leaf_matches == 1)
        return match;
    if (leaf_matches > 1)
        throw ConfigError(std::string(key) + ": ambiguous key, use the dotted form");
    throw ConfigError(std::string(key) + ": unknown key");
}

ConfigEntries parse_config_text(std::string_view text)
{
    ConfigEntries entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string_view raw_key = trim(line.substr(0, eq));
        if (raw_key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing key");
        const std::string key = resolve_key(raw_key);
        if (!entries.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
            throw ConfigError(key + ": duplicate key");
    }
    return entries;
}

SimulationConfig build_config(const ConfigEntries& entries)
{
    SimulationConfig cfg;
    Explicit given;
    for (const auto& [raw_key, value] : entries) {
        const std::string key = resolve_key(raw_key);
        for (const auto& [name, setter] : key_table())
            if (name == key)
                setter(cfg, given, key, value);
    }
    cfg.profile.t_final = cfg.t_final;
    if (!given.lambda && cfg.division.beta > 0.0)
        cfg.division.lambda = compute_lambda(cfg.division.beta);
    if (!given.ramp_start)
        cfg.profile.t_ramp_start = 0.475 * cfg.t_final;
    if (!given.ramp_end)
        cfg.profile.t_ramp_end = 0.525 * cfg.t_final;
    if (!given.snapshots) {
        std::erase_if(cfg.snapshot_times, [&](double t) { return t >= cfg.t_final; });
        cfg.snapshot_times.push_back(cfg.t_final);
    }
    cfg.validate();
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path, const ConfigEntries& overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ConfigEntries entries = parse_config_text(buffer.str());
    for (const auto& [key, value] : overrides)
        entries[resolve_key(key)] = value;
    return build_config(entries);
}

void SimulationConfig::validate() const
{
    if (!(t_final > 0.0))
        throw ConfigError("time.t_final: must be > 0");
    if (!(dt > 0.0))
        throw ConfigError("time.dt: must be > 0");
    try {
        step_count(t_final, dt);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("time.dt: ") + e.what());
    }
    if (!(grid.m_max > grid.m_min))
        throw ConfigError("grid.m_max: must exceed grid.m_min");
    if (grid.n_cells < 3)
        throw ConfigError("grid.n_cells: must be >= 3");
    kinetic.validate(profile.T_low, profile.T_high);
    division.validate(grid.m_max);
    profile.validate();
    distribution.validate();
    newton.validate();
    if (n_quad < 2)
        throw ConfigError("quadrature.n_quad: must be >= 2");
    const std::pair<const char*, double> initial_values[] = {
        {"initial.N0", initial.N0}, {"initial.S0", initial.S0}, {"initial.O0", initial.O0}, {"initial.E0", initial.E0}};
    for (const auto& [key, value] : initial_values)
        if (!(value >= 0.0))
            throw ConfigError(std::string(key) + ": must be >= 0");
    for (double t : snapshot_times)
        if (!(t >= 0.0 && t <= t_final))
            throw ConfigError("output.snapshot_times: " + std::to_string(t) + " lies outside [0, t_final]");
}

}  // namespace winepbe
