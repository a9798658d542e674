#include "winepbe/simulation.hpp"

#include "winepbe/errors.hpp"
#include "winepbe/initial_distribution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace winepbe {

std::string format_number(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Eigen::VectorXd initial_state(const SimulationConfig& cfg, const MassGrid& grid)
{
    SystemState s;
    s.w = build_initial_density(cfg.distribution, grid) / kCellsPerDensityUnit;
    s.N = cfg.initial.N0;
    s.E = cfg.initial.E0;
    s.S = cfg.initial.S0;
    s.O = cfg.initial.O0;
    return pack(s);
}

OdeState matched_ode_state(const SimulationConfig& cfg)
{
    const MassGrid grid = build_grid(cfg.grid.m_min, cfg.grid.m_max, cfg.grid.n_cells);
    const Eigen::VectorXd w = build_initial_density(cfg.distribution, grid) / kCellsPerDensityUnit;
    OdeState s;
    s.X = grid.centers.dot(w) * grid.dm;
    s.N = cfg.initial.N0;
    s.E = cfg.initial.E0;
    s.S = cfg.initial.S0;
    s.O = cfg.initial.O0;
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SimulationResult simulate(const SimulationConfig& cfg, const std::function<void(const std::string&)>& log)
{
    cfg.validate();
    SimulationResult result;
    result.config = cfg;
    IntegrationOptions opts;
    opts.log = log;

    const auto start = Clock::now();
    if (cfg.model == ModelKind::ode) {
        result.trajectory = run_ode(matched_ode_state(cfg), cfg.kinetic, cfg.profile, cfg.t_final, cfg.dt,
                                    cfg.newton, opts);
        result.wall_seconds = seconds_since(start);
        return result;
    }

    result.grid = build_grid(cfg.grid.m_min, cfg.grid.m_max, cfg.grid.n_cells);
    const FermentationSystem system(assemble_operator(result.grid, cfg.division, cfg.n_quad), cfg.kinetic,
                                    cfg.profile);
    result.setup_seconds = seconds_since(start);

    const Eigen::Index C = static_cast<Eigen::Index>(cfg.grid.n_cells);
    opts.monitor = [C](double t, const Eigen::VectorXd& y) -> std::string {
        const auto w = y.head(C);
        const double floor = -1e-9 * w.maxCoeff();
        Eigen::Index at = 0;
        const double lowest = w.minCoeff(&at);
        if (lowest >= floor)
            return {};
        std::ostringstream os;
        os << "positivity violated at t=" << t << ": w[" << at << "]=" << lowest << " below " << floor;
        return os.str();
    };
    result.trajectory = integrate(
        initial_state(cfg, result.grid), cfg.t_final, cfg.dt,
        [&](double t, const Eigen::VectorXd& y) { return system.rhs(t, y); },
        [&](double t, const Eigen::VectorXd& y) { return system.jacobian(t, y); }, cfg.newton, opts);
    result.wall_seconds = seconds_since(start);
    return result;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_row(std::ostream& out, const std::vector<double>& values)
{
    for (std::size_t k = 0; k < values.size(); ++k)
        out << (k ? "," : "") << format_number(values[k]);
    out << '\n';
}

std::string time_label(double t)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

}  // namespace

void write_outputs(const SimulationResult& result, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const SimulationConfig& cfg = result.config;
    const Trajectory& traj = result.trajectory;
    const bool ide = cfg.model == ModelKind::ide;
    const Eigen::Index C = static_cast<Eigen::Index>(cfg.grid.n_cells);

    {
        std::ofstream out = open_output(dir / "trajectory.csv");
        if (ide) {
            out << "t,N,E,S,O,total_cells,log10_total_cells,T,newton_iters\n";
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const Eigen::VectorXd& y = traj.states[k];
                const double cells = total_cells(result.grid, y.head(C));
                write_row(out, {traj.times[k], y[C], y[C + 1], y[C + 2], y[C + 3], cells, std::log10(cells),
                                temperature(cfg.profile, traj.times[k]),
                                static_cast<double>(traj.step_iterations[k])});
            }
        } else {
            out << "t,N,E,S,O\n";
            for (std::size_t k = 0; k < traj.times.size(); ++k) {
                const Eigen::VectorXd& y = traj.states[k];
                write_row(out, {traj.times[k], y[1], y[2], y[3], y[4]});
            }
        }
    }

    if (ide) {
        for (double t : cfg.snapshot_times) {
            if (traj.times.empty() || t > traj.times.back() + 0.5 * cfg.dt)
                continue;
            const Eigen::VectorXd& y = traj.states[nearest_step(traj, t)];
            std::ofstream out = open_output(dir / ("density_t" + time_label(t) + ".csv"));
            out << "m_center,w\n";
            for (Eigen::Index i = 0; i < C; ++i)
                write_row(out, {result.grid.centers[i], y[i] * kCellsPerDensityUnit});
        }
    } else {
        std::ofstream out = open_output(dir / "biomass.csv");
        out << "t,X\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            write_row(out, {traj.times[k], traj.states[k][0]});
    }

    std::vector<int> iterations;
    for (const StepRecord& r : traj.steps)
        iterations.push_back(r.newton_iterations);
    std::sort(iterations.begin(), iterations.end());
    long total_iterations = 0;
    for (int n : iterations)
        total_iterations += n;

    std::ofstream out = open_output(dir / "run_summary.txt");
    out << "model = " << to_string(cfg.model) << '\n';
    out << "status = " << (traj.completed ? "completed" : "failed") << '\n';
    if (!traj.failure.empty())
        out << "failure = " << traj.failure << '\n';
    if (!traj.times.empty()) {
        const Eigen::VectorXd& y = traj.states.back();
        out << "final_t = " << format_number(traj.times.back()) << '\n';
        const Eigen::Index base = ide ? C : 1;
        out << "final_N = " << format_number(y[base]) << '\n';
        out << "final_E = " << format_number(y[base + 1]) << '\n';
        out << "final_S = " << format_number(y[base + 2]) << '\n';
        out << "final_O = " << format_number(y[base + 3]) << '\n';
        if (ide)
            out << "final_total_cells = " << format_number(total_cells(result.grid, y.head(C))) << '\n';
        else
            out << "final_X = " << format_number(y[0]) << '\n';
    }
    out << "n_cells = " << cfg.grid.n_cells << '\n';
    out << "dt = " << format_number(cfg.dt) << '\n';
    out << "t_final = " << format_number(cfg.t_final) << '\n';
    out << "setup_seconds = " << result.setup_seconds << '\n';
    out << "wall_seconds = " << result.wall_seconds << '\n';
    out << "steps = " << traj.steps.size() << '\n';
    out << "halvings = " << traj.halvings << '\n';
    out << "newton_iterations_total = " << total_iterations << '\n';
    if (!iterations.empty()) {
        out << "newton_iterations_max = " << iterations.back() << '\n';
        out << "newton_iterations_median = " << iterations[iterations.size() / 2] << '\n';
    }
    out << "snapshot_times = ";
    for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k)
        out << (k ? "," : "") << format_number(cfg.snapshot_times[k]);
    out << '\n';
}

int run(const SimulationConfig& cfg, const std::function<void(const std::string&)>& log)
{
    const SimulationResult result = simulate(cfg, log);
    write_outputs(result, cfg.output_dir);
    return result.trajectory.completed ? 0 : 2;
}

std::size_t CsvTable::column(const std::string& name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::runtime_error("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read '" + path.string() + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("'" + path.string() + "' is empty");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');)
        table.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');)
            row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            throw std::runtime_error("'" + path.string() + "': ragged row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

double relative_difference(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

namespace {

std::vector<double> recorded_snapshot_times(const std::filesystem::path& summary)
{
    std::ifstream in(summary);
    std::string line;
    const std::string prefix = "snapshot_times = ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) != 0)
            continue;
        std::vector<double> times;
        std::stringstream ss(line.substr(prefix.size()));
        for (std::string cell; std::getline(ss, cell, ',');)
            times.push_back(std::stod(cell));
        return times;
    }
    return {};
}

}  // namespace

ComparisonReport compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b)
{
    const CsvTable a = read_csv(dir_a / "trajectory.csv");
    const CsvTable b = read_csv(dir_b / "trajectory.csv");
    if (a.rows.size() != b.rows.size())
        throw std::runtime_error("time grids differ: " + std::to_string(a.rows.size()) + " vs " +
                                 std::to_string(b.rows.size()) + " rows");
    const std::size_t ta = a.column("t"), tb = b.column("t");
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        const double t = a.rows[k][ta];
        if (std::abs(t - b.rows[k][tb]) > 1e-9 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("time grids differ at row " + std::to_string(k + 1));
    }
    if (a.rows.empty())
        throw std::runtime_error("empty trajectories");

    std::array<std::size_t, 4> ca{}, cb{};
    for (std::size_t s = 0; s < 4; ++s) {
        ca[s] = a.column(ComparisonReport::kStates[s]);
        cb[s] = b.column(ComparisonReport::kStates[s]);
    }
    auto diffs = [&](std::size_t row) {
        std::array<double, 4> d{};
        for (std::size_t s = 0; s < 4; ++s)
            d[s] = relative_difference(a.rows[row][ca[s]], b.rows[row][cb[s]]);
        return d;
    };

    ComparisonReport report;
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        const auto d = diffs(k);
        for (std::size_t s = 0; s < 4; ++s)
            report.max_over_horizon[s] = std::max(report.max_over_horizon[s], d[s]);
    }

    std::vector<double> times = recorded_snapshot_times(dir_a / "run_summary.txt");
    if (times.empty())
        times.push_back(a.rows.back()[ta]);
    for (double t : times) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < a.rows.size(); ++k)
            if (std::abs(a.rows[k][ta] - t) < std::abs(a.rows[best][ta] - t))
                best = k;
        report.times.push_back(a.rows[best][ta]);
        report.at_times.push_back(diffs(best));
    }
    return report;
}

void write_comparison(const ComparisonReport& report, const std::filesystem::path& out_path)
{
    if (out_path.has_parent_path())
        std::filesystem::create_directories(out_path.parent_path());
    std::ofstream out = open_output(out_path);
    out << "time,N,E,S,O\n";
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        out << format_number(report.times[k]);
        for (double d : report.at_times[k])
            out << ',' << format_number(d);
        out << '\n';
    }
    out << "max";
    for (double d : report.max_over_horizon)
        out << ',' << format_number(d);
    out << '\n';
}

}  // namespace winepbe
