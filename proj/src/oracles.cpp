#include "winepbe/oracles.hpp"

#include "winepbe/kinetics.hpp"
#include "winepbe/ode_model.hpp"
#include "winepbe/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace winepbe {

OracleReport make_report(std::string check, double measured, double bound)
{
    return {std::move(check), measured, bound, measured <= bound};
}

std::string format_report(const OracleReport& r)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, " measured=%.6e bound=%.6e pass=%d", r.measured, r.bound, r.pass ? 1 : 0);
    return "check=" + r.check + buf;
}

Eigen::MatrixXd fd_jacobian(const RhsFunction& f, double t, const Eigen::VectorXd& y, double h_fd)
{
    const Eigen::Index n = y.size();
    Eigen::MatrixXd J(n, n);
    Eigen::VectorXd yp = y, ym = y;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double h = h_fd * std::max(1.0, std::abs(y[k]));
        yp[k] = y[k] + h;
        ym[k] = y[k] - h;
        J.col(k) = (f(t, yp) - f(t, ym)) / (yp[k] - ym[k]);
        yp[k] = y[k];
        ym[k] = y[k];
    }
    return J;
}

Eigen::MatrixXd fd_jacobian(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                            const TemperatureProfile& profile, double h_fd)
{
    const FermentationSystem system(op, kp, profile);
    return fd_jacobian([&](double t, const Eigen::VectorXd& y) { return system.rhs(t, y); }, state.t, pack(state),
                       h_fd);
}

double jacobian_mismatch(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& reference)
{
    return ((analytic - reference).array().abs() / analytic.array().abs().max(1.0)).maxCoeff();
}

SystemState random_admissible_state(std::size_t n_cells, double t_final, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemState s;
    s.w.resize(static_cast<Eigen::Index>(n_cells));
    for (Eigen::Index i = 0; i < s.w.size(); ++i)
        s.w[i] = 50.0 * u(rng);
    s.N = 0.6 * u(rng);
    s.E = 120.0 * u(rng);
    s.S = 220.0 * u(rng);
    s.O = 0.02 * u(rng);
    s.t = t_final * u(rng);
    return s;
}

double quadrature_oracle(const std::function<double(double)>& fn, double a, double b, int n)
{
    const double h = (b - a) / n;
    double interior = 0.0;
    for (int k = 1; k < n; ++k)
        interior += fn(a + k * h);
    return h * (0.5 * fn(a) + interior + 0.5 * fn(b));
}

double partition_normalization_error(const DivisionParams& d, double m_min, double m_max, double m_prime, int n)
{
    return std::abs(quadrature_oracle([&](double m) { return partition(d, m, m_prime); }, m_min, m_max, n) - 1.0);
}

double partition_symmetry_deviation(const DivisionParams& d, double m_min, double m_max, int pairs,
                                    std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(m_min, m_max);
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        double m = u(rng), mp = u(rng);
        if (m > mp)
            std::swap(m, mp);
        worst = std::max(worst, std::abs(partition(d, m, mp) - partition(d, mp - m, mp)));
    }
    return worst;
}

double division_moment_residual(const DiscreteOperator& op, const Eigen::VectorXd& w)
{
    const Eigen::VectorXd& c = op.grid.centers;
    const Eigen::VectorXd birth = 2.0 * (op.K * w);
    const Eigen::VectorXd loss = op.gamma_int.cwiseProduct(w);
    const double scale = c.dot(loss);
    return scale == 0.0 ? 0.0 : std::abs(c.dot(birth - loss)) / scale;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> smooth_kernel_pairs(const DiscreteOperator& op)
{
    const Eigen::Index C = op.K.rows();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    for (Eigen::Index j = 0; j < C; ++j) {
        if (op.grid.edges[j] <= op.division.m_t)
            continue;
        for (Eigen::Index i = 0; i + 1 < j; ++i)
            pairs.emplace_back(i, j);
    }
    return pairs;
}

double kernel_refinement_error(const DiscreteOperator& op, int n)
{
    const MassGrid& g = op.grid;
    const DivisionParams& d = op.division;
    const Eigen::Index C = op.K.rows();
    Eigen::MatrixXd reference = Eigen::MatrixXd::Zero(C, C);
    for (const auto& [i, j] : smooth_kernel_pairs(op)) {
        reference(i, j) = quadrature_oracle(
            [&](double mp) {
                const double inner =
                    quadrature_oracle([&](double m) { return partition(d, m, mp); }, g.edges[i], g.edges[i + 1], n);
                return inner * division_rate(d, mp);
            },
            g.edges[j], g.edges[j + 1], n);
    }
    double worst = 0.0;
    for (const auto& [i, j] : smooth_kernel_pairs(op)) {
        const double column_scale = reference.col(j).maxCoeff();
        if (column_scale > 0.0)
            worst = std::max(worst, std::abs(op.K(i, j) - reference(i, j)) / column_scale);
    }
    return worst;
}

double worst_negative_ratio(const Trajectory& traj, std::size_t n_cells)
{
    double worst = 0.0;
    for (const Eigen::VectorXd& y : traj.states) {
        const auto w = y.head(static_cast<Eigen::Index>(n_cells));
        const double top = w.maxCoeff();
        if (top > 0.0)
            worst = std::min(worst, w.minCoeff() / top);
    }
    return worst;
}

std::vector<OracleReport> moment_checks(const DiscreteOperator& op, const Eigen::VectorXd& w, const Trajectory* traj)
{
    const MassGrid& g = op.grid;
    std::vector<OracleReport> out;
    double normalization = 0.0;
    for (double mp : {0.5, 0.7, 0.999})
        normalization = std::max(normalization, partition_normalization_error(op.division, g.m_min, g.m_max, mp));
    out.push_back(make_report("partition_normalization", normalization, 1e-3));
    // Symmetry holds algebraically; the bound allows for rounding in m' - m.
    out.push_back(make_report("partition_symmetry",
                              partition_symmetry_deviation(op.division, g.m_min, g.m_max, 10000, 20240601),
                              1e-12 * op.division.lambda));
    out.push_back(make_report("division_biomass_balance", division_moment_residual(op, w), 1e-2));
    if (traj)
        out.push_back(make_report("trajectory_positivity",
                                  -worst_negative_ratio(*traj, static_cast<std::size_t>(g.n_cells)), 1e-9));
    return out;
}

namespace {

double jacobian_check(const SimulationConfig& cfg, std::size_t n_cells, int states, std::uint64_t seed)
{
    const MassGrid grid = build_grid(cfg.grid.m_min, cfg.grid.m_max, n_cells);
    const FermentationSystem system(assemble_operator(grid, cfg.division, cfg.n_quad), cfg.kinetic, cfg.profile);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < states; ++k) {
        const SystemState s = random_admissible_state(n_cells, cfg.t_final, rng);
        const Eigen::VectorXd y = pack(s);
        const Eigen::MatrixXd fd =
            fd_jacobian([&](double t, const Eigen::VectorXd& v) { return system.rhs(t, v); }, s.t, y);
        worst = std::max(worst, jacobian_mismatch(system.jacobian(s.t, y), fd));
    }
    return worst;
}

}  // namespace

std::vector<OracleReport> run_verification(const SimulationConfig& cfg,
                                           const std::function<void(const std::string&)>& log)
{
    auto note = [&](const std::string& s) {
        if (log)
            log(s);
    };
    std::vector<OracleReport> out;

    out.push_back(make_report("lambda_beta400", std::abs(compute_lambda(400.0) - 5.6419), 1e-3));
    const double m_t = normalize_mass(normalize_mass(4.55e-13, 0.0, 12e-13, 0.0, 1e-9), 0.0, 1e-9, 0.001, 0.999);
    const double m_d = normalize_mass(normalize_mass(10.25e-13, 0.0, 12e-13, 0.0, 1e-9), 0.0, 1e-9, 0.001, 0.999);
    out.push_back(make_report("mass_scaling", std::max(std::abs(m_t - 0.3784), std::abs(m_d - 0.8525)), 1e-4));

    out.push_back(make_report("quadrature_linear",
                              std::abs(quadrature_oracle([](double x) { return x; }, 0.0, 1.0, 30) - 0.5), 1e-15));
    out.push_back(make_report(
        "quadrature_quadratic",
        std::abs(quadrature_oracle([](double x) { return x * x; }, 0.0, 1.0, 30) - (1.0 / 3.0 + 1.0 / 5400.0)),
        1e-14));

    note("assembling operator");
    const MassGrid grid = build_grid(cfg.grid.m_min, cfg.grid.m_max, cfg.grid.n_cells);
    const DiscreteOperator op = assemble_operator(grid, cfg.division, cfg.n_quad);
    note("kernel refinement against 4x subintervals");
    out.push_back(make_report("kernel_refinement", kernel_refinement_error(op, 4 * cfg.n_quad), 1e-4));

    note("jacobian against finite differences");
    out.push_back(make_report("jacobian_fd_C30", jacobian_check(cfg, 30, 20, 11), 1e-5));
    out.push_back(make_report("jacobian_fd_C" + std::to_string(cfg.grid.n_cells),
                              jacobian_check(cfg, cfg.grid.n_cells, 20, 12), 1e-5));
    {
        const ReducedOdeModel model(cfg.kinetic, cfg.profile);
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            Eigen::VectorXd y(5);
            y << 40.0 * u(rng), 0.6 * u(rng), 120.0 * u(rng), 220.0 * u(rng), 0.02 * u(rng);
            const double t = cfg.t_final * u(rng);
            const Eigen::MatrixXd fd =
                fd_jacobian([&](double tt, const Eigen::VectorXd& v) { return model.rhs(tt, v); }, t, y);
            worst = std::max(worst, jacobian_mismatch(model.jacobian(t, y), fd));
        }
        out.push_back(make_report("jacobian_fd_reduced", worst, 1e-5));
    }

    note("integrating the configured population balance");
    SimulationConfig run_cfg = cfg;
    run_cfg.model = ModelKind::ide;
    const SimulationResult result = simulate(run_cfg);
    out.push_back(make_report("run_completed", result.trajectory.completed ? 0.0 : 1.0, 0.0));
    double worst_residual = 0.0;
    for (const StepRecord& r : result.trajectory.steps)
        worst_residual = std::max(worst_residual, r.converged ? r.residual_norm : INFINITY);
    out.push_back(make_report("newton_residual", worst_residual, cfg.newton.tolerance));

    const Eigen::VectorXd w0 = result.trajectory.states.front().head(static_cast<Eigen::Index>(cfg.grid.n_cells));
    for (OracleReport& r : moment_checks(op, w0, &result.trajectory))
        out.push_back(std::move(r));
    return out;
}

}  // namespace winepbe
