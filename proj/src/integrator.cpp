#include "winepbe/integrator.hpp"

#include "winepbe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace winepbe {

void NewtonConfig::validate() const
{
    if (!(tolerance > 0.0))
        throw ConfigError("newton.tolerance must be > 0");
    if (max_iterations < 1)
        throw ConfigError("newton.max_iterations must be >= 1");
}

StepResult trapezoid_step(const Eigen::VectorXd& y_n, double t_n, double h, const RhsFunction& f,
                          const JacobianFunction& J, const NewtonConfig& cfg, const Eigen::VectorXd* f_n)
{
    if (!(h > 0.0))
        throw DomainError("trapezoid_step: h must be > 0");

    const double t_next = t_n + h;
    StepResult out;
    out.record.t = t_next;
    out.y = y_n;

    try {
        const Eigen::VectorXd f_old = f_n ? *f_n : f(t_n, y_n);
        const Eigen::VectorXd base = y_n + 0.5 * h * f_old;
        const auto n = y_n.size();

        Eigen::VectorXd g = out.y - base - 0.5 * h * f(t_next, out.y);
        for (int k = 1; k <= cfg.max_iterations; ++k) {
            const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - 0.5 * h * J(t_next, out.y);
            const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
            if (!(lu.rcond() > std::numeric_limits<double>::epsilon() * 1e-3)) {
                out.failure = "singular Newton iteration matrix";
                out.record.newton_iterations = k;
                out.record.residual_norm = g.lpNorm<Eigen::Infinity>();
                return out;
            }
            const Eigen::VectorXd delta = lu.solve(-g);
            out.y += delta;
            g = out.y - base - 0.5 * h * f(t_next, out.y);

            out.record.newton_iterations = k;
            out.record.residual_norm = g.lpNorm<Eigen::Infinity>();
            if (!std::isfinite(out.record.residual_norm)) {
                out.failure = "non-finite Newton residual";
                return out;
            }
            if (out.record.residual_norm <= cfg.tolerance) {
                out.record.converged = true;
                return out;
            }
        }
        std::ostringstream os;
        os << "Newton did not converge in " << cfg.max_iterations << " iterations (residual "
           << out.record.residual_norm << ")";
        out.failure = os.str();
    } catch (const NumericalError& e) {
        out.failure = e.what();
        out.record.residual_norm = std::numeric_limits<double>::infinity();
    }
    return out;
}

double suggest_dt(const MassGrid& grid, const KineticParams& kp, const TemperatureProfile& profile,
                  const SystemState& bound_state, double cfl, double cap)
{
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw DomainError("suggest_dt: cfl must lie in (0, 1]");
    if (cap <= 0.0)
        cap = profile.t_final / 100.0;

    double v_max = 0.0;
    for (double T : {profile.T_low, profile.T_high}) {
        // r_eps is proportional to m, so the largest edge velocity sits at m_max.
        const double v = growth_rate_eps(kp, grid.edges[grid.edges.size() - 1], bound_state.N, bound_state.S,
                                         bound_state.O, T);
        v_max = std::max(v_max, v);
    }
    if (v_max <= 0.0)
        return cap;
    return cfl * grid.dm / v_max;
}

std::size_t step_count(double t_final, double h)
{
    if (!(h > 0.0))
        throw ConfigError("dt must be > 0");
    if (t_final < 0.0)
        throw ConfigError("t_final must be >= 0");
    const double ratio = t_final / h;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("dt must divide t_final");
    return static_cast<std::size_t>(n);
}

Trajectory integrate(const Eigen::VectorXd& y0, double t_final, double h, const RhsFunction& f,
                     const JacobianFunction& J, const NewtonConfig& cfg, const IntegrationOptions& opts)
{
    const std::size_t n_steps = step_count(t_final, h);
    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(y0);
    traj.step_iterations.push_back(0);
    if (opts.observer)
        opts.observer(0, 0.0, y0);

    Eigen::VectorXd y = y0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t0 = static_cast<double>(k) * h;
        const double t1 = k + 1 == n_steps ? t_final : static_cast<double>(k + 1) * h;

        StepResult res = trapezoid_step(y, t0, t1 - t0, f, J, cfg);
        int iterations = res.record.newton_iterations;
        if (res.failure.empty()) {
            traj.steps.push_back(res.record);
        } else {
            bool recovered = false;
            for (int level = 1; level <= opts.max_halvings && !recovered; ++level) {
                const int parts = 1 << level;
                if (opts.log) {
                    std::ostringstream os;
                    os << "step at t=" << t0 << " failed (" << res.failure << "); retrying with " << parts
                       << " substeps";
                    opts.log(os.str());
                }
                std::vector<StepRecord> sub_records;
                Eigen::VectorXd ys = y;
                bool ok = true;
                for (int s = 0; s < parts; ++s) {
                    const double ta = t0 + (t1 - t0) * s / parts;
                    const double tb = s + 1 == parts ? t1 : t0 + (t1 - t0) * (s + 1) / parts;
                    res = trapezoid_step(ys, ta, tb - ta, f, J, cfg);
                    if (!res.failure.empty()) {
                        ok = false;
                        break;
                    }
                    ys = res.y;
                    sub_records.push_back(res.record);
                }
                if (ok) {
                    recovered = true;
                    ++traj.halvings;
                    res.y = ys;
                    traj.steps.insert(traj.steps.end(), sub_records.begin(), sub_records.end());
                    iterations = 0;
                    for (const StepRecord& r : sub_records)
                        iterations += r.newton_iterations;
                }
            }
            if (!recovered) {
                std::ostringstream os;
                os << "step " << k << " at t=" << t0 << " failed: " << res.failure;
                traj.failure = os.str();
                if (opts.log)
                    opts.log(traj.failure);
                return traj;
            }
        }
        y = res.y;
        traj.times.push_back(t1);
        traj.states.push_back(y);
        traj.step_iterations.push_back(iterations);
        if (opts.observer)
            opts.observer(k + 1, t1, y);
        if (opts.monitor) {
            std::string problem = opts.monitor(t1, y);
            if (!problem.empty()) {
                traj.failure = std::move(problem);
                if (opts.log)
                    opts.log(traj.failure);
                return traj;
            }
        }
    }
    traj.completed = true;
    return traj;
}

std::size_t nearest_step(const Trajectory& traj, double t)
{
    if (traj.times.empty())
        throw DomainError("nearest_step: empty trajectory");
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    if (it == traj.times.begin())
        return 0;
    if (it == traj.times.end())
        return traj.times.size() - 1;
    const auto hi = static_cast<std::size_t>(it - traj.times.begin());
    return (t - traj.times[hi - 1] <= traj.times[hi] - t) ? hi - 1 : hi;
}

}  // namespace winepbe
