#pragma once

#include "winepbe/discretization.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace winepbe {

struct NewtonConfig {
    double tolerance = 1e-10;  ///< bound on the max-norm of the trapezoid residual
    int max_iterations = 100;

    void validate() const;
};

struct StepRecord {
    double t = 0.0;  ///< time at the end of the step
    int newton_iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

using RhsFunction = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using JacobianFunction = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;

struct StepResult {
    Eigen::VectorXd y;
    StepRecord record;
    std::string failure;  ///< empty on success
};

/**
 * One implicit trapezoidal step from (t_n, y_n) with step h. Solves
 *   g(y) = y - y_n - h/2 (f(t_n + h, y) + f(t_n, y_n)) = 0
 * by full Newton iteration on (I - h/2 J(y_k)) delta = -g(y_k), starting at
 * y_n, until ||g||_inf <= tolerance. At least one update is always taken.
 * `f_n` may carry a precomputed f(t_n, y_n).
 */
StepResult trapezoid_step(const Eigen::VectorXd& y_n, double t_n, double h, const RhsFunction& f,
                          const JacobianFunction& J, const NewtonConfig& cfg,
                          const Eigen::VectorXd* f_n = nullptr);

/// Advisory step from the explicit CFL bound: cfl * dm / (fastest edge velocity)
/// over the given state and both temperature plateaus; `cap` when nothing moves.
double suggest_dt(const MassGrid& grid, const KineticParams& kp, const TemperatureProfile& profile,
                  const SystemState& bound_state, double cfl, double cap = -1.0);

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<StepRecord> steps;  ///< one per accepted (sub)step
    std::vector<int> step_iterations;  ///< Newton iterations per grid step (substeps summed); [0] = 0
    int halvings = 0;               ///< number of grid steps that needed substepping
    bool completed = false;
    std::string failure;
};

struct IntegrationOptions {
    int max_halvings = 4;  ///< a failed step is retried with 2, 4, ... 2^max_halvings substeps
    /// Invoked after every accepted grid step with (step index, t, y).
    std::function<void(std::size_t, double, const Eigen::VectorXd&)> observer;
    std::function<void(const std::string&)> log;
    /// Checked after every accepted grid step; a nonempty message aborts the
    /// march with that failure reason.
    std::function<std::string(double, const Eigen::VectorXd&)> monitor;
};

/// Number of fixed steps of size h covering [0, t_final]; throws ConfigError
/// when h does not divide t_final to rounding.
std::size_t step_count(double t_final, double h);

/// Fixed-step march over [0, t_final]. On an unrecoverable step failure the
/// partial trajectory is returned with completed == false.
Trajectory integrate(const Eigen::VectorXd& y0, double t_final, double h, const RhsFunction& f,
                     const JacobianFunction& J, const NewtonConfig& cfg, const IntegrationOptions& opts = {});

/// Index of the stored step nearest to time t.
std::size_t nearest_step(const Trajectory& traj, double t);

}  // namespace winepbe
