#pragma once

#include "winepbe/config.hpp"
#include "winepbe/discretization.hpp"
#include "winepbe/integrator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace winepbe {

/// pass is measured <= bound.
struct OracleReport {
    std::string check;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

OracleReport make_report(std::string check, double measured, double bound);

/// `check=<name> measured=<v> bound=<b> pass=<0|1>`
std::string format_report(const OracleReport& report);

/// Central differences, column k with step h_fd * max(1, |y_k|).
Eigen::MatrixXd fd_jacobian(const RhsFunction& f, double t, const Eigen::VectorXd& y, double h_fd = 1e-6);
Eigen::MatrixXd fd_jacobian(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                            const TemperatureProfile& profile, double h_fd = 1e-6);

/// max_ij |A_ij - B_ij| / max(1, |A_ij|)
double jacobian_mismatch(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& reference);

/// Random state inside the admissible range: w in [0, 50) units, N in [0, 0.6),
/// E in [0, 120), S in [0, 220), O in [0, 0.02), t in [0, t_final).
SystemState random_admissible_state(std::size_t n_cells, double t_final, std::mt19937_64& rng);

/// Composite trapezoid with n subintervals, written independently of the
/// production quadrature.
double quadrature_oracle(const std::function<double(double)>& fn, double a, double b, int n);

/// |int p(m, m') dm - 1| over [m_min, m_max] with n subintervals.
double partition_normalization_error(const DivisionParams& d, double m_min, double m_max, double m_prime, int n = 30);

/// max |p(m, m') - p(m' - m, m')| over random pairs m < m' in [m_min, m_max].
double partition_symmetry_deviation(const DivisionParams& d, double m_min, double m_max, int pairs,
                                    std::uint64_t seed);

/// |sum_i c_i (2 sum_j K_ij w_j - g_i w_i)| / sum_i c_i g_i w_i
double division_moment_residual(const DiscreteOperator& op, const Eigen::VectorXd& w);

/// Pairs (i, j) with i < j - 1 whose column lies fully above m_t: p * Gamma is
/// smooth on the closed cell pair (no m = m' line, no jump of Gamma).
std::vector<std::pair<Eigen::Index, Eigen::Index>> smooth_kernel_pairs(const DiscreteOperator& op);

/// Largest gap between op.K and an independent nested-trapezoid recomputation
/// with `n` subintervals per dimension over smooth_kernel_pairs, relative to
/// the largest recomputed entry of the same column.
double kernel_refinement_error(const DiscreteOperator& op, int n);

/// min over states and cells of w / max w, the worst value over the trajectory.
double worst_negative_ratio(const Trajectory& traj, std::size_t n_cells);

/// Partition normalization, symmetry and division biomass balance for `w`,
/// plus positivity when a trajectory is given.
std::vector<OracleReport> moment_checks(const DiscreteOperator& op, const Eigen::VectorXd& w,
                                        const Trajectory* traj = nullptr);

/// The full suite run by the `verify` command. `log` receives progress lines.
std::vector<OracleReport> run_verification(const SimulationConfig& cfg,
                                           const std::function<void(const std::string&)>& log = {});

}  // namespace winepbe
