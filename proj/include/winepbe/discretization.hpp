#pragma once

#include "winepbe/kinetics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace winepbe {

/// Cell densities are carried in this many cells/ml per unit scaled mass, so
/// that sum_i m_i w_i dm is a biomass concentration in g/l
/// (1e6 cells/ml * 1e-9 g = 1 g/l).
inline constexpr double kCellsPerDensityUnit = 1.0e6;

struct MassGrid {
    double m_min = 0.0;
    double m_max = 0.0;
    std::size_t n_cells = 0;
    double dm = 0.0;
    Eigen::VectorXd edges;    ///< n_cells + 1 ascending
    Eigen::VectorXd centers;  ///< n_cells
};

MassGrid build_grid(double m_min, double m_max, std::size_t n_cells);

/// Full unknown vector at one time. `w` is in units of kCellsPerDensityUnit.
struct SystemState {
    Eigen::VectorXd w;
    double N = 0.0;
    double E = 0.0;
    double S = 0.0;
    double O = 0.0;
    double t = 0.0;
};

/// Packed layout: (w_0 .. w_{C-1}, N, E, S, O).
struct StateLayout {
    std::size_t n_cells = 0;
    std::size_t N() const { return n_cells; }
    std::size_t E() const { return n_cells + 1; }
    std::size_t S() const { return n_cells + 2; }
    std::size_t O() const { return n_cells + 3; }
    std::size_t size() const { return n_cells + 4; }
};

Eigen::VectorXd pack(const SystemState& s);
SystemState unpack(const Eigen::VectorXd& y, double t);

/// Precomputed birth kernel and division-loss integrals over the mass cells.
/// Immutable after assembly.
struct DiscreteOperator {
    MassGrid grid;
    DivisionParams division;
    Eigen::MatrixXd K;          ///< K(i,j) = int_{Omega_i} int_{Omega_j} p(m,m') Gamma(m') dm' dm
    Eigen::VectorXd gamma_int;  ///< int_{Omega_i} Gamma(m) dm
    int n_quad = 0;
};

/// Composite trapezoidal rule with n subintervals on [a, b].
double composite_trapezoid(const std::function<double(double)>& f, double a, double b, int n);

DiscreteOperator assemble_operator(const MassGrid& grid, const DivisionParams& division, int n_quad = 30);

/**
 * Semidiscrete fermentation system y' = f(t, y): first-order upwind
 * growth flux with closed boundaries, division birth/loss through the
 * assembled operator, ethanol and baseline death, and the four substrate
 * balances summed over the interior cells 1..C-2.
 */
class FermentationSystem {
public:
    FermentationSystem(DiscreteOperator op, KineticParams kinetic, TemperatureProfile profile);

    const DiscreteOperator& op() const { return op_; }
    const KineticParams& kinetic() const { return kinetic_; }
    const TemperatureProfile& profile() const { return profile_; }
    StateLayout layout() const { return {op_.grid.n_cells}; }

    Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const;

    /// Interior first moment sum_{i=1}^{C-2} centers_i w_i dm.
    double interior_biomass(const Eigen::VectorXd& y) const;

private:
    void check_input(double t, const Eigen::VectorXd& y) const;

    DiscreteOperator op_;
    KineticParams kinetic_;
    TemperatureProfile profile_;
    Eigen::VectorXd moment_weights_;  ///< centers_i dm on interior cells, 0 on the two boundary cells
};

SystemState rhs(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                const TemperatureProfile& profile);
Eigen::MatrixXd jacobian(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                         const TemperatureProfile& profile);

/// Total cell count per ml, sum_i w_i dm, converted back to cells/ml.
double total_cells(const MassGrid& grid, const Eigen::VectorXd& w);

}  // namespace winepbe
