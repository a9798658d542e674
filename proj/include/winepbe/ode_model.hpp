#pragma once

#include "winepbe/integrator.hpp"
#include "winepbe/kinetics.hpp"

#include <Eigen/Dense>

namespace winepbe {

/**
 * Reduced model without mass structure: the first moment of the population
 * balance. Division conserves biomass, so only growth and death act on X.
 *
 *   X' = (r_eps - Phi(E) - kd) X      N' = -k1 r_eps X      O' = -k4 r X
 *   S' = -(k2 q_E + k3 r_eps) X       E' = q_E X
 *
 * with the specific (per unit mass) rates. X is in g/l, i.e. the same units
 * as sum_i centers_i w_i dm of the structured model.
 */
struct OdeState {
    double X = 0.0;
    double N = 0.0;
    double E = 0.0;
    double S = 0.0;
    double O = 0.0;
    double t = 0.0;
};

/// Packed as (X, N, E, S, O).
Eigen::VectorXd pack(const OdeState& s);
OdeState unpack_ode(const Eigen::VectorXd& y, double t);

class ReducedOdeModel {
public:
    ReducedOdeModel(KineticParams kinetic, TemperatureProfile profile);

    Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const;
    Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const;

    const KineticParams& kinetic() const { return kinetic_; }
    const TemperatureProfile& profile() const { return profile_; }

private:
    KineticParams kinetic_;
    TemperatureProfile profile_;
};

OdeState ode_rhs(const OdeState& state, const KineticParams& kp, const TemperatureProfile& profile);

Trajectory run_ode(const OdeState& y0, const KineticParams& kp, const TemperatureProfile& profile, double t_final,
                   double h, const NewtonConfig& cfg, const IntegrationOptions& opts = {});

}  // namespace winepbe
