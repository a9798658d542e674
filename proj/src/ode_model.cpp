#include "winepbe/ode_model.hpp"

#include "winepbe/errors.hpp"

#include <cmath>
#include <string>

namespace winepbe {

Eigen::VectorXd pack(const OdeState& s)
{
    Eigen::VectorXd y(5);
    y << s.X, s.N, s.E, s.S, s.O;
    return y;
}

OdeState unpack_ode(const Eigen::VectorXd& y, double t)
{
    if (y.size() != 5)
        throw DomainError("unpack_ode: expected 5 entries");
    return {y[0], y[1], y[2], y[3], y[4], t};
}

ReducedOdeModel::ReducedOdeModel(KineticParams kinetic, TemperatureProfile profile)
    : kinetic_(kinetic), profile_(profile)
{
}

namespace {

void check(double t, const Eigen::VectorXd& y)
{
    if (y.size() != 5)
        throw DomainError("reduced model state must have 5 entries");
    for (Eigen::Index k = 0; k < 5; ++k)
        if (!std::isfinite(y[k]))
            throw NumericalError("non-finite reduced-model state entry " + std::to_string(k) + " at t=" +
                                 std::to_string(t));
}

}  // namespace

Eigen::VectorXd ReducedOdeModel::rhs(double t, const Eigen::VectorXd& y) const
{
    check(t, y);
    const double X = y[0], N = y[1], E = y[2], S = y[3], O = y[4];
    const SpecificRates rt = specific_rates(kinetic_, N, E, S, O, temperature(profile_, t));
    const double loss = death_phi(kinetic_, E) + kinetic_.kd;

    Eigen::VectorXd f(5);
    f[0] = (rt.r_eps - loss) * X;
    f[1] = -kinetic_.k1 * rt.r_eps * X;
    f[2] = rt.q_E * X;
    f[3] = -rt.q * X;
    f[4] = -kinetic_.k4 * rt.r * X;
    return f;
}

Eigen::MatrixXd ReducedOdeModel::jacobian(double t, const Eigen::VectorXd& y) const
{
    check(t, y);
    const double X = y[0], N = y[1], E = y[2], S = y[3], O = y[4];
    const SpecificRates rt = specific_rates(kinetic_, N, E, S, O, temperature(profile_, t));
    const double loss = death_phi(kinetic_, E) + kinetic_.kd;
    const double k1 = kinetic_.k1, k4 = kinetic_.k4;

    // columns: X, N, E, S, O
    Eigen::MatrixXd J(5, 5);
    J << rt.r_eps - loss, rt.dr_eps_dN * X, -death_phi_derivative(kinetic_, E) * X, rt.dr_eps_dS * X,
        rt.dr_eps_dO * X,
        -k1 * rt.r_eps, -k1 * rt.dr_eps_dN * X, 0.0, -k1 * rt.dr_eps_dS * X, -k1 * rt.dr_eps_dO * X,
        rt.q_E, 0.0, rt.dqE_dE * X, rt.dqE_dS * X, 0.0,
        -rt.q, -rt.dq_dN * X, -rt.dq_dE * X, -rt.dq_dS * X, -rt.dq_dO * X,
        -k4 * rt.r, -k4 * rt.dr_dN * X, 0.0, -k4 * rt.dr_dS * X, -k4 * rt.dr_dO * X;
    return J;
}

OdeState ode_rhs(const OdeState& state, const KineticParams& kp, const TemperatureProfile& profile)
{
    const ReducedOdeModel model(kp, profile);
    return unpack_ode(model.rhs(state.t, pack(state)), state.t);
}

Trajectory run_ode(const OdeState& y0, const KineticParams& kp, const TemperatureProfile& profile, double t_final,
                   double h, const NewtonConfig& cfg, const IntegrationOptions& opts)
{
    const ReducedOdeModel model(kp, profile);
    return integrate(
        pack(y0), t_final, h, [&](double t, const Eigen::VectorXd& y) { return model.rhs(t, y); },
        [&](double t, const Eigen::VectorXd& y) { return model.jacobian(t, y); }, cfg, opts);
}

}  // namespace winepbe
