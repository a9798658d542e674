#include "winepbe/discretization.hpp"

#include "winepbe/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace winepbe {

MassGrid build_grid(double m_min, double m_max, std::size_t n_cells)
{
    if (!(m_max > m_min))
        throw ConfigError("grid: m_max must exceed m_min");
    if (n_cells < 3)
        throw ConfigError("grid.n_cells must be >= 3");

    MassGrid g;
    g.m_min = m_min;
    g.m_max = m_max;
    g.n_cells = n_cells;
    g.dm = (m_max - m_min) / static_cast<double>(n_cells);
    g.edges.resize(static_cast<Eigen::Index>(n_cells + 1));
    g.centers.resize(static_cast<Eigen::Index>(n_cells));
    for (std::size_t k = 0; k <= n_cells; ++k)
        g.edges[static_cast<Eigen::Index>(k)] = m_min + static_cast<double>(k) * g.dm;
    g.edges[static_cast<Eigen::Index>(n_cells)] = m_max;
    for (Eigen::Index i = 0; i < g.centers.size(); ++i)
        g.centers[i] = 0.5 * (g.edges[i] + g.edges[i + 1]);
    return g;
}

Eigen::VectorXd pack(const SystemState& s)
{
    const StateLayout L{static_cast<std::size_t>(s.w.size())};
    Eigen::VectorXd y(static_cast<Eigen::Index>(L.size()));
    y.head(s.w.size()) = s.w;
    y[static_cast<Eigen::Index>(L.N())] = s.N;
    y[static_cast<Eigen::Index>(L.E())] = s.E;
    y[static_cast<Eigen::Index>(L.S())] = s.S;
    y[static_cast<Eigen::Index>(L.O())] = s.O;
    return y;
}

SystemState unpack(const Eigen::VectorXd& y, double t)
{
    if (y.size() < 4)
        throw DomainError("unpack: state vector too short");
    const Eigen::Index C = y.size() - 4;
    SystemState s;
    s.w = y.head(C);
    s.N = y[C];
    s.E = y[C + 1];
    s.S = y[C + 2];
    s.O = y[C + 3];
    s.t = t;
    return s;
}

double composite_trapezoid(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double sum = 0.5 * (f(a) + f(b));
    for (int k = 1; k < n; ++k)
        sum += f(a + k * h);
    return sum * h;
}

DiscreteOperator assemble_operator(const MassGrid& grid, const DivisionParams& division, int n_quad)
{
    if (n_quad < 2)
        throw ConfigError("n_quad must be >= 2");

    const auto C = static_cast<Eigen::Index>(grid.n_cells);
    DiscreteOperator op;
    op.grid = grid;
    op.division = division;
    op.n_quad = n_quad;
    op.K = Eigen::MatrixXd::Zero(C, C);
    op.gamma_int.resize(C);

    // Quadrature nodes of every cell, endpoints taken from the shared edge array.
    const int n_nodes = n_quad + 1;
    const double h = grid.dm / n_quad;
    Eigen::MatrixXd nodes(C, n_nodes);
    Eigen::MatrixXd gamma_at(C, n_nodes);
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(n_nodes, h);
    weights[0] = weights[n_quad] = 0.5 * h;
    for (Eigen::Index i = 0; i < C; ++i) {
        for (int a = 0; a < n_nodes; ++a)
            nodes(i, a) = grid.edges[i] + a * h;
        nodes(i, n_quad) = grid.edges[i + 1];
        for (int a = 0; a < n_nodes; ++a)
            gamma_at(i, a) = division_rate(division, nodes(i, a));
        op.gamma_int[i] = weights.dot(gamma_at.row(i).transpose());
    }

    for (Eigen::Index j = 0; j < C; ++j) {
        if (gamma_at.row(j).maxCoeff() == 0.0)
            continue;  // Gamma vanishes on Omega_j: whole column is exactly zero
        // p(m, m') = 0 for m >= m', so cells above Omega_j receive nothing.
        for (Eigen::Index i = 0; i <= j; ++i) {
            double sum = 0.0;
            for (int a = 0; a < n_nodes; ++a) {
                const double m = nodes(i, a);
                double inner = 0.0;
                for (int b = 0; b < n_nodes; ++b) {
                    const double g = gamma_at(j, b);
                    if (g != 0.0)
                        inner += weights[b] * partition(division, m, nodes(j, b)) * g;
                }
                sum += weights[a] * inner;
            }
            op.K(i, j) = sum;
        }
    }
    return op;
}

FermentationSystem::FermentationSystem(DiscreteOperator op, KineticParams kinetic, TemperatureProfile profile)
    : op_(std::move(op)), kinetic_(kinetic), profile_(profile)
{
    const auto C = static_cast<Eigen::Index>(op_.grid.n_cells);
    if (C < 3)
        throw ConfigError("FermentationSystem needs at least 3 mass cells");
    moment_weights_ = op_.grid.centers * op_.grid.dm;
    moment_weights_[0] = 0.0;
    moment_weights_[C - 1] = 0.0;
}

void FermentationSystem::check_input(double t, const Eigen::VectorXd& y) const
{
    const StateLayout L = layout();
    if (static_cast<std::size_t>(y.size()) != L.size()) {
        std::ostringstream os;
        os << "state has " << y.size() << " entries, expected " << L.size();
        throw DomainError(os.str());
    }
    if (!std::isfinite(t))
        throw NumericalError("non-finite time");
    for (Eigen::Index k = 0; k < y.size(); ++k) {
        if (!std::isfinite(y[k])) {
            std::ostringstream os;
            os << "non-finite state entry " << k << " (" << y[k] << ") at t=" << t;
            if (static_cast<std::size_t>(k) < L.n_cells)
                os << ", mass cell " << k;
            else
                os << ", concentration " << "NESO"[static_cast<std::size_t>(k) - L.n_cells];
            throw NumericalError(os.str());
        }
    }
}

double FermentationSystem::interior_biomass(const Eigen::VectorXd& y) const
{
    return moment_weights_.dot(y.head(moment_weights_.size()));
}

Eigen::VectorXd FermentationSystem::rhs(double t, const Eigen::VectorXd& y) const
{
    check_input(t, y);
    const StateLayout L = layout();
    const auto C = static_cast<Eigen::Index>(L.n_cells);
    const MassGrid& g = op_.grid;
    const auto w = y.head(C);
    const double N = y[C], E = y[C + 1], S = y[C + 2], O = y[C + 3];

    const double T = temperature(profile_, t);
    const SpecificRates rates = specific_rates(kinetic_, N, E, S, O, T);
    const double loss = death_phi(kinetic_, E) + kinetic_.kd;

    Eigen::VectorXd f(y.size());
    Eigen::VectorXd birth = 2.0 * (op_.K * w);
    for (Eigen::Index i = 0; i < C; ++i) {
        const double inflow = i > 0 ? rates.r_eps * g.edges[i] * w[i - 1] : 0.0;
        const double outflow = i < C - 1 ? rates.r_eps * g.edges[i + 1] * w[i] : 0.0;
        f[i] = (inflow - outflow + birth[i] - op_.gamma_int[i] * w[i]) / g.dm - loss * w[i];
    }

    const double X = interior_biomass(y);
    f[C] = -kinetic_.k1 * rates.r_eps * X;
    f[C + 1] = rates.q_E * X;
    f[C + 2] = -rates.q * X;
    f[C + 3] = -kinetic_.k4 * rates.r * X;
    return f;
}

Eigen::MatrixXd FermentationSystem::jacobian(double t, const Eigen::VectorXd& y) const
{
    check_input(t, y);
    const StateLayout L = layout();
    const auto C = static_cast<Eigen::Index>(L.n_cells);
    const MassGrid& g = op_.grid;
    const auto w = y.head(C);
    const double N = y[C], E = y[C + 1], S = y[C + 2], O = y[C + 3];

    const double T = temperature(profile_, t);
    const SpecificRates rt = specific_rates(kinetic_, N, E, S, O, T);
    const double loss = death_phi(kinetic_, E) + kinetic_.kd;
    const double dloss_dE = death_phi_derivative(kinetic_, E);

    const Eigen::Index n = y.size();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);

    // Cell block: exact derivative of rhs() above, including the
    // off-diagonal birth terms.
    J.topLeftCorner(C, C) = (2.0 / g.dm) * op_.K;
    for (Eigen::Index i = 0; i < C; ++i) {
        const double out_velocity = i < C - 1 ? rt.r_eps * g.edges[i + 1] : 0.0;
        J(i, i) += (-out_velocity - op_.gamma_int[i]) / g.dm - loss;
        if (i > 0)
            J(i, i - 1) += rt.r_eps * g.edges[i] / g.dm;

        // d(flux balance)/d(r_eps_specific)
        const double in_mass = i > 0 ? g.edges[i] * w[i - 1] : 0.0;
        const double out_mass = i < C - 1 ? g.edges[i + 1] * w[i] : 0.0;
        const double dflux = (in_mass - out_mass) / g.dm;
        J(i, C) = dflux * rt.dr_eps_dN;
        J(i, C + 1) = -dloss_dE * w[i];
        J(i, C + 2) = dflux * rt.dr_eps_dS;
        J(i, C + 3) = dflux * rt.dr_eps_dO;
    }

    const double X = interior_biomass(y);
    const auto& mw = moment_weights_;
    const Eigen::Index iN = C, iE = C + 1, iS = C + 2, iO = C + 3;

    J.row(iN).head(C) = (-kinetic_.k1 * rt.r_eps) * mw.transpose();
    J(iN, iN) = -kinetic_.k1 * rt.dr_eps_dN * X;
    J(iN, iS) = -kinetic_.k1 * rt.dr_eps_dS * X;
    J(iN, iO) = -kinetic_.k1 * rt.dr_eps_dO * X;

    J.row(iE).head(C) = rt.q_E * mw.transpose();
    J(iE, iE) = rt.dqE_dE * X;
    J(iE, iS) = rt.dqE_dS * X;

    J.row(iS).head(C) = -rt.q * mw.transpose();
    J(iS, iN) = -rt.dq_dN * X;
    J(iS, iE) = -rt.dq_dE * X;
    J(iS, iS) = -rt.dq_dS * X;
    J(iS, iO) = -rt.dq_dO * X;

    J.row(iO).head(C) = (-kinetic_.k4 * rt.r) * mw.transpose();
    J(iO, iN) = -kinetic_.k4 * rt.dr_dN * X;
    J(iO, iS) = -kinetic_.k4 * rt.dr_dS * X;
    J(iO, iO) = -kinetic_.k4 * rt.dr_dO * X;
    return J;
}

SystemState rhs(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                const TemperatureProfile& profile)
{
    const FermentationSystem sys(op, kp, profile);
    return unpack(sys.rhs(state.t, pack(state)), state.t);
}

Eigen::MatrixXd jacobian(const SystemState& state, const DiscreteOperator& op, const KineticParams& kp,
                         const TemperatureProfile& profile)
{
    const FermentationSystem sys(op, kp, profile);
    return sys.jacobian(state.t, pack(state));
}

double total_cells(const MassGrid& grid, const Eigen::VectorXd& w)
{
    return w.sum() * grid.dm * kCellsPerDensityUnit;
}

}  // namespace winepbe
