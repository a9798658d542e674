#include "winepbe/discretization.hpp"
#include "winepbe/errors.hpp"
#include "winepbe/integrator.hpp"

#include <catch_amalgamated.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace winepbe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }
Eigen::MatrixXd scalar_m(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST_CASE("Newton configuration")
{
    CHECK_NOTHROW(NewtonConfig{}.validate());
    CHECK(NewtonConfig{}.tolerance == 1e-10);
    CHECK(NewtonConfig{}.max_iterations == 100);
    CHECK_THROWS_AS((NewtonConfig{0.0, 10}).validate(), ConfigError);
    CHECK_THROWS_AS((NewtonConfig{1e-10, 0}).validate(), ConfigError);
}

TEST_CASE("zero right-hand side is a fixed point")
{
    const Eigen::VectorXd y0 = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
    const StepResult r = trapezoid_step(
        y0, 0.0, 0.1, [](double, const Eigen::VectorXd& y) { return Eigen::VectorXd::Zero(y.size()); },
        [](double, const Eigen::VectorXd& y) { return Eigen::MatrixXd::Zero(y.size(), y.size()); }, NewtonConfig{});
    REQUIRE(r.failure.empty());
    CHECK(r.y == y0);
    CHECK(r.record.newton_iterations == 1);
    CHECK(r.record.converged);
}

TEST_CASE("linear scalar problem: closed-form update in one iteration")
{
    for (double a : {-3.0, -100.0, 0.5}) {
        const double h = 0.05;
        const StepResult r = trapezoid_step(
            scalar(2.0), 0.0, h, [a](double, const Eigen::VectorXd& y) { return (a * y).eval(); },
            [a](double, const Eigen::VectorXd&) { return scalar_m(a); }, NewtonConfig{});
        REQUIRE(r.failure.empty());
        CHECK_THAT(r.y[0], WithinRel(2.0 * (1 + a * h / 2) / (1 - a * h / 2), 1e-14));
        CHECK(r.record.newton_iterations == 1);
        CHECK(r.record.residual_norm <= 1e-10);
    }
}

TEST_CASE("nonlinear scalar step matches a bisection solve")
{
    const double h = 0.1;
    auto f = [](double, const Eigen::VectorXd& y) { return scalar(-y[0] * y[0]); };
    auto J = [](double, const Eigen::VectorXd& y) { return scalar_m(-2.0 * y[0]); };
    const StepResult r = trapezoid_step(scalar(1.0), 0.0, h, f, J, NewtonConfig{});
    REQUIRE(r.failure.empty());

    // g(y) = y - 1 - h/2 (-y^2 - 1), increasing on [0, 1]
    auto g = [h](double y) { return y - 1.0 - 0.5 * h * (-y * y - 1.0); };
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    CHECK_THAT(r.y[0], WithinAbs(0.5 * (lo + hi), 1e-12));
    CHECK(r.record.newton_iterations >= 2);
}

TEST_CASE("Newton converges quadratically")
{
    // residual history through a sequence of capped solves
    auto f = [](double, const Eigen::VectorXd& y) { return scalar(-5.0 * y[0] * y[0] * y[0]); };
    auto J = [](double, const Eigen::VectorXd& y) { return scalar_m(-15.0 * y[0] * y[0]); };
    std::vector<double> residuals;
    for (int cap = 1; cap <= 4; ++cap) {
        const StepResult r = trapezoid_step(scalar(1.0), 0.0, 0.2, f, J, NewtonConfig{1e-300, cap});
        residuals.push_back(r.record.residual_norm);
    }
    // e_{k+1} <= C e_k^2 once in the asymptotic range
    CHECK(residuals[2] < 10.0 * residuals[1] * residuals[1]);
    CHECK(residuals[3] <= std::max(1e-15, 10.0 * residuals[2] * residuals[2]));
}

TEST_CASE("step failures are reported")
{
    auto f = [](double, const Eigen::VectorXd& y) { return scalar(-y[0] * y[0]); };
    auto J = [](double, const Eigen::VectorXd& y) { return scalar_m(-2.0 * y[0]); };
    const StepResult capped = trapezoid_step(scalar(1.0), 0.0, 0.5, f, J, NewtonConfig{1e-14, 1});
    CHECK_FALSE(capped.failure.empty());
    CHECK_FALSE(capped.record.converged);
    CHECK(capped.record.residual_norm > 1e-14);

    const double h = 0.1;
    const StepResult singular = trapezoid_step(
        scalar(1.0), 0.0, h, [h](double, const Eigen::VectorXd& y) { return (2.0 / h * y).eval(); },
        [h](double, const Eigen::VectorXd&) { return scalar_m(2.0 / h); }, NewtonConfig{});
    CHECK_THAT(singular.failure, Catch::Matchers::ContainsSubstring("singular"));

    CHECK_THROWS_AS(trapezoid_step(scalar(1.0), 0.0, 0.0, f, J, NewtonConfig{}), DomainError);
}

TEST_CASE("A-stability smoke test")
{
    const double a = -1e6;
    const Trajectory traj = integrate(
        scalar(1.0), 1.0, 0.01, [a](double, const Eigen::VectorXd& y) { return (a * y).eval(); },
        [a](double, const Eigen::VectorXd&) { return scalar_m(a); }, NewtonConfig{});
    REQUIRE(traj.completed);
    for (std::size_t k = 1; k < traj.states.size(); ++k)
        CHECK(std::abs(traj.states[k][0]) < std::abs(traj.states[k - 1][0]));
    CHECK(std::abs(traj.states.back()[0]) < 1.0);
}

TEST_CASE("fixed-step march")
{
    auto zero_f = [](double, const Eigen::VectorXd& y) { return Eigen::VectorXd::Zero(y.size()); };
    auto zero_J = [](double, const Eigen::VectorXd& y) { return Eigen::MatrixXd::Zero(y.size(), y.size()); };

    CHECK(step_count(20.0, 1.0 / 192.0) == 3840);
    CHECK(step_count(20.0, 1.0 / 48.0) == 960);
    CHECK(step_count(0.0, 0.1) == 0);
    CHECK_THROWS_AS(step_count(1.0, 0.3), ConfigError);
    CHECK_THROWS_AS(step_count(1.0, 0.0), ConfigError);

    const Trajectory t20 = integrate(scalar(1.0), 20.0, 1.0 / 192.0, zero_f, zero_J, NewtonConfig{});
    CHECK(t20.completed);
    CHECK(t20.states.size() == 3841);
    CHECK(t20.times.back() == 20.0);
    CHECK(t20.step_iterations.size() == 3841);

    const Trajectory t0 = integrate(scalar(1.0), 0.0, 0.1, zero_f, zero_J, NewtonConfig{});
    CHECK(t0.completed);
    REQUIRE(t0.states.size() == 1);
    CHECK(t0.states[0][0] == 1.0);

    CHECK(nearest_step(t20, 10.0) == 1920);
    CHECK(nearest_step(t20, 0.001) == 0);
}

TEST_CASE("observer and monitor")
{
    auto f = [](double, const Eigen::VectorXd& y) { return (-y).eval(); };
    auto J = [](double, const Eigen::VectorXd& y) { return (-Eigen::MatrixXd::Identity(y.size(), y.size())).eval(); };
    IntegrationOptions opts;
    std::vector<double> seen;
    opts.observer = [&](std::size_t, double t, const Eigen::VectorXd&) { seen.push_back(t); };
    opts.monitor = [](double t, const Eigen::VectorXd&) { return t > 0.45 ? std::string("stop") : std::string(); };
    const Trajectory traj = integrate(scalar(1.0), 1.0, 0.1, f, J, NewtonConfig{}, opts);
    CHECK_FALSE(traj.completed);
    CHECK(traj.failure == "stop");
    CHECK(seen.size() == 6);
    CHECK(traj.states.size() == 6);
}

TEST_CASE("step halving recovers from a failed step")
{
    // Newton from y_n fails at the full step when capped to 2 iterations, but
    // smaller substeps start closer to the solution.
    auto f = [](double, const Eigen::VectorXd& y) { return scalar(-10.0 * y[0] * y[0]); };
    auto J = [](double, const Eigen::VectorXd& y) { return scalar_m(-20.0 * y[0]); };
    std::vector<std::string> messages;
    IntegrationOptions opts;
    opts.log = [&](const std::string& s) { messages.push_back(s); };
    const Trajectory traj = integrate(scalar(1.0), 0.5, 0.5, f, J, NewtonConfig{1e-10, 4}, opts);
    REQUIRE(traj.completed);
    CHECK(traj.halvings == 1);
    CHECK_FALSE(messages.empty());
    CHECK(traj.steps.size() > 1);
    // exact solution 1 / (1 + 10 t)
    CHECK_THAT(traj.states.back()[0], WithinAbs(1.0 / 6.0, 0.05));

    opts.max_halvings = 0;
    const Trajectory failed = integrate(scalar(1.0), 0.5, 0.5, f, J, NewtonConfig{1e-10, 4}, opts);
    CHECK_FALSE(failed.completed);
    CHECK_FALSE(failed.failure.empty());
    CHECK(failed.states.size() == 1);
}

TEST_CASE("order 2 against the matrix exponential")
{
    Eigen::MatrixXd A(3, 3);
    A << -2.0, 1.0, 0.0, 0.5, -1.0, 0.3, 0.0, 0.2, -4.0;
    Eigen::VectorXd y0(3);
    y0 << 1.0, 0.5, -0.25;
    const Eigen::VectorXd exact = (A * 1.0).exp() * y0;
    auto f = [&](double, const Eigen::VectorXd& y) { return (A * y).eval(); };
    auto J = [&](double, const Eigen::VectorXd&) { return A; };
    std::vector<double> errors;
    for (double h : {1.0 / 48, 1.0 / 96, 1.0 / 192}) {
        const Trajectory traj = integrate(y0, 1.0, h, f, J, NewtonConfig{});
        errors.push_back((traj.states.back() - exact).cwiseAbs().maxCoeff());
    }
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double ratio = errors[k - 1] / errors[k];
        CHECK(ratio > 3.6);
        CHECK(ratio < 4.4);
    }
}

TEST_CASE("order 2 on the coupled nonlinear system")
{
    const DiscreteOperator op = assemble_operator(build_grid(0.001, 0.999, 30), DivisionParams{}, 30);
    const TemperatureProfile profile{15.0, 18.0, 0.2, 0.6, 1.0};
    const FermentationSystem sys(op, KineticParams{}, profile);
    auto f = [&](double t, const Eigen::VectorXd& y) { return sys.rhs(t, y); };
    auto J = [&](double t, const Eigen::VectorXd& y) { return sys.jacobian(t, y); };

    // smooth start: a bell-shaped population away from the fast division range
    SystemState s;
    s.w.resize(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        const double z = (op.grid.centers[i] - 0.25) / 0.08;
        s.w[i] = std::exp(-0.5 * z * z);
    }
    s.N = 0.3;
    s.E = 60.0;
    s.S = 150.0;
    s.O = 0.003;
    const Eigen::VectorXd y0 = pack(s);
    const double t_end = 1.0;

    // classical RK4 reference with a tiny step, resolving the ramp kinks exactly
    Eigen::VectorXd ref = y0;
    const int n_ref = 20000;
    const double hr = t_end / n_ref;
    for (int k = 0; k < n_ref; ++k) {
        const double t = k * hr;
        const Eigen::VectorXd k1 = f(t, ref);
        const Eigen::VectorXd k2 = f(t + hr / 2, ref + hr / 2 * k1);
        const Eigen::VectorXd k3 = f(t + hr / 2, ref + hr / 2 * k2);
        const Eigen::VectorXd k4 = f(t + hr, ref + hr * k3);
        ref += hr / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }

    std::vector<double> errors;
    for (double h : {1.0 / 48, 1.0 / 96, 1.0 / 192}) {
        const Trajectory traj = integrate(y0, t_end, h, f, J, NewtonConfig{});
        REQUIRE(traj.completed);
        errors.push_back(((traj.states.back() - ref).array() / ref.array().abs().max(1e-3)).abs().maxCoeff());
    }
    const double order = std::log2(errors[0] / errors[2]) / 2.0;
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
}

TEST_CASE("trajectories are bit-identical across runs")
{
    auto f = [](double t, const Eigen::VectorXd& y) { return (-y * y.norm() + Eigen::VectorXd::Constant(y.size(), t)).eval(); };
    auto J = [](double, const Eigen::VectorXd& y) {
        const double n = y.norm();
        return (-(n * Eigen::MatrixXd::Identity(y.size(), y.size()) + y * y.transpose() / n)).eval();
    };
    Eigen::VectorXd y0(2);
    y0 << 1.0, 2.0;
    const Trajectory a = integrate(y0, 1.0, 0.125, f, J, NewtonConfig{});
    const Trajectory b = integrate(y0, 1.0, 0.125, f, J, NewtonConfig{});
    for (std::size_t k = 0; k < a.states.size(); ++k)
        CHECK(a.states[k] == b.states[k]);
}

TEST_CASE("advisory step size")
{
    const MassGrid g = build_grid(0.001, 0.999, 150);
    const TemperatureProfile profile{15.0, 18.0, 9.5, 10.5, 20.0};
    const KineticParams kp;
    SystemState s;
    s.w = Eigen::VectorXd::Ones(150);
    s.N = 0.5;
    s.S = 200.0;
    s.O = 0.0153;
    const double h = suggest_dt(g, kp, profile, s, 1.0);
    // explicit bound dm / v_max at the default initial state and 18 degC
    const double v_max = growth_rate_eps(kp, 0.999, s.N, s.S, s.O, 18.0);
    CHECK_THAT(h, WithinRel(g.dm / v_max, 1e-12));
    // the production step 1/192 runs at a Courant number between 1 and 2
    CHECK((1.0 / 192.0) / h > 1.0);
    CHECK((1.0 / 192.0) / h < 2.0);

    const MassGrid g2 = build_grid(0.001, 0.999, 300);
    CHECK_THAT(suggest_dt(g2, kp, profile, s, 1.0), WithinRel(h / 2, 1e-12));
    CHECK_THAT(suggest_dt(g, kp, profile, s, 0.5), WithinRel(h / 2, 1e-12));

    KineticParams fast = kp;
    fast.mu1 *= 2.0;
    CHECK_THAT(suggest_dt(g, fast, profile, s, 1.0), WithinRel(h / 2, 1e-12));

    s.N = 0.0;
    CHECK(suggest_dt(g, kp, profile, s, 1.0) == profile.t_final / 100.0);
    CHECK(suggest_dt(g, kp, profile, s, 1.0, 0.3) == 0.3);
    CHECK_THROWS_AS(suggest_dt(g, kp, profile, s, 0.0), DomainError);
    CHECK_THROWS_AS(suggest_dt(g, kp, profile, s, 1.5), DomainError);
}
