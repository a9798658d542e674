#include "winepbe/kinetics.hpp"

#include "winepbe/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace winepbe {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

void require_nonnegative_concentrations(double N, double S, double O)
{
    if (N < 0.0 || S < 0.0 || O < 0.0)
        throw DomainError("concentrations must be nonnegative (N=" + std::to_string(N) + ", S=" +
                          std::to_string(S) + ", O=" + std::to_string(O) + ")");
}

double saturation(double x, double K) { return x / (K + x); }

}  // namespace

void KineticParams::validate(double T_min, double T_max) const
{
    const double fields[] = {mu1, mu2, beta1, beta2, KE1, KE2, k1, k2, k3, k4, kd, kd1, kd2};
    const char* names[] = {"mu1", "mu2", "beta1", "beta2", "KE1", "KE2", "k1",
                           "k2",  "k3",  "k4",    "kd",    "kd1", "kd2"};
    for (std::size_t i = 0; i < std::size(fields); ++i)
        require(fields[i] >= 0.0 && std::isfinite(fields[i]), std::string("kinetic.") + names[i] + " must be >= 0");
    require(KN > 0.0, "kinetic.KN must be > 0");
    require(KS1 > 0.0, "kinetic.KS1 must be > 0");
    require(KS2 > 0.0, "kinetic.KS2 must be > 0");
    require(KO > 0.0, "kinetic.KO must be > 0");
    require(tol > 0.0, "kinetic.tol must be > 0");
    require(eps > 0.0, "kinetic.eps must be > 0");

    for (double T : {T_min, T_max}) {
        require(mu1 * T - mu2 >= 0.0, "kinetic.mu1/mu2: mu_max(T) negative at T=" + std::to_string(T));
        require(beta1 * T - beta2 >= 0.0, "kinetic.beta1/beta2: beta_max(T) negative at T=" + std::to_string(T));
        require(-KE1 * T + KE2 >= 0.0, "kinetic.KE1/KE2: K_E(T) negative at T=" + std::to_string(T));
    }
}

void DivisionParams::validate(double m_max) const
{
    require(gamma > 0.0, "division.gamma must be > 0");
    require(delta > 0.0, "division.delta must be > 0");
    require(beta > 0.0, "division.beta must be > 0");
    require(lambda > 0.0, "division.lambda must be > 0");
    require(m_t > 0.0 && m_t < m_d, "division.m_t must satisfy 0 < m_t < m_d");
    require(m_d < m_max, "division.m_d must be below the largest mass");
}

void TemperatureProfile::validate() const
{
    require(t_ramp_start >= 0.0, "temperature.t_ramp_start must be >= 0");
    require(t_ramp_start <= t_ramp_end, "temperature.t_ramp_end must be >= t_ramp_start");
    require(t_ramp_end <= t_final, "temperature.t_ramp_end must be <= t_final");
}

double temperature(const TemperatureProfile& profile, double t)
{
    if (!(t >= 0.0 && t <= profile.t_final))
        throw DomainError("temperature: t=" + std::to_string(t) + " outside [0, t_final]");
    if (t <= profile.t_ramp_start)
        return profile.T_low;
    if (t >= profile.t_ramp_end)
        return profile.T_high;
    const double s = (t - profile.t_ramp_start) / (profile.t_ramp_end - profile.t_ramp_start);
    return profile.T_low + s * (profile.T_high - profile.T_low);
}

double mu_max(const KineticParams& p, double T)
{
    const double v = p.mu1 * T - p.mu2;
    if (v < 0.0)
        throw ModelValidityError("mu_max(T) < 0 at T=" + std::to_string(T));
    return v;
}

double beta_max(const KineticParams& p, double T)
{
    const double v = p.beta1 * T - p.beta2;
    if (v < 0.0)
        throw ModelValidityError("beta_max(T) < 0 at T=" + std::to_string(T));
    return v;
}

double ethanol_inhibition_constant(const KineticParams& p, double T)
{
    const double v = -p.KE1 * T + p.KE2;
    if (v < 0.0)
        throw ModelValidityError("K_E(T) < 0 at T=" + std::to_string(T));
    return v;
}

double growth_rate_eps(const KineticParams& p, double m, double N, double S, double O, double T)
{
    require_nonnegative_concentrations(N, S, O);
    if (m < 0.0)
        throw DomainError("growth_rate_eps: negative mass");
    return mu_max(p, T) * saturation(N, p.KN) * saturation(S, p.KS1) * (saturation(O, p.KO) + p.eps) * m;
}

double growth_rate(const KineticParams& p, double m, double N, double S, double O, double T)
{
    require_nonnegative_concentrations(N, S, O);
    if (m < 0.0)
        throw DomainError("growth_rate: negative mass");
    return mu_max(p, T) * saturation(N, p.KN) * saturation(S, p.KS1) * saturation(O, p.KO) * m;
}

double ethanol_rate(const KineticParams& p, double m, double S, double E, double T)
{
    if (S < 0.0 || E < 0.0)
        throw DomainError("ethanol_rate: negative concentration");
    if (m < 0.0)
        throw DomainError("ethanol_rate: negative mass");
    const double KE = ethanol_inhibition_constant(p, T);
    return beta_max(p, T) * saturation(S, p.KS2) * (KE / (KE + E)) * m;
}

double sugar_rate(const KineticParams& p, double m, double N, double S, double E, double O, double T)
{
    return p.k2 * ethanol_rate(p, m, S, E, T) + p.k3 * growth_rate_eps(p, m, N, S, O, T);
}

double death_phi(const KineticParams& p, double E)
{
    const double x = E - p.tol;
    return (0.5 + std::atan(p.kd1 * x) / std::numbers::pi) * p.kd2 * x * x;
}

double death_phi_derivative(const KineticParams& p, double E)
{
    const double x = E - p.tol;
    const double a = p.kd1 * x;
    return p.kd1 * p.kd2 * x * x / (std::numbers::pi * (1.0 + a * a)) +
           2.0 * p.kd2 * x * (0.5 + std::atan(a) / std::numbers::pi);
}

double partition(const DivisionParams& d, double m, double m_prime)
{
    if (!(m_prime > m && m_prime > d.m_t))
        return 0.0;
    const double a = m - d.m_t;
    const double b = m - m_prime + d.m_t;
    return d.lambda * std::exp(-d.beta * a * a) + d.lambda * std::exp(-d.beta * b * b);
}

double division_rate(const DivisionParams& d, double m)
{
    if (m <= d.m_t)
        return 0.0;
    if (m < d.m_d) {
        const double x = m - d.m_d;
        return d.gamma * std::exp(-d.delta * x * x);
    }
    return d.gamma;
}

double compute_lambda(double beta)
{
    if (!(beta > 0.0))
        throw DomainError("compute_lambda: beta must be > 0");
    return 0.5 * std::sqrt(beta / std::numbers::pi);
}

double normalize_mass(double value, double from_lo, double from_hi, double to_lo, double to_hi)
{
    if (!(from_hi > from_lo))
        throw DomainError("normalize_mass: source interval is empty");
    return (to_hi - to_lo) / (from_hi - from_lo) * (value - from_lo) + from_lo;
}

SpecificRates specific_rates(const KineticParams& p, double N, double E, double S, double O, double T)
{
    const double mu = mu_max(p, T);
    const double bmax = beta_max(p, T);
    const double KE = ethanol_inhibition_constant(p, T);

    const double fN = N / (p.KN + N);
    const double fS1 = S / (p.KS1 + S);
    const double fO = O / (p.KO + O);
    const double fS2 = S / (p.KS2 + S);
    const double fE = KE / (KE + E);
    const double dfN = p.KN / ((p.KN + N) * (p.KN + N));
    const double dfS1 = p.KS1 / ((p.KS1 + S) * (p.KS1 + S));
    const double dfO = p.KO / ((p.KO + O) * (p.KO + O));
    const double dfS2 = p.KS2 / ((p.KS2 + S) * (p.KS2 + S));
    const double dfE = -KE / ((KE + E) * (KE + E));

    SpecificRates s;
    const double oxy = fO + p.eps;
    s.r_eps = mu * fN * fS1 * oxy;
    s.r = mu * fN * fS1 * fO;
    s.q_E = bmax * fS2 * fE;
    s.q = p.k2 * s.q_E + p.k3 * s.r_eps;

    s.dr_eps_dN = mu * dfN * fS1 * oxy;
    s.dr_eps_dS = mu * fN * dfS1 * oxy;
    s.dr_eps_dO = mu * fN * fS1 * dfO;
    s.dr_dN = mu * dfN * fS1 * fO;
    s.dr_dS = mu * fN * dfS1 * fO;
    s.dr_dO = mu * fN * fS1 * dfO;
    s.dqE_dS = bmax * dfS2 * fE;
    s.dqE_dE = bmax * fS2 * dfE;

    s.dq_dN = p.k3 * s.dr_eps_dN;
    s.dq_dE = p.k2 * s.dqE_dE;
    s.dq_dS = p.k2 * s.dqE_dS + p.k3 * s.dr_eps_dS;
    s.dq_dO = p.k3 * s.dr_eps_dO;
    return s;
}

}  // namespace winepbe
