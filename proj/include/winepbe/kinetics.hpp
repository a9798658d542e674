#pragma once

/**
 * @file
 * Continuous model functions of the white-wine fermentation population balance:
 * Michaelis-Menten growth and product rates, ethanol-related death, the
 * two-Gaussian partitioning density and the division rate.
 *
 * Units: time in days, cell mass in scaled units on [0.001, 0.999]
 * (1 scaled unit = 1e-9 g), concentrations in g/l.
 */

namespace winepbe {

/// Kinetic constants. Defaults are the published parameter set; k2 and k3 are
/// not published and carry calibrated defaults (see README).
struct KineticParams {
    double mu1 = 0.1681;   ///< 1/(day degC), slope of mu_max(T)
    double mu2 = 0.0;      ///< 1/day, offset of mu_max(T)
    double beta1 = 0.1348; ///< 1/(day degC), slope of beta_max(T)
    double beta2 = 0.0;    ///< 1/day
    double KE1 = 0.2616;   ///< g/(l degC), slope of K_E(T) (enters with minus sign)
    double KE2 = 38.90;    ///< g/l
    double KN = 0.1096;
    double KS1 = 29.5;
    double KS2 = 4.3262;
    double KO = 0.0007;
    double k1 = 0.018;
    double k2 = 1.89;
    double k3 = 0.003;
    double k4 = 0.0006;
    double kd = 0.01;     ///< 1/day baseline death
    double kd1 = 99.86;
    double kd2 = 0.0021;  ///< l^2/(g^2 day)
    double tol = 70.0;    ///< g/l ethanol tolerance
    double eps = 0.02;    ///< anaerobic activity constant

    /// Sign/positivity checks, plus nonnegativity of mu_max, beta_max and
    /// K_E at both temperature extremes (they are linear in T).
    void validate(double T_min, double T_max) const;
};

struct DivisionParams {
    double gamma = 200.0;   ///< 1/day
    double delta = 50.0;    ///< 1/mass^2
    double lambda = 5.641895835477563;  ///< 1/mass, equals compute_lambda(beta)
    double beta = 400.0;    ///< 1/mass^2
    double m_t = 0.3784;
    double m_d = 0.8525;

    void validate(double m_max) const;
};

/// Constant low temperature, linear ramp, constant high temperature.
struct TemperatureProfile {
    double T_low = 15.0;
    double T_high = 18.0;
    double t_ramp_start = 9.5;
    double t_ramp_end = 10.5;
    double t_final = 20.0;

    void validate() const;
};

double temperature(const TemperatureProfile& profile, double t);

double mu_max(const KineticParams& p, double T);
double beta_max(const KineticParams& p, double T);
double ethanol_inhibition_constant(const KineticParams& p, double T);

/// r_eps(m) = mu_max(T) N/(K_N+N) S/(K_S1+S) (O/(K_O+O) + eps) m
double growth_rate_eps(const KineticParams& p, double m, double N, double S, double O, double T);
/// Oxygen-limited growth rate, r(m) <= r_eps(m).
double growth_rate(const KineticParams& p, double m, double N, double S, double O, double T);
/// q_E(m) = beta_max(T) S/(K_S2+S) K_E(T)/(K_E(T)+E) m
double ethanol_rate(const KineticParams& p, double m, double S, double E, double T);
/// q = k2 q_E + k3 r_eps
double sugar_rate(const KineticParams& p, double m, double N, double S, double E, double O, double T);

/// Phi(E) = (1/2 + atan(kd1 (E - tol))/pi) kd2 (E - tol)^2. Defined for every real E.
double death_phi(const KineticParams& p, double E);
double death_phi_derivative(const KineticParams& p, double E);

double partition(const DivisionParams& d, double m, double m_prime);
double division_rate(const DivisionParams& d, double m);

/// Amplitude making each full-line Gaussian of the partition density carry mass 1/2.
double compute_lambda(double beta);

/// Rescales a mass from [from_lo, from_hi] to a target interval of width
/// (to_hi - to_lo), anchored at from_lo: this is the convention that maps the
/// literature masses m_t0 = 4.55e-13 g, m_d0 = 10.25e-13 g to 0.3784 and 0.8525.
double normalize_mass(double value, double from_lo, double from_hi, double to_lo, double to_hi);

/**
 * Per-unit-mass rates (r_eps = r_eps_spec * m, ...) and their partial
 * derivatives with respect to the concentrations, at one (N, E, S, O, T).
 * No domain checks: Newton iterates may step slightly outside the physical
 * range and the formulas stay smooth there.
 */
struct SpecificRates {
    double r_eps = 0.0;
    double r = 0.0;
    double q_E = 0.0;
    double q = 0.0;

    double dr_eps_dN = 0.0, dr_eps_dS = 0.0, dr_eps_dO = 0.0;
    double dr_dN = 0.0, dr_dS = 0.0, dr_dO = 0.0;
    double dqE_dS = 0.0, dqE_dE = 0.0;
    double dq_dN = 0.0, dq_dE = 0.0, dq_dS = 0.0, dq_dO = 0.0;
};

SpecificRates specific_rates(const KineticParams& p, double N, double E, double S, double O, double T);

}  // namespace winepbe
