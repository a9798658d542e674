#include "winepbe/initial_distribution.hpp"

#include "winepbe/errors.hpp"

#include <cmath>

namespace winepbe {

DistributionKind parse_distribution_kind(std::string_view name)
{
    if (name == "constant")
        return DistributionKind::constant;
    if (name == "beta")
        return DistributionKind::beta;
    if (name == "small_to_medium")
        return DistributionKind::small_to_medium;
    if (name == "two_normal_peak")
        return DistributionKind::two_normal_peak;
    throw ConfigError("distribution.kind: unknown distribution '" + std::string(name) + "'");
}

std::string to_string(DistributionKind kind)
{
    switch (kind) {
    case DistributionKind::constant: return "constant";
    case DistributionKind::beta: return "beta";
    case DistributionKind::small_to_medium: return "small_to_medium";
    case DistributionKind::two_normal_peak: return "two_normal_peak";
    }
    return "unknown";
}

void DistributionSpec::validate() const
{
    if (!(total_cells > 0.0))
        throw ConfigError("distribution.total_cells must be > 0");
    switch (kind) {
    case DistributionKind::constant: break;
    case DistributionKind::beta:
        if (!(beta_a >= 1.0 && beta_b >= 1.0))
            throw ConfigError("distribution.beta_a and distribution.beta_b must be >= 1");
        break;
    case DistributionKind::small_to_medium:
        if (!(plateau_end > 0.0 && taper_end > plateau_end))
            throw ConfigError("distribution.taper_end must exceed distribution.plateau_end > 0");
        break;
    case DistributionKind::two_normal_peak:
        if (!(std1 > 0.0 && std2 > 0.0))
            throw ConfigError("distribution.std1 and distribution.std2 must be > 0");
        if (!(weight >= 0.0 && weight <= 1.0))
            throw ConfigError("distribution.weight must lie in [0, 1]");
        break;
    }
}

namespace {

double shape(const DistributionSpec& s, const MassGrid& g, double m)
{
    switch (s.kind) {
    case DistributionKind::constant: return 1.0;
    case DistributionKind::beta: {
        const double x = (m - g.m_min) / (g.m_max - g.m_min);
        return std::pow(x, s.beta_a - 1.0) * std::pow(1.0 - x, s.beta_b - 1.0);
    }
    case DistributionKind::small_to_medium: {
        if (m <= s.plateau_end)
            return 1.0;
        if (m >= s.taper_end)
            return 0.0;
        const double x = (m - s.plateau_end) / (s.taper_end - s.plateau_end);
        return 1.0 - x * x * (3.0 - 2.0 * x);
    }
    case DistributionKind::two_normal_peak: {
        auto gauss = [](double x, double mu, double sd) {
            const double z = (x - mu) / sd;
            return std::exp(-0.5 * z * z) / sd;
        };
        return (1.0 - s.weight) * gauss(m, s.mean1, s.std1) + s.weight * gauss(m, s.mean2, s.std2);
    }
    }
    return 0.0;
}

}  // namespace

Eigen::VectorXd build_initial_density(const DistributionSpec& spec, const MassGrid& grid)
{
    spec.validate();
    Eigen::VectorXd w(grid.centers.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w[i] = shape(spec, grid, grid.centers[i]);
    const double discrete_total = w.sum() * grid.dm;
    if (!(discrete_total > 0.0))
        throw ConfigError("distribution: shape has no mass on this grid");
    w *= spec.total_cells / discrete_total;
    return w;
}

}  // namespace winepbe
