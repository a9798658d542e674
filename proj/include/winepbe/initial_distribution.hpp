#pragma once

#include "winepbe/discretization.hpp"

#include <string>
#include <string_view>

namespace winepbe {

enum class DistributionKind { constant, beta, small_to_medium, two_normal_peak };

DistributionKind parse_distribution_kind(std::string_view name);
std::string to_string(DistributionKind kind);

/// Shape of the initial cell-mass distribution. The shape is sampled at cell
/// centres and rescaled so that sum_i w_i dm equals total_cells exactly.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::constant;
    double total_cells = 1.0e6;  ///< cells/ml

    // beta: x^(a-1) (1-x)^(b-1) with x the position in [m_min, m_max]
    double beta_a = 2.0;
    double beta_b = 5.0;

    // small_to_medium: flat up to plateau_end, smoothstep down to zero at taper_end
    double plateau_end = 0.3784;
    double taper_end = 0.8525;

    // two_normal_peak: (1 - weight) N(mean1, std1) + weight N(mean2, std2)
    double mean1 = 0.24975;
    double std1 = 0.05;
    double mean2 = 0.5994;
    double std2 = 0.05;
    double weight = 0.5;

    void validate() const;
};

/// Density in cells/(ml * scaled mass), one value per cell.
Eigen::VectorXd build_initial_density(const DistributionSpec& spec, const MassGrid& grid);

}  // namespace winepbe
