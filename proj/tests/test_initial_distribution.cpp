#include "winepbe/errors.hpp"
#include "winepbe/initial_distribution.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace winepbe;
using Catch::Matchers::WithinRel;

namespace {

const DistributionKind kAll[] = {DistributionKind::constant, DistributionKind::beta,
                                 DistributionKind::small_to_medium, DistributionKind::two_normal_peak};

}  // namespace

TEST_CASE("kind names round trip")
{
    for (DistributionKind k : kAll)
        CHECK(parse_distribution_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_distribution_kind("gamma"), ConfigError);
}

TEST_CASE("constant distribution on 150 cells")
{
    const MassGrid g = build_grid(0.001, 0.999, 150);
    const Eigen::VectorXd w = build_initial_density(DistributionSpec{}, g);
    for (Eigen::Index i = 0; i < 150; ++i)
        CHECK_THAT(w[i], WithinRel(1e6 / 0.998, 1e-12));
}

TEST_CASE("every kind is nonnegative and carries the requested total")
{
    for (std::size_t C : {30u, 50u, 100u, 150u}) {
        const MassGrid g = build_grid(0.001, 0.999, C);
        for (DistributionKind k : kAll) {
            DistributionSpec spec;
            spec.kind = k;
            const Eigen::VectorXd w = build_initial_density(spec, g);
            CHECK((w.array() >= 0.0).all());
            CHECK_THAT(w.sum() * g.dm, WithinRel(1e6, 1e-9));
            CHECK(build_initial_density(spec, g) == w);
        }
    }
}

TEST_CASE("random shape parameters stay nonnegative")
{
    const MassGrid g = build_grid(0.001, 0.999, 100);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        DistributionSpec spec;
        spec.kind = kAll[k % 4];
        spec.total_cells = 1e3 + 1e7 * u(rng);
        spec.beta_a = 1.0 + 6.0 * u(rng);
        spec.beta_b = 1.0 + 6.0 * u(rng);
        spec.plateau_end = 0.05 + 0.5 * u(rng);
        spec.taper_end = spec.plateau_end + 0.01 + 0.4 * u(rng);
        spec.mean1 = u(rng);
        spec.mean2 = u(rng);
        spec.std1 = 0.03 + 0.2 * u(rng);
        spec.std2 = 0.03 + 0.2 * u(rng);
        spec.weight = u(rng);
        const Eigen::VectorXd w = build_initial_density(spec, g);
        CHECK((w.array() >= 0.0).all());
        CHECK_THAT(w.sum() * g.dm, WithinRel(spec.total_cells, 1e-9));
    }
}

TEST_CASE("two-peak with zero second weight is a single Gaussian")
{
    const MassGrid g = build_grid(0.001, 0.999, 150);
    DistributionSpec spec;
    spec.kind = DistributionKind::two_normal_peak;
    spec.weight = 0.0;
    const Eigen::VectorXd w = build_initial_density(spec, g);
    Eigen::VectorXd gauss(150);
    for (Eigen::Index i = 0; i < 150; ++i) {
        const double z = (g.centers[i] - spec.mean1) / spec.std1;
        gauss[i] = std::exp(-0.5 * z * z);
    }
    gauss *= 1e6 / (gauss.sum() * g.dm);
    CHECK((w - gauss).cwiseAbs().maxCoeff() <= 1e-9 * gauss.maxCoeff());
}

TEST_CASE("shape features")
{
    const MassGrid g = build_grid(0.001, 0.999, 150);
    DistributionSpec spec;
    spec.kind = DistributionKind::small_to_medium;
    Eigen::VectorXd w = build_initial_density(spec, g);
    CHECK(w[0] == w[10]);
    CHECK(w[149] == 0.0);

    spec.kind = DistributionKind::two_normal_peak;
    w = build_initial_density(spec, g);
    int maxima = 0;
    for (Eigen::Index i = 1; i < 149; ++i)
        maxima += w[i] > w[i - 1] && w[i] > w[i + 1];
    CHECK(maxima == 2);

    spec.kind = DistributionKind::beta;
    w = build_initial_density(spec, g);
    Eigen::Index peak = 0;
    w.maxCoeff(&peak);
    CHECK(std::abs(g.centers[peak] - (0.001 + 0.998 * 0.2)) < 2 * g.dm);  // mode (a-1)/(a+b-2)
}

TEST_CASE("invalid specifications")
{
    const MassGrid g = build_grid(0.001, 0.999, 30);
    DistributionSpec spec;
    spec.total_cells = 0.0;
    CHECK_THROWS_AS(build_initial_density(spec, g), ConfigError);
    spec = {};
    spec.kind = DistributionKind::beta;
    spec.beta_a = 0.5;
    CHECK_THROWS_AS(build_initial_density(spec, g), ConfigError);
    spec = {};
    spec.kind = DistributionKind::small_to_medium;
    spec.taper_end = spec.plateau_end;
    CHECK_THROWS_AS(build_initial_density(spec, g), ConfigError);
    spec = {};
    spec.kind = DistributionKind::two_normal_peak;
    spec.std2 = 0.0;
    CHECK_THROWS_AS(build_initial_density(spec, g), ConfigError);
    spec.std2 = 0.05;
    spec.weight = 1.5;
    CHECK_THROWS_AS(build_initial_density(spec, g), ConfigError);
}
