#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ttz/construct.hpp"
#include "ttz/limits.hpp"
#include "ttz/linalg.hpp"
#include "ttz/measures.hpp"
#include "ttz/potential.hpp"

using namespace ttz;

namespace {

const FrozenSymbol kLaplace{0.0, 1.0, 1.0};

TridiagonalSymbol constant_symbol(cplx b, cplx c, cplx d) {
  return TridiagonalSymbol::parse(detail::format_number(d.real()) + "+i*" + detail::format_number(d.imag()),
                                  detail::format_number(b.real()) + "+i*" + detail::format_number(b.imag()),
                                  detail::format_number(c.real()) + "+i*" + detail::format_number(c.imag()));
}

}  // namespace

TEST(Continuant, HandRecurrence) {
  const BandedComplexMatrix t3 = build_toeplitz(kLaplace, 3);
  const ContinuantTrace tr = continuant_trace(t3, 0.0);
  ASSERT_EQ(tr.steps(), 3u);
  auto d = [&](std::size_t k) { return std::exp(tr.log_scale[k]) * tr.u[k]; };
  EXPECT_NEAR(std::abs(d(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d(2) + 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d(3)), 0.0, 1e-15);
  EXPECT_EQ(tr.log_abs(), kNegInf);
  EXPECT_EQ(continuant_log_det(t3, 0.0), kNegInf);
  EXPECT_TRUE(continuant_det(t3, 0.0).is_zero());
}

TEST(Continuant, OrderOne) {
  BandedComplexMatrix m(1, 1, 1);
  m.diagonal(0)[0] = cplx(0.5, 2.0);
  const cplx z(-1.0, 0.25);
  EXPECT_NEAR(continuant_log_det(m, z), std::log(std::abs(z - cplx(0.5, 2.0))), 1e-15);
}

TEST(Continuant, MatchesLuOnRandomTridiagonals) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> size(2, 500);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = size(rng);
    const BandedComplexMatrix m = oracle::random_banded(n, 1, 1, rng);
    const cplx z(0.1 * t, 30.0 + t);  // far outside the spectrum
    EXPECT_NEAR(continuant_log_det(m, z), log_abs_det(m, z), 1e-8) << n;
  }
}

TEST(Continuant, NoOverflowAtLargeOrder) {
  const BandedComplexMatrix m = build_toeplitz(kLaplace, 5000);
  const double ld = continuant_log_det(m, 3.0);
  EXPECT_TRUE(std::isfinite(ld));
  EXPECT_NEAR(ld / 5000.0, frozen_gamma(kLaplace, 3.0), 1e-3);
}

TEST(Continuant, PhaseMatchesDeterminant) {
  std::mt19937_64 rng(22);
  for (std::size_t n = 1; n <= 9; ++n) {
    const BandedComplexMatrix m = oracle::random_banded(n, 1, 1, rng);
    const cplx z(0.3, -0.7);
    const cplx ref = oracle::cofactor_det(m.shifted(z).dense());  // det(M - z I)
    const LogDet d = continuant_det(m, z);
    EXPECT_NEAR(std::abs(std::exp(d.log_abs) * d.phase - ref), 0.0, 1e-10 * std::abs(ref));
  }
}

TEST(FrozenGamma, Examples) {
  EXPECT_NEAR(frozen_gamma(kLaplace, 3.0), std::log((3.0 + std::sqrt(5.0)) / 2.0), 1e-15);
  EXPECT_NEAR(frozen_gamma(kLaplace, 3.0), 0.962424, 1e-6);
  EXPECT_NEAR(frozen_gamma(kLaplace, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(frozen_gamma(FrozenSymbol{0.0, 2.0, 0.5}, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(frozen_gamma(FrozenSymbol{1.0, 0.0, 0.0}, 4.0), std::log(3.0), 1e-15);
  EXPECT_THROW(frozen_roots(FrozenSymbol{1.0, 0.0, 1.0}, 2.0), DomainError);
}

TEST(FrozenGamma, EqualsArcsinePotential) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const FrozenSymbol f{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    const cplx z(3.0 * g(rng), 3.0 * g(rng));
    worst = std::max(worst, std::abs(frozen_gamma(f, z) - arcsine_log_potential(f, z)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(GammaField, ConstantSymbolAndFarField) {
  const TridiagonalSymbol s = constant_symbol(cplx(0.5, -1.0), cplx(2.0, 0.0), cplx(0.0, 1.0));
  const FrozenSymbol f{cplx(0.5, -1.0), cplx(2.0, 0.0), cplx(0.0, 1.0)};
  for (double x : {0.0, 0.3, 1.0}) EXPECT_NEAR(gamma_field(s, x, cplx(1.0, 2.0)), frozen_gamma(f, cplx(1.0, 2.0)), 1e-14);
  const TridiagonalSymbol fig1 = TridiagonalSymbol::from_laurent(preset_symbol("fig1"));
  EXPECT_NEAR(gamma_field(fig1, 0.5, 10.0), std::log(10.0), 0.02);
  const FrozenSymbol mid = fig1.frozen(0.5);
  EXPECT_NEAR(gamma_field(fig1, 0.5, 10.0), std::log(std::abs(mid.c0)) + std::log(std::abs(frozen_roots(mid, 10.0).large)),
              1e-15);
}

TEST(IntegratedGamma, ConstantFarFieldAndMonteCarlo) {
  const TridiagonalSymbol s = constant_symbol(cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0));
  EXPECT_NEAR(integrated_gamma(s, 3.0), frozen_gamma(kLaplace, 3.0), 1e-10);
  const TridiagonalSymbol fig1 = TridiagonalSymbol::from_laurent(preset_symbol("fig1"));
  EXPECT_NEAR(integrated_gamma(fig1, cplx(1e6, 0.0)), std::log(1e6), 1e-3);
  const PointCloud mu = mu_sample(fig1, 1000000, 7);
  EXPECT_NEAR(integrated_gamma(fig1, 5.0), sample_log_potential(mu, 5.0), 3e-3);
}

TEST(IntegratedGamma, QuadratureRules) {
  const TridiagonalSymbol fig1 = TridiagonalSymbol::from_laurent(preset_symbol("fig1"));
  const double ref = integrated_gamma(fig1, cplx(2.0, 1.5), 2001);
  for (std::size_t nodes : {400u, 401u, 402u}) EXPECT_NEAR(integrated_gamma(fig1, cplx(2.0, 1.5), nodes), ref, 1e-9) << nodes;
  EXPECT_NEAR(integrated_gamma(fig1, cplx(2.0, 1.5), 2), ref, 0.1);
  EXPECT_THROW(integrated_gamma(fig1, 0.0, 1), ConfigError);
}

TEST(IntegratedGamma, BlockRiemannSumConverges) {
  const TridiagonalSymbol fig1 = TridiagonalSymbol::from_laurent(preset_symbol("fig1"));
  const cplx z(0.5, 2.0);
  const std::size_t n = 10000, k = frozen_block_size(n);
  EXPECT_LT(std::abs(block_gamma_sum(fig1, n, k, z) - integrated_gamma(fig1, z)), 0.01);
  EXPECT_LT(std::abs(block_gamma_sum(fig1, n, k, z) - integrated_gamma(fig1, z)),
            std::abs(block_gamma_sum(fig1, 100, 10, z) - integrated_gamma(fig1, z)));
}

TEST(Potential, DeskScaleEntrywisePerturbation) {
  const std::size_t n = 2000;
  const double eps = 1.0 / std::sqrt(static_cast<double>(n));
  const std::vector<cplx> zs = {cplx(3.0, 0.0), cplx(-3.0, 0.5), cplx(0.0, 1.0), cplx(1.0, -1.2), cplx(2.6, 0.2)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BandedComplexMatrix p =
        add_band_noise(build_toeplitz(kLaplace, n), eps, NoiseSpec::parse("uniform-sym"), seed);
    for (const cplx& z : zs) EXPECT_LT(std::abs(continuant_log_det(p, z) / n - frozen_gamma(kLaplace, z)), 0.05);
  }
}

TEST(Cone, UnperturbedRatiosAreExact) {
  const BandedComplexMatrix t = build_toeplitz(kLaplace, 300);
  const ConeReport rep = cone_diagnostics(t, kLaplace, 3.0);
  EXPECT_EQ(rep.delta_hat, 0.0);
  for (double r : rep.ratios) EXPECT_NEAR(r, rep.rho, 1e-13);
  EXPECT_TRUE(rep.cone_preserved);
  EXPECT_TRUE(rep.ratios_within_bounds);
  EXPECT_TRUE(rep.hypothesis_holds);
  EXPECT_FALSE(rep.bound_violation());
  EXPECT_NEAR(rep.rho, (3.0 + std::sqrt(5.0)) / 2.0, 1e-14);
}

TEST(Cone, SmallPerturbationStaysInCone) {
  const FrozenSymbol f{cplx(0.2, 0.1), cplx(1.0, 0.5), cplx(0.7, -0.2)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BandedComplexMatrix m = add_band_noise(build_toeplitz(f, 400), 0.01, NoiseSpec::parse("uniform-sym"), seed);
    const ConeReport rep = cone_diagnostics(m, f, cplx(2.5, 1.0));
    EXPECT_TRUE(rep.hypothesis_holds);
    EXPECT_TRUE(rep.cone_preserved);
    EXPECT_TRUE(rep.ratios_within_bounds);
  }
}

TEST(Cone, LargePerturbationIsReportedNotAsserted) {
  const BandedComplexMatrix m = add_band_noise(build_toeplitz(kLaplace, 200), 5.0, NoiseSpec::parse("standard-normal"), 3);
  const ConeReport rep = cone_diagnostics(m, kLaplace, cplx(2.5, 0.0));
  EXPECT_FALSE(rep.hypothesis_holds);
  EXPECT_EQ(rep.ratios.size(), 200u);
  EXPECT_TRUE(rep.bound_violation());
}

TEST(Cone, EqualModulusCurveRejected) {
  EXPECT_THROW(cone_diagnostics(build_toeplitz(kLaplace, 10), kLaplace, 0.0), NumericalError);
}

TEST(Theta, ConvergesToInverseSquareRoot) {
  const TridiagonalSymbol s = constant_symbol(0.0, 1.0, 1.0);
  const std::size_t k = 200;
  const BandedComplexMatrix m = build_toeplitz(kLaplace, 4 * k);
  const ThetaRatio th = theta_ratio(s, m, k, 1, 3.0);
  const double expect = std::pow((3.0 + std::sqrt(5.0)) / 2.0, -2.0);
  EXPECT_NEAR(std::abs(th.predicted - expect), 0.0, 1e-14);
  EXPECT_NEAR(expect, 0.145898, 1e-6);
  EXPECT_LT(std::abs(th.theta - expect), 2e-2);
}

TEST(Theta, FarFieldAndRejections) {
  const TridiagonalSymbol s = constant_symbol(0.0, 1.0, 1.0);
  const BandedComplexMatrix m = build_toeplitz(kLaplace, 400);
  EXPECT_LT(std::abs(theta_ratio(s, m, 100, 2, 1000.0).theta), 1e-4);
  EXPECT_THROW(theta_ratio(s, m, 100, 1, 0.0), NumericalError);   // |xi1| = |xi2|
  EXPECT_THROW(theta_ratio(s, m, 100, 1, cplx(1.0, 0.0)), NumericalError);
  EXPECT_THROW(theta_ratio(s, m, 100, 4, 3.0), ConfigError);
  EXPECT_THROW(theta_ratio(s, m, 100, 0, 3.0), ConfigError);
}

TEST(Theta, SigmaScreen) {
  const TridiagonalSymbol s = constant_symbol(0.0, 1.0, 1.0);
  EXPECT_TRUE(sigma_screen(s, 3.0).accepted());
  EXPECT_FALSE(sigma_screen(s, cplx(0.5, 0.0)).accepted());
  // xi1^2 = 1 at z = +-2 for the Laplace symbol
  EXPECT_LT(sigma_screen(s, 2.0).min_unit_square, 1e-6);
}
