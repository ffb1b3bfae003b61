#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ttz/construct.hpp"
#include "ttz/linalg.hpp"

using namespace ttz;

TEST(Oracle, CofactorAndCharpolyAgreeWithHandValues) {
  const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_NEAR(std::abs(oracle::cofactor_det(a) + 2.0), 0.0, 1e-15);
  const auto c = oracle::charpoly(a);  // z^2 - 5 z - 2
  EXPECT_NEAR(std::abs(c[0] + 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[1] + 5.0), 0.0, 1e-14);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix r = oracle::random_dense(5, rng);
    EXPECT_NEAR(std::abs(oracle::cofactor_det(r) - determinant(r)), 0.0, 1e-10 * std::abs(determinant(r)) + 1e-12);
  }
}

TEST(ClosedForm, ToeplitzFormulaMatchesCharacteristicPolynomial) {
  // The closed form is checked against brute force before being used as an oracle.
  const std::vector<std::array<cplx, 3>> corpus = {
      {cplx(0, 0), cplx(1, 0), cplx(1, 0)}, {cplx(1, 1), cplx(0.5, 0), cplx(2, 0)}, {cplx(0, 0), cplx(0, 0.25), cplx(0, 1)}};
  for (const auto& [b, c, d] : corpus)
    for (std::size_t n = 1; n <= 6; ++n) {
      const ComplexMatrix t = build_toeplitz(FrozenSymbol{b, c, d}, n).dense();
      EXPECT_LT(oracle::matched(oracle::brute_force_eigenvalues(t), oracle::toeplitz_closed_form(b, c, d, n)), 1e-9);
    }
}

TEST(Hessenberg, TridiagonalPassesThrough) {
  std::mt19937_64 rng(3);
  const BandedComplexMatrix m = oracle::random_banded(9, 1, 1, rng);
  EXPECT_EQ(oracle::max_diff(hessenberg_reduce(m).h, m.dense()), 0.0);
}

TEST(Hessenberg, PentadiagonalStructuralZeros) {
  BandedComplexMatrix m(4, 2, 2);
  int v = 1;
  for (int j = -2; j <= 2; ++j)
    for (cplx& e : m.diagonal(j)) e = cplx(v++, 0.5 * j);
  const ComplexMatrix h = hessenberg_reduce(m).h;
  for (std::size_t i = 2; i < 4; ++i)
    for (std::size_t k = 0; k + 1 < i; ++k) EXPECT_LT(std::abs(h(i, k)), 1e-14);
  EXPECT_LT(std::abs(h.trace() - m.trace()), 1e-12);
}

TEST(Hessenberg, SimilarityPreservesSpectrum) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = oracle::random_dense(6, rng);
    const Spectrum before = eigenvalues(a, {false, 0});
    const Spectrum after = hessenberg_eigenvalues(hessenberg_reduce(a).h);
    EXPECT_LT(matched_distance(before.values, after.values), 1e-10);
    EXPECT_LT(matched_distance(before.values, oracle::brute_force_eigenvalues(a)), 1e-9);
  }
}

TEST(Eigen, SmallExamples) {
  const Spectrum s = eigenvalues(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_LT(matched_distance(s.values, {1.0, -1.0}), 1e-14);
  const Spectrum f = eigenvalues(build_twisted(preset_symbol("fig1"), 2));
  EXPECT_LT(matched_distance(f.values, {-0.5, -0.5}), 1e-7);  // double root
  const Spectrum t = eigenvalues(build_toeplitz(FrozenSymbol{0.0, 1.0, 1.0}, 4));
  const double a = 2.0 * std::cos(std::numbers::pi / 5), b = 2.0 * std::cos(2.0 * std::numbers::pi / 5);
  EXPECT_LT(matched_distance(t.values, {a, -a, b, -b}), 1e-13);
  EXPECT_NEAR(a, 1.61803, 1e-5);
  EXPECT_NEAR(b, 0.61803, 1e-5);
}

TEST(Eigen, AgreesWithBruteForceOnRandomBanded) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 5);
    const int q = 1 + t % 2, p = 1 + (t / 2) % 3;
    const BandedComplexMatrix m = oracle::random_banded(n, std::min<int>(q, n - 1), std::min<int>(p, n - 1), rng);
    EXPECT_LT(matched_distance(eigenvalues(m).values, oracle::brute_force_eigenvalues(m.dense())), 1e-8);
  }
}

TEST(Eigen, ClosedFormCorpusAtOrderTwoHundred) {
  const std::vector<std::array<cplx, 3>> corpus = {{cplx(0, 0), cplx(1, 0), cplx(1, 0)},
                                                   {cplx(0, 0), cplx(0, 0.25), cplx(0, 1)},
                                                   {cplx(1, -1), cplx(2, 0), cplx(0.5, 0)},
                                                   {cplx(0, 0), cplx(1, 1), cplx(1, -1)},
                                                   {cplx(-2, 0), cplx(0.1, 0), cplx(10, 0)}};
  for (const auto& [b, c, d] : corpus) {
    const Spectrum s = eigenvalues(build_toeplitz(FrozenSymbol{b, c, d}, 200));
    EXPECT_TRUE(s.all_converged());
    EXPECT_LT(matched_distance(s.values, oracle::toeplitz_closed_form(b, c, d, 200)), 1e-8);
  }
}

TEST(Eigen, TraceIdentity) {
  for (const char* preset : {"fig1", "fig2", "ex4", "ex5"})
    for (std::size_t n : {50u, 300u}) {
      const BandedComplexMatrix m = build_perturbed(preset_symbol(preset), n, 1.0 / n, NoiseSpec{}, 1);
      const Spectrum s = eigenvalues(m);
      EXPECT_TRUE(s.all_converged());
      EXPECT_LE(std::abs(s.sum() - m.trace()), 1e-8 * static_cast<double>(n) * m.max_abs()) << preset << " " << n;
    }
}

TEST(Eigen, TransposeInvariance) {
  std::mt19937_64 rng(6);
  for (std::size_t n : {10u, 50u, 100u}) {
    const BandedComplexMatrix m = oracle::random_banded(n, 2, 1, rng);
    EXPECT_LT(matched_distance(eigenvalues(m).values, eigenvalues(m.transpose()).values), 1e-8);
  }
}

TEST(Eigen, BalancingToggle) {
  const BandedComplexMatrix m = build_twisted(preset_symbol("fig1"), 60);
  const Spectrum on = eigenvalues(m, {true, 200});
  const Spectrum off = eigenvalues(m, {false, 0});
  EXPECT_EQ(on.size(), 60u);
  EXPECT_EQ(off.size(), 60u);
  // balanced eigenvalues stay on the segments 1 - 2x + i[-1, 1]
  for (const cplx& v : on.values) EXPECT_LE(std::abs(v.real()), 1.0 + 1e-9);
}

TEST(LogDet, Examples) {
  BandedComplexMatrix one(1, 0, 0);
  one.diagonal(0)[0] = cplx(2.0, 1.0);
  EXPECT_NEAR(log_abs_det(one.widened(1, 1), cplx(0.5, -1.0)), std::log(std::abs(cplx(1.5, 2.0))), 1e-15);
  const BandedComplexMatrix t3 = build_toeplitz(FrozenSymbol{0.0, 1.0, 1.0}, 3);
  EXPECT_EQ(log_abs_det(t3, 0.0), -std::numeric_limits<double>::infinity());
  std::mt19937_64 rng(8);
  const BandedComplexMatrix r = oracle::random_banded(8, 1, 1, rng);
  const Spectrum s = eigenvalues(r);
  const cplx z(0.3, 4.0);
  double sum = 0.0;
  for (const cplx& v : s.values) sum += std::log(std::abs(v - z));
  EXPECT_NEAR(log_abs_det(r, z), sum, 1e-9);
  EXPECT_NEAR(log_abs_det(r, z), std::log(std::abs(oracle::cofactor_det(r.shifted(z).dense()))), 1e-10);
}

TEST(LogDet, MatchesSpectrumOnLargerMatrices) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {40u, 200u, 500u}) {
    const BandedComplexMatrix m = oracle::random_banded(n, 2, 2, rng);
    const Spectrum s = eigenvalues(m);
    const cplx z(0.0, 20.0);  // well outside the spectrum
    double sum = 0.0;
    for (const cplx& v : s.values) sum += std::log(std::abs(v - z));
    EXPECT_NEAR(log_abs_det(m, z), sum, 1e-6 * static_cast<double>(n));
  }
}

TEST(BlockDet, WorkedExample) {
  const ComplexMatrix m{{1.0, 2.0}, {3.0, 4.0}}, nm{{5.0, 6.0}, {7.0, 8.0}};
  EXPECT_NEAR(std::abs(block_det(m, nm, 1.0, 1.0) + 4.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(oracle::cofactor_det(assemble_block(m, nm, 1.0, 1.0)) + 4.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(block_det(m, nm, 0.0, 3.0) - 4.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(block_det(m, nm, 2.0, 0.0) - 4.0), 0.0, 1e-12);
  const ComplexMatrix a{{cplx(2.0, 1.0)}}, b{{cplx(-1.0, 3.0)}};
  EXPECT_NEAR(std::abs(block_det(a, b, 0.5, cplx(0, 2)) - (cplx(2.0, 1.0) * cplx(-1.0, 3.0) - 0.5 * cplx(0, 2))), 0.0, 1e-14);
}

TEST(BlockDet, EverySplitOfRandomBandedMatrices) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 11);
    const BandedComplexMatrix m = oracle::random_banded(n, 1, 1, rng);
    const ComplexMatrix dense = m.dense();
    const cplx ref = oracle::cofactor_det(dense);
    for (std::size_t r = 1; r < n; ++r) {
      const cplx got = block_det(dense.principal(0, r), dense.principal(r, n - r), dense(r, r - 1), dense(r - 1, r));
      EXPECT_LE(std::abs(got - ref), 1e-12 * std::max(1.0, std::abs(ref)) * 10.0) << n << " split " << r;
    }
  }
}

TEST(Matching, GreedyPairs) {
  EXPECT_EQ(matched_distance({1.0, 2.0}, {2.0, 1.0}), 0.0);
  EXPECT_EQ(matched_distance({1.0}, {1.0, 2.0}), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(matched_distance({0.0, 1.0}, {0.1, 1.3}), 0.3, 1e-15);
}
