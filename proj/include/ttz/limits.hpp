// Predicted limit objects: arcsine laws on frozen intervals, the x-mixture mu,
// Schmidt-Spitzer sets of frozen banded symbols, and frozen Toeplitz spectra.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ttz/construct.hpp"
#include "ttz/errors.hpp"
#include "ttz/linalg.hpp"
#include "ttz/point_cloud.hpp"
#include "ttz/rng.hpp"
#include "ttz/symbol.hpp"

namespace ttz {

/// N draws of b + 2 sqrt(dc) cos(pi U).
inline PointCloud arcsine_sample(cplx b, cplx c, cplx d, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("arcsine_sample needs count >= 1");
  RandomStream rng(seed, "arcsine");
  const cplx w = 2.0 * std::sqrt(d * c);
  PointCloud out;
  out.points.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.points.push_back(b + w * std::cos(std::numbers::pi * rng.uniform()));
  return out;
}

/// N draws of mu: X ~ U[0, 1], then an arcsine point on the frozen interval at X.
inline PointCloud mu_sample(const TridiagonalSymbol& sym, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("mu_sample needs count >= 1");
  RandomStream rng(seed, "limit-measure");
  PointCloud out;
  out.points.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const double x = rng.uniform();
    const double u = rng.uniform();
    const FrozenSymbol f = sym.frozen(x);
    out.points.push_back(f.b0 + 2.0 * std::sqrt(f.d0 * f.c0) * std::cos(std::numbers::pi * u));
  }
  return out;
}

/// Default plotting/search window: bounding box of the symbol range, padded by 20%.
inline ComplexRect default_window(const LaurentSymbol& sym, std::size_t nx = 100, std::size_t nt = 256) {
  return ComplexRect::bounding_box(symbol_range(sym, nx, nt)).padded(0.2);
}

inline ComplexRect default_window(const FrozenLaurent& f, std::size_t nt = 1024) {
  PointCloud curve;
  curve.points.reserve(nt);
  for (std::size_t s = 0; s < nt; ++s)
    curve.points.push_back(f(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(nt))));
  return ComplexRect::bounding_box(curve).padded(0.2);
}

/// Roots of sum_k coeffs[k] z^k via eigenvalues of the companion matrix.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == cplx{}) --deg;
  if (deg < 2) return {};
  const std::size_t m = deg - 1;
  const cplx lead = coeffs[m];
  ComplexMatrix comp(m, m);
  for (std::size_t k = 0; k < m; ++k) comp(0, k) = -coeffs[m - 1 - k] / lead;
  for (std::size_t k = 1; k < m; ++k) comp(k, k - 1) = 1.0;
  Spectrum s = eigenvalues(comp);
  if (!s.all_converged()) throw NumericalError("companion eigenvalues did not converge");
  return s.values;
}

/// Drops identically zero outermost coefficients (never below order 0 on either side).
inline FrozenLaurent trimmed(const FrozenLaurent& f) {
  FrozenLaurent g = f;
  while (g.p > 0 && g.coeff(g.p) == cplx{}) {
    g.coeffs.pop_back();
    --g.p;
  }
  while (g.q > 0 && g.coeff(-g.q) == cplx{}) {
    g.coeffs.erase(g.coeffs.begin());
    --g.q;
  }
  return g;
}

struct SchmidtSpitzerSet {
  PointCloud points;
  std::size_t skipped = 0;  // grid points with a degenerate polynomial or root failure
  ComplexRect window{};
  std::size_t grid_re = 0, grid_im = 0;

  double cell_diagonal() const {
    return std::hypot(window.width() / static_cast<double>(grid_re - 1), window.height() / static_cast<double>(grid_im - 1));
  }
};

/// Grid approximation of {lambda : |z_q(lambda)| = |z_{q+1}(lambda)|}, where z_1..z_{p+q}
/// are the roots of z^q (a(z) - lambda) in ascending modulus.  Grid nodes include the
/// window edges; a node is retained when (|z_{q+1}| - |z_q|) / |z_{q+1}| < tol.
inline SchmidtSpitzerSet schmidt_spitzer_set(const FrozenLaurent& f, const ComplexRect& window,
                                             std::size_t grid_re = 400, std::size_t grid_im = 400,
                                             double tol = 0.02) {
  if (f.p < 1 || f.q < 1) throw ConfigError("schmidt_spitzer_set needs p, q >= 1");
  if (grid_re < 2 || grid_im < 2) throw ConfigError("schmidt_spitzer_set needs at least a 2x2 grid");
  SchmidtSpitzerSet out;
  out.window = window;
  out.grid_re = grid_re;
  out.grid_im = grid_im;
  // Vanishing outer coefficients shrink the band; the set is defined by the effective orders.
  const FrozenLaurent g = trimmed(f);
  const auto q = static_cast<std::size_t>(g.q);
  // z^q (a(z) - lambda) = sum_j a_j z^{j+q} - lambda z^q.
  std::vector<cplx> poly(g.coeffs);
  const bool degenerate = g.p < 1 || g.q < 1;
  for (std::size_t r = 0; r < grid_re; ++r) {
    const double re = window.re_min + window.width() * static_cast<double>(r) / static_cast<double>(grid_re - 1);
    for (std::size_t s = 0; s < grid_im; ++s) {
      const double im = window.im_min + window.height() * static_cast<double>(s) / static_cast<double>(grid_im - 1);
      if (degenerate) {
        ++out.skipped;
        continue;
      }
      const cplx lambda(re, im);
      poly[q] = g.coeffs[q] - lambda;
      std::vector<cplx> roots;
      try {
        roots = polynomial_roots(poly);
      } catch (const NumericalError&) {
        ++out.skipped;
        continue;
      }
      std::vector<double> mod(roots.size());
      std::transform(roots.begin(), roots.end(), mod.begin(), [](cplx z) { return std::abs(z); });
      std::sort(mod.begin(), mod.end());
      const double upper = mod[q], lower = mod[q - 1];
      const double gap = upper == 0.0 ? 0.0 : (upper - lower) / upper;
      if (gap < tol) out.points.points.push_back(lambda);
    }
  }
  return out;
}

/// Eigenvalues of the m x m Toeplitz matrix of a frozen symbol.
inline PointCloud frozen_esm(const FrozenLaurent& f, std::size_t m = 300, const EigenOptions& opts = {}) {
  const Spectrum s = eigenvalues(build_toeplitz(f, m), opts);
  if (!s.all_converged())
    throw NumericalError("frozen Toeplitz eigensolve left " + std::to_string(s.unconverged_count()) +
                         " eigenvalue(s) unconverged");
  return PointCloud{s.values};
}

}  // namespace ttz
