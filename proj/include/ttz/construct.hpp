// Twisted Toeplitz builders: deterministic T_n(a), structured perturbations
// T_n(a) + sigma X_n, and matrices sampled at random (sorted uniform) points.
//
// Index convention: entry (i, k), 1-based, is a_{k-i}(min(i, k) / n).  The
// superdiagonal carries the coefficient of z and the subdiagonal the
// coefficient of z^{-1}.  This is the transpose of the other common reading
// (a_{i-k}); spectra are identical under transposition.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ttz/banded.hpp"
#include "ttz/errors.hpp"
#include "ttz/rng.hpp"
#include "ttz/symbol.hpp"

namespace ttz {

enum class NoiseKind { PaperBinomial, StandardNormal, Rademacher, UniformSym };

/// Distribution of the i.i.d. band entries of the perturbation matrix.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::PaperBinomial;
  int trials = 512;           // paper-binomial: Binomial(trials, 1/2) - center
  double center = 256.0;
  double half_width = 1.0;    // uniform-sym: Uniform[-half_width, half_width]
  bool complex_valued = false;

  static NoiseSpec parse(std::string_view tag) {
    NoiseSpec spec;
    if (tag == "paper-binomial") spec.kind = NoiseKind::PaperBinomial;
    else if (tag == "standard-normal") spec.kind = NoiseKind::StandardNormal;
    else if (tag == "rademacher") spec.kind = NoiseKind::Rademacher;
    else if (tag == "uniform-sym") spec.kind = NoiseKind::UniformSym;
    else throw ConfigError("unknown noise distribution '" + std::string(tag) + "'");
    return spec;
  }

  std::string tag() const {
    switch (kind) {
      case NoiseKind::PaperBinomial: return "paper-binomial";
      case NoiseKind::StandardNormal: return "standard-normal";
      case NoiseKind::Rademacher: return "rademacher";
      case NoiseKind::UniformSym: return "uniform-sym";
    }
    return "?";
  }

  /// Mean of one real draw (zero for every preset at default parameters).
  double mean() const {
    return kind == NoiseKind::PaperBinomial ? 0.5 * trials - center : 0.0;
  }

  /// Variance of the real variate (complex draws split it evenly between parts).
  double variance() const {
    switch (kind) {
      case NoiseKind::PaperBinomial: return 0.25 * trials;
      case NoiseKind::StandardNormal:
      case NoiseKind::Rademacher: return 1.0;
      case NoiseKind::UniformSym: return half_width * half_width / 3.0;
    }
    return 0.0;
  }

  double draw_real(RandomStream& rng) const {
    switch (kind) {
      case NoiseKind::PaperBinomial: return rng.binomial_half(trials) - center;
      case NoiseKind::StandardNormal: return rng.normal();
      case NoiseKind::Rademacher: return rng.rademacher();
      case NoiseKind::UniformSym: return half_width * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
  }

  cplx draw(RandomStream& rng) const {
    if (!complex_valued) return {draw_real(rng), 0.0};
    const double re = draw_real(rng);
    const double im = draw_real(rng);
    return cplx(re, im) * std::sqrt(0.5);
  }
};

/// sigma_n: either a literal or the token "1/n" resolved at build time.
struct SigmaSpec {
  bool inverse_n = true;
  double value = 0.0;

  static SigmaSpec parse(std::string_view text) {
    if (text == "1/n") return {true, 0.0};
    try {
      std::size_t used = 0;
      const double v = std::stod(std::string(text), &used);
      if (used != text.size() || !(v >= 0.0) || !std::isfinite(v)) throw ConfigError("");
      return {false, v};
    } catch (const std::exception&) {
      throw ConfigError("sigma must be a non-negative number or \"1/n\", got '" + std::string(text) + "'");
    }
  }

  double resolve(std::size_t n) const { return inverse_n ? 1.0 / static_cast<double>(n) : value; }

  std::string str() const { return inverse_n ? "1/n" : detail::format_number(value); }
};

/// Sorted uniform sample x_{1,n} <= ... <= x_{n,n}.
struct SamplingPoints {
  std::vector<double> x;
  std::uint64_t seed = 0;
};

/// Frozen-block size floor(sqrt(n)): o(n), unbounded, and k sigma_n^2 -> 0 for sigma_n = 1/n.
inline std::size_t frozen_block_size(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
}

namespace detail {

template <class PointAt>
BandedComplexMatrix build_sampled(const LaurentSymbol& sym, std::size_t n, PointAt&& point_at) {
  if (n < 1) throw ConfigError("matrix dimension must be >= 1");
  BandedComplexMatrix m(n, sym.lower(), sym.upper());
  for (int j = -sym.lower(); j <= sym.upper(); ++j) {
    const Expr* coeff = sym.coefficient_expr(j);
    if (!coeff) continue;
    auto& diag = m.diagonal(j);
    // Element s of diagonal j sits at (i, k) with min(i, k) = s (0-based).
    for (std::size_t s = 0; s < diag.size(); ++s) diag[s] = (*coeff)(point_at(s));
  }
  return m;
}

}  // namespace detail

inline BandedComplexMatrix build_twisted(const LaurentSymbol& sym, std::size_t n) {
  const double dn = static_cast<double>(n);
  return detail::build_sampled(sym, n, [dn](std::size_t s) { return static_cast<double>(s + 1) / dn; });
}

/// Plain Toeplitz matrix of a constant banded symbol.
inline BandedComplexMatrix build_toeplitz(const FrozenLaurent& f, std::size_t m) {
  if (m < 1) throw ConfigError("matrix dimension must be >= 1");
  BandedComplexMatrix out(m, f.q, f.p);
  for (int j = -f.q; j <= f.p; ++j) std::fill(out.diagonal(j).begin(), out.diagonal(j).end(), f.coeff(j));
  return out;
}

inline BandedComplexMatrix build_toeplitz(const FrozenSymbol& f, std::size_t m) {
  return build_toeplitz(FrozenLaurent{1, 1, {f.d0, f.b0, f.c0}}, m);
}

/// Adds sigma times i.i.d. noise to every stored band entry.  Draw order:
/// diagonals from offset -q to p, entries in increasing row order.
inline BandedComplexMatrix add_band_noise(BandedComplexMatrix m, double sigma, const NoiseSpec& noise,
                                          std::uint64_t seed) {
  if (sigma == 0.0) return m;
  RandomStream rng(seed, "perturbation");
  for (int j = -m.lower(); j <= m.upper(); ++j)
    for (cplx& v : m.diagonal(j)) v += sigma * noise.draw(rng);
  return m;
}

inline BandedComplexMatrix build_perturbed(const LaurentSymbol& sym, std::size_t n, double sigma,
                                           const NoiseSpec& noise, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  return add_band_noise(build_twisted(sym, n), sigma, noise, seed);
}

inline SamplingPoints sample_order_statistics(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("need at least one sampling point");
  RandomStream rng(seed, "sampling-points");
  SamplingPoints out;
  out.seed = seed;
  out.x.resize(n);
  for (double& v : out.x) v = rng.uniform();
  std::sort(out.x.begin(), out.x.end());
  return out;
}

inline BandedComplexMatrix build_randomized(const LaurentSymbol& sym, const SamplingPoints& points) {
  return detail::build_sampled(sym, points.x.size(), [&](std::size_t s) { return points.x[s]; });
}

inline BandedComplexMatrix build_randomized(const LaurentSymbol& sym, std::size_t n, std::uint64_t seed) {
  return build_randomized(sym, sample_order_statistics(n, seed));
}

/// sup_t |F_n(t) - t| for a sorted sample on [0, 1].
inline double uniform_ks_deviation(const std::vector<double>& sorted) {
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    const double t = sorted[r];
    worst = std::max({worst, static_cast<double>(r + 1) / n - t, t - static_cast<double>(r) / n});
  }
  return worst;
}

}  // namespace ttz
