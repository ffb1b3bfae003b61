// Continuant recurrences and logarithmic potentials of tridiagonal matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ttz/banded.hpp"
#include "ttz/errors.hpp"
#include "ttz/symbol.hpp"

namespace ttz {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Roots of c0 l^2 + (b0 - z) l + d0 = 0, larger modulus first.
struct RootPair {
  cplx large{};
  cplx small{};
};

inline RootPair frozen_roots(const FrozenSymbol& f, cplx z) {
  if (f.c0 == cplx{}) throw DomainError("frozen_roots needs c0 != 0");
  const cplx sum = (z - f.b0) / f.c0;
  const cplx product = f.d0 / f.c0;
  const cplx disc = std::sqrt(sum * sum - 4.0 * product);
  const cplx r1 = 0.5 * (sum + disc);
  const cplx r2 = 0.5 * (sum - disc);
  const cplx big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
  // Vieta for the small root avoids cancellation.
  const cplx small = big == cplx{} ? cplx{} : product / big;
  return {big, small};
}

/// gamma(z) = log|c0| + log max(|xi1|, |xi2|); log|z - b0| when c0 d0 = 0.
inline double frozen_gamma(const FrozenSymbol& f, cplx z) {
  if (f.c0 == cplx{} || f.d0 == cplx{}) {
    const double r = std::abs(z - f.b0);
    return r == 0.0 ? kNegInf : std::log(r);
  }
  const double big = std::abs(frozen_roots(f, z).large);
  return big == 0.0 ? kNegInf : std::log(std::abs(f.c0)) + std::log(big);
}

/// Logarithmic potential of the arcsine law on [b - 2 sqrt(dc), b + 2 sqrt(dc)]:
/// log|zeta + sqrt(zeta^2 - w^2)| - log 2 with zeta = z - b, w = 2 sqrt(dc), sign of
/// the root chosen to maximize the modulus.
inline double arcsine_log_potential(const FrozenSymbol& f, cplx z) {
  const cplx zeta = z - f.b0;
  const cplx w2 = 4.0 * f.d0 * f.c0;
  const cplx root = std::sqrt(zeta * zeta - w2);
  const double m = std::max(std::abs(zeta + root), std::abs(zeta - root));
  return m == 0.0 ? kNegInf : std::log(m) - std::numbers::ln2;
}

inline double gamma_field(const TridiagonalSymbol& sym, double x, cplx z) { return frozen_gamma(sym.frozen(x), z); }

/// Composite Simpson rule for t -> gamma(t, z) on [0, 1].  Odd node counts use
/// plain Simpson; even counts >= 4 finish with a 3/8 panel; 2 nodes is a trapezoid.
inline double integrated_gamma(const TridiagonalSymbol& sym, cplx z, std::size_t nodes = 401) {
  if (nodes < 2) throw ConfigError("integrated_gamma needs at least 2 nodes");
  const std::size_t intervals = nodes - 1;
  const double h = 1.0 / static_cast<double>(intervals);
  std::vector<double> g(nodes);
  for (std::size_t r = 0; r < nodes; ++r) {
    g[r] = gamma_field(sym, static_cast<double>(r) * h, z);
    if (g[r] == kNegInf) return kNegInf;
  }
  if (intervals == 1) return 0.5 * h * (g[0] + g[1]);
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  for (std::size_t r = 0; r + 2 <= simpson_end; r += 2) sum += h / 3.0 * (g[r] + 4.0 * g[r + 1] + g[r + 2]);
  if (simpson_end != intervals) {
    const std::size_t r = simpson_end;
    sum += 3.0 * h / 8.0 * (g[r] + 3.0 * g[r + 1] + 3.0 * g[r + 2] + g[r + 3]);
  }
  return sum;
}

/// (k/n) sum_{j=1}^{floor(n/k)} gamma(jk/n, z): the block Riemann sum.
inline double block_gamma_sum(const TridiagonalSymbol& sym, std::size_t n, std::size_t k, cplx z) {
  const std::size_t m = n / k;
  double sum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) sum += gamma_field(sym, static_cast<double>(j * k) / static_cast<double>(n), z);
  return static_cast<double>(k) / static_cast<double>(n) * sum;
}

// ---------------------------------------------------------------------------
// Continuants D_k(z) = det(z I_k - M_k) of the leading principal blocks.

/// Normalized continuant states: (D_k, D_{k-1}) = e^{log_scale[k]} (u[k], v[k]),
/// max(|u[k]|, |v[k]|) = 1 while the state is nonzero.  Index 0 is (D_0, D_{-1}) = (1, 0).
struct ContinuantTrace {
  std::vector<cplx> u;
  std::vector<cplx> v;
  std::vector<double> log_scale;
  std::vector<double> growth;  // |state_k| / |state_{k-1}| before renormalization

  std::size_t steps() const { return u.empty() ? 0 : u.size() - 1; }

  /// log|D_n|, -infinity for an exact zero.
  double log_abs() const {
    const cplx last = u.back();
    return last == cplx{} ? kNegInf : log_scale.back() + std::log(std::abs(last));
  }
};

/// log|det| together with the unit phase of the determinant.
struct LogDet {
  double log_abs = 0.0;
  cplx phase{1.0, 0.0};

  bool is_zero() const { return log_abs == kNegInf; }
};

namespace detail {

inline void require_tridiagonal(const BandedComplexMatrix& m) {
  if (!m.is_tridiagonal()) throw ConfigError("continuant recurrence needs a tridiagonal matrix");
}

inline cplx tri_entry(const BandedComplexMatrix& m, int offset, std::size_t s) {
  if (offset < -m.lower() || offset > m.upper()) return {};
  return m.diagonal(offset)[s];
}

// Runs the rescaled recurrence; visit(k, u, v, log_scale, growth) after each step.
template <class Visit>
LogDet run_continuant(const BandedComplexMatrix& m, cplx z, Visit&& visit) {
  require_tridiagonal(m);
  const std::size_t n = m.size();
  cplx u(1.0, 0.0), v{};
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx coupling = k == 0 ? cplx{} : tri_entry(m, -1, k - 1) * tri_entry(m, 1, k - 1);
    const cplx next = (z - m.diagonal(0)[k]) * u - coupling * v;
    v = u;
    u = next;
    const double mag = std::max(std::abs(u), std::abs(v));
    if (mag == 0.0) {
      // Two consecutive zero continuants: every later one vanishes too.
      for (std::size_t r = k; r < n; ++r) visit(r + 1, cplx{}, cplx{}, scale, 0.0);
      return {kNegInf, cplx{}};
    }
    u /= mag;
    v /= mag;
    scale += std::log(mag);
    visit(k + 1, u, v, scale, mag);
  }
  if (u == cplx{}) return {kNegInf, cplx{}};
  return {scale + std::log(std::abs(u)), u / std::abs(u)};
}

}  // namespace detail

inline ContinuantTrace continuant_trace(const BandedComplexMatrix& m, cplx z) {
  ContinuantTrace t;
  const std::size_t n = m.size();
  t.u.reserve(n + 1);
  t.v.reserve(n + 1);
  t.log_scale.reserve(n + 1);
  t.growth.reserve(n);
  t.u.push_back({1.0, 0.0});
  t.v.push_back({});
  t.log_scale.push_back(0.0);
  detail::run_continuant(m, z, [&](std::size_t, cplx u, cplx v, double s, double g) {
    t.u.push_back(u);
    t.v.push_back(v);
    t.log_scale.push_back(s);
    t.growth.push_back(g);
  });
  return t;
}

/// log|det(z I - M)| = log|det(M - z I)| in O(n) for tridiagonal M.
inline double continuant_log_det(const BandedComplexMatrix& m, cplx z) {
  return detail::run_continuant(m, z, [](auto&&...) {}).log_abs;
}

/// det(M - z I) in log-magnitude/phase form.
inline LogDet continuant_det(const BandedComplexMatrix& m, cplx z) {
  LogDet d = detail::run_continuant(m, z, [](auto&&...) {});
  if (m.size() % 2 == 1) d.phase = -d.phase;
  return d;
}

// ---------------------------------------------------------------------------
// Transfer-matrix cone diagnostics.

struct ConeReport {
  cplx xi1{}, xi2{};
  double rho = 0.0;            // |xi1|
  double eta = 0.0;            // |xi2|
  double delta_hat = 0.0;      // max_k max_ij |E_k(i, j)|
  std::vector<double> ratios;  // |u_k| / |u_{k-1}|, k = 1..n
  std::vector<bool> in_cone;   // |v_k| <= |u_k|
  bool hypothesis_holds = false;  // delta_hat < min(rho / 4, (rho - eta) / 4)
  bool cone_preserved = false;
  bool ratios_within_bounds = false;  // every ratio in [rho - 2 delta_hat, rho + 2 delta_hat]

  bool bound_violation() const { return !(cone_preserved && ratios_within_bounds); }
};

/// Runs Y_k = S^{-1} A_k S Y_{k-1} for the tridiagonal matrix M relative to the
/// frozen symbol f, where A_k is the normalized transfer matrix of M and S
/// diagonalizes the frozen transfer matrix.  A_k uses c_n := c0 at the last step.
inline ConeReport cone_diagnostics(const BandedComplexMatrix& m, const FrozenSymbol& f, cplx z) {
  detail::require_tridiagonal(m);
  if (f.c0 == cplx{}) throw DomainError("cone diagnostics need c0 != 0");
  const RootPair roots = frozen_roots(f, z);
  ConeReport rep;
  rep.xi1 = roots.large;
  rep.xi2 = roots.small;
  rep.rho = std::abs(roots.large);
  rep.eta = std::abs(roots.small);
  if (rep.rho - rep.eta <= 1e-12 * rep.rho) {
    throw NumericalError("z lies on the equal-modulus curve |xi1(z)| = |xi2(z)|; cone diagnostics undefined");
  }
  const cplx xi1 = rep.xi1, xi2 = rep.xi2, det_s = xi1 - xi2;
  // Frozen transfer matrix A = [[(z - b0)/c0, -d0/c0], [1, 0]].
  const cplx a11 = (z - f.b0) / f.c0, a12 = -f.d0 / f.c0;

  const std::size_t n = m.size();
  cplx u = 1.0 / det_s, v = -1.0 / det_s;
  rep.ratios.reserve(n);
  rep.in_cone.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx bk = m.diagonal(0)[k];
    const cplx ck = k + 1 < n ? detail::tri_entry(m, 1, k) : f.c0;
    const cplx dk = k > 0 ? detail::tri_entry(m, -1, k - 1) : f.d0;
    // Delta = A_k - A (second row is identical).
    const cplx g11 = (z - bk) / ck - a11;
    const cplx g12 = -dk / ck - a12;
    // E = S^{-1} Delta S with S = [[xi1, xi2], [1, 1]], S^{-1} = [[1, -xi2], [-1, xi1]] / det_s.
    const cplx ds1 = g11 * xi1 + g12, ds2 = g11 * xi2 + g12;  // first row of Delta S
    const cplx e11 = ds1 / det_s, e12 = ds2 / det_s;
    const cplx e21 = -ds1 / det_s, e22 = -ds2 / det_s;
    rep.delta_hat = std::max({rep.delta_hat, std::abs(e11), std::abs(e12), std::abs(e21), std::abs(e22)});

    const cplx nu = (xi1 + e11) * u + e12 * v;
    const cplx nv = e21 * u + (xi2 + e22) * v;
    rep.ratios.push_back(std::abs(nu) / std::abs(u));
    rep.in_cone.push_back(std::abs(nv) <= std::abs(nu));
    const double mag = std::max(std::abs(nu), std::abs(nv));
    if (mag == 0.0) break;
    u = nu / mag;
    v = nv / mag;
  }
  rep.hypothesis_holds = rep.delta_hat < std::min(rep.rho / 4.0, (rep.rho - rep.eta) / 4.0);
  rep.cone_preserved = std::all_of(rep.in_cone.begin(), rep.in_cone.end(), [](bool b) { return b; });
  const double lo = rep.rho - 2.0 * rep.delta_hat, hi = rep.rho + 2.0 * rep.delta_hat;
  // Relative slack of a few ulps for the unperturbed case, where ratio == rho up to rounding.
  const double slack = 1e-12 * rep.rho;
  rep.ratios_within_bounds = std::all_of(rep.ratios.begin(), rep.ratios.end(),
                                         [&](double r) { return r >= lo - slack && r <= hi + slack; });
  return rep;
}

// ---------------------------------------------------------------------------
// Interface ratio of adjacent frozen blocks.

struct SigmaScreen {
  double min_modulus_gap = 0.0;  // min_x ||xi1| - |xi2||
  double min_unit_square = 0.0;  // min_x |xi1^2 - 1|

  bool accepted(double tol = 1e-3) const { return min_modulus_gap > tol && min_unit_square > tol; }
};

/// Grid screen of z against the exceptional set where |xi1(x,z)| = |xi2(x,z)|
/// or xi1(x,z)^2 = 1 for some x in [0, 1].
inline SigmaScreen sigma_screen(const TridiagonalSymbol& sym, cplx z, std::size_t grid = 401) {
  SigmaScreen s{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t r = 0; r < grid; ++r) {
    const FrozenSymbol f = sym.frozen(static_cast<double>(r) / static_cast<double>(grid - 1));
    if (f.c0 == cplx{}) return {0.0, 0.0};
    const RootPair roots = frozen_roots(f, z);
    s.min_modulus_gap = std::min(s.min_modulus_gap, std::abs(std::abs(roots.large) - std::abs(roots.small)));
    s.min_unit_square = std::min(s.min_unit_square, std::abs(roots.large * roots.large - 1.0));
  }
  return s;
}

struct ThetaRatio {
  cplx theta{};
  cplx predicted{};  // xi1(jk/n, z)^{-2}
  double x = 0.0;    // jk/n
};

/// Theta_k^{(j)}(z) = c d det(R_{k-1}^{(j)} - z) det(R_k^{(j+1)'} - z) / (det(R_k^{(j)} - z) det(R_k^{(j+1)} - z))
/// with c, d evaluated at jk/n, blocks taken from the tridiagonal matrix m (1-based block index j).
inline ThetaRatio theta_ratio(const TridiagonalSymbol& sym, const BandedComplexMatrix& m, std::size_t k,
                              std::size_t j, cplx z, double sigma_tol = 1e-3) {
  detail::require_tridiagonal(m);
  const std::size_t n = m.size();
  if (k < 1 || j < 1 || n / k < 2 || j > n / k - 1) throw ConfigError("theta_ratio needs 1 <= j <= n/k - 1");
  if (!sigma_screen(sym, z).accepted(sigma_tol))
    throw NumericalError("z is on (or within the screening tolerance of) the exceptional set; choose another z");

  const std::size_t first = (j - 1) * k;
  const LogDet leading = continuant_det(m.principal_block(first, k - 1), z);
  const LogDet block_j = continuant_det(m.principal_block(first, k), z);
  const LogDet block_next = continuant_det(m.principal_block(first + k, k), z);
  const LogDet trailing = continuant_det(m.principal_block(first + k + 1, k - 1), z);
  if (block_j.is_zero() || block_next.is_zero())
    throw NumericalError("z is an eigenvalue of a frozen block; perturb z slightly");

  ThetaRatio out;
  out.x = static_cast<double>(j * k) / static_cast<double>(n);
  const FrozenSymbol f = sym.frozen(out.x);
  const cplx cd = f.c0 * f.d0;
  if (leading.is_zero() || trailing.is_zero() || cd == cplx{}) {
    out.theta = {};
  } else {
    const double log_mag = std::log(std::abs(cd)) + leading.log_abs + trailing.log_abs - block_j.log_abs -
                           block_next.log_abs;
    const cplx phase = cd / std::abs(cd) * leading.phase * trailing.phase / (block_j.phase * block_next.phase);
    out.theta = std::exp(log_mag) * phase;
  }
  const cplx xi1 = frozen_roots(f, z).large;
  out.predicted = 1.0 / (xi1 * xi1);
  return out;
}

}  // namespace ttz
