// Non-Hermitian eigenvalues and determinants.
//
// eigenvalues(): optional diagonal balancing, Householder
// reduction to upper Hessenberg form, then complex single-shift QR with
// Wilkinson shifts and deflation on
//     |h(i+1,i)| <= eps * (|h(i,i)| + |h(i+1,i+1)|).
// An exceptional shift is used every 10 iterations without deflation and the
// total iteration count is capped at 30 n; eigenvalues still undeflated at the
// cap are returned with converged = false.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "ttz/banded.hpp"
#include "ttz/errors.hpp"

namespace ttz {

struct HessenbergMatrix {
  ComplexMatrix h;  // zero below the first subdiagonal
};

struct Spectrum {
  std::vector<cplx> values;
  std::vector<bool> converged;
  std::size_t iterations = 0;

  std::size_t size() const { return values.size(); }
  bool all_converged() const { return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; }); }
  std::size_t unconverged_count() const {
    return static_cast<std::size_t>(std::count(converged.begin(), converged.end(), false));
  }
  cplx sum() const { return std::accumulate(values.begin(), values.end(), cplx{}); }
};

struct EigenOptions {
  bool balance = true;
  int max_balance_sweeps = 200;
};

namespace detail {

inline cplx scale2(cplx v, int e) { return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)}; }

// Multiplies by 2^e; exact when e is an integer.
inline cplx scale2(cplx v, double e) {
  const double r = std::round(e);
  if (r == e && std::abs(r) < 2000.0) return scale2(v, static_cast<int>(r));
  return v * std::exp2(e);
}

// One gebal-style update: returns the power-of-two exponent t such that scaling
// column i by 2^t and row i by 2^-t brings the two norms closer, or 0 when the
// gain would be under 5%.
inline int balance_step(double col, double row) {
  if (col == 0.0 || row == 0.0 || !std::isfinite(col) || !std::isfinite(row)) return 0;
  const double s = col + row;
  int t = 0;
  double c = col, r = row;
  while (c < r / 2.0 && t < 1000) {
    c *= 2.0;
    r /= 2.0;
    ++t;
  }
  while (c / 2.0 >= r && t > -1000) {
    c /= 2.0;
    r *= 2.0;
    --t;
  }
  if (c + r >= 0.95 * s) return 0;
  return t;
}

}  // namespace detail

/// log r minimizing the Frobenius norm of D A D^{-1} over geometric scalings
/// D = diag(r^i), i.e. the root of sum_j j W_j r^{2j} with W_j the squared
/// norm of diagonal j.  Returns 0 when the band is one-sided.
inline double geometric_log_ratio(const BandedComplexMatrix& m) {
  std::vector<std::pair<int, double>> w;
  bool below = false, above = false;
  for (int j = -m.lower(); j <= m.upper(); ++j) {
    if (j == 0) continue;
    double s = 0.0;
    for (const cplx& v : m.diagonal(j)) s += std::norm(v);
    if (s == 0.0 || !std::isfinite(s)) continue;
    w.emplace_back(j, s);
    (j < 0 ? below : above) = true;
  }
  if (!below || !above) return 0.0;
  // Derivative of the (convex) objective in t = log r, scaled to avoid overflow.
  auto slope = [&](double t) {
    double acc = 0.0;
    for (const auto& [j, s] : w) acc += j * s * std::exp(2.0 * j * t);
    return acc;
  };
  double lo = -1.0, hi = 1.0;
  while (slope(lo) > 0.0 && lo > -40.0) lo *= 2.0;
  while (slope(hi) < 0.0 && hi < 40.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exponents e_i such that entry (i, k) becomes a_ik * 2^(e_k - e_i).  For
/// tridiagonal matrices the start equalizes |a(i,i+1)| and |a(i+1,i)| with
/// integer exponents; wider bands start from the Frobenius-optimal geometric
/// scaling r^i, which is generally not a power of two.  Row/column-norm sweeps
/// then refine by integer steps.
inline std::vector<double> balancing_exponents(const BandedComplexMatrix& m, int max_sweeps = 200) {
  const std::size_t n = m.size();
  std::vector<double> e(n, 0.0);
  if (n < 2) return e;
  if (!m.is_tridiagonal() && m.lower() >= 1 && m.upper() >= 1) {
    // Row i is scaled by r^{-i}, column k by r^k: entry (i, k) picks up r^{k - i}.
    const double step = geometric_log_ratio(m) / std::numbers::ln2;
    const double mid = step * static_cast<double>(n / 2);
    for (std::size_t i = 0; i < n; ++i) e[i] = step * static_cast<double>(i) - mid;
  } else if (m.lower() >= 1 && m.upper() >= 1) {
    const auto& sup = m.diagonal(1);
    const auto& sub = m.diagonal(-1);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double a = std::abs(sup[i]);
      const double b = std::abs(sub[i]);
      if (a > 0.0 && b > 0.0) acc += 0.5 * std::log2(b / a);
      e[i + 1] = static_cast<double>(std::lround(acc));
    }
    const double mid = e[n / 2];
    for (double& v : e) v -= mid;
  }

  const int q = m.lower(), p = m.upper();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double col = 0.0, row = 0.0;
      for (int j = -q; j <= p; ++j) {
        if (j == 0) continue;
        const long k = static_cast<long>(i) + j;
        if (k < 0 || k >= static_cast<long>(n)) continue;
        const auto ku = static_cast<std::size_t>(k);
        row += std::norm(detail::scale2(m(i, ku), e[ku] - e[i]));
        col += std::norm(detail::scale2(m(ku, i), e[i] - e[ku]));
      }
      const int t = detail::balance_step(std::sqrt(col), std::sqrt(row));
      if (t != 0) {
        e[i] += t;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return e;
}

inline BandedComplexMatrix apply_balancing(const BandedComplexMatrix& m, const std::vector<double>& e) {
  BandedComplexMatrix out = m;
  for (int j = -m.lower(); j <= m.upper(); ++j) {
    if (j == 0) continue;
    auto& d = out.diagonal(j);
    for (std::size_t s = 0; s < d.size(); ++s) {
      const std::size_t i = j < 0 ? s + static_cast<std::size_t>(-j) : s;
      const std::size_t k = static_cast<std::size_t>(static_cast<long>(i) + j);
      d[s] = detail::scale2(d[s], e[k] - e[i]);
    }
  }
  return out;
}

/// Diagonal similarity D A D^{-1} with the exponents above.
inline BandedComplexMatrix balance(const BandedComplexMatrix& m, int max_sweeps = 200) {
  return apply_balancing(m, balancing_exponents(m, max_sweeps));
}

/// Dense counterpart of balance() (row/column-norm sweeps only).
inline ComplexMatrix balance(ComplexMatrix a, int max_sweeps = 200) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      double col = 0.0, row = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        col += std::norm(a(k, i));
        row += std::norm(a(i, k));
      }
      const int t = detail::balance_step(std::sqrt(col), std::sqrt(row));
      if (t == 0) continue;
      changed = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        a(k, i) = detail::scale2(a(k, i), t);
        a(i, k) = detail::scale2(a(i, k), -t);
      }
    }
    if (!changed) break;
  }
  return a;
}

/// Unitary similarity to upper Hessenberg form via Householder reflectors.
/// Columns whose below-subdiagonal part is already zero are left untouched,
/// so Hessenberg (in particular tridiagonal) input passes through unchanged.
inline HessenbergMatrix hessenberg_reduce(ComplexMatrix a) {
  if (!a.square()) throw std::invalid_argument("hessenberg_reduce needs a square matrix");
  const std::size_t n = a.rows();
  std::vector<cplx> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const cplx phase = std::abs(x0) == 0.0 ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;
    // v = x - alpha e1, normalized; reflector I - 2 v v^H maps x to alpha e1.
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // Left: rows k+1.., columns k..
    std::fill(w.begin() + static_cast<long>(k), w.end(), cplx{});
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx cv = std::conj(v[i]);
      const cplx* row = a.row(i);
      for (std::size_t j = k; j < n; ++j) w[j] += cv * row[j];
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = 2.0 * v[i];
      cplx* row = a.row(i);
      for (std::size_t j = k; j < n; ++j) row[j] -= f * w[j];
    }
    // Right: all rows, columns k+1..
    for (std::size_t i = 0; i < n; ++i) {
      cplx* row = a.row(i);
      cplx s{};
      for (std::size_t j = k + 1; j < n; ++j) s += row[j] * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cplx{};
  }
  return {std::move(a)};
}

inline HessenbergMatrix hessenberg_reduce(const BandedComplexMatrix& m) { return hessenberg_reduce(m.dense()); }

/// Eigenvalues of an upper Hessenberg matrix (destroys its argument).
inline Spectrum hessenberg_eigenvalues(ComplexMatrix h) {
  const long n = static_cast<long>(h.rows());
  Spectrum spec;
  spec.values.assign(static_cast<std::size_t>(n), cplx{});
  spec.converged.assign(static_cast<std::size_t>(n), false);
  if (n == 0) return spec;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  const std::size_t cap = 30 * static_cast<std::size_t>(n);
  auto H = [&h](long i, long j) -> cplx& { return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  long hi = n - 1;
  int its = 0;
  while (hi >= 0) {
    long l = hi;
    for (; l > 0; --l) {
      const double sub = std::abs(H(l, l - 1));
      double tst = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (tst == 0.0) {
        if (l - 2 >= 0) tst += std::abs(H(l - 1, l - 2));
        if (l + 1 <= hi) tst += std::abs(H(l + 1, l));
      }
      if (sub <= eps * tst || sub <= tiny) {
        H(l, l - 1) = cplx{};
        break;
      }
    }
    if (l == hi) {
      spec.values[static_cast<std::size_t>(hi)] = H(hi, hi);
      spec.converged[static_cast<std::size_t>(hi)] = true;
      --hi;
      its = 0;
      continue;
    }
    if (spec.iterations >= cap) {
      for (long k = 0; k <= hi; ++k) spec.values[static_cast<std::size_t>(k)] = H(k, k);
      break;
    }
    ++spec.iterations;
    ++its;

    cplx shift;
    if (its % 10 == 0) {
      // Exceptional shift to break cycles.
      shift = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1).real());
    } else {
      const cplx a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
      const cplx mean = 0.5 * (a + d);
      const cplx half = 0.5 * (a - d);
      const cplx root = std::sqrt(half * half + b * c);
      const cplx l1 = mean + root, l2 = mean - root;
      shift = std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
    }

    // Implicit single-shift QR sweep on the active block [l, hi].
    cplx x = H(l, l) - shift;
    cplx y = H(l + 1, l);
    for (long k = l; k < hi; ++k) {
      if (k > l) {
        x = H(k, k - 1);
        y = H(k + 1, k - 1);
      }
      const double ax = std::abs(x);
      const double r = std::hypot(ax, std::abs(y));
      double c;
      cplx s;
      if (r == 0.0) {
        c = 1.0;
        s = cplx{};
      } else if (ax == 0.0) {
        c = 0.0;
        s = std::conj(y) / std::abs(y);
      } else {
        c = ax / r;
        s = (x / ax) * std::conj(y) / r;
      }
      if (k > l) {
        H(k, k - 1) = c * x + s * y;
        H(k + 1, k - 1) = cplx{};
      }
      cplx* rk = h.row(static_cast<std::size_t>(k));
      cplx* rk1 = h.row(static_cast<std::size_t>(k + 1));
      const cplx sc = std::conj(s);
      for (long j = k; j <= hi; ++j) {
        const cplx a = rk[j], b = rk1[j];
        rk[j] = c * a + s * b;
        rk1[j] = c * b - sc * a;
      }
      const long last = std::min(k + 2, hi);
      for (long i = l; i <= last; ++i) {
        cplx* ri = h.row(static_cast<std::size_t>(i));
        const cplx a = ri[k], b = ri[k + 1];
        ri[k] = c * a + sc * b;
        ri[k + 1] = c * b - s * a;
      }
    }
  }
  return spec;
}

inline Spectrum eigenvalues(const BandedComplexMatrix& m, const EigenOptions& opts = {}) {
  const BandedComplexMatrix work = opts.balance ? balance(m, opts.max_balance_sweeps) : m;
  return hessenberg_eigenvalues(hessenberg_reduce(work).h);
}

/// Band storage of a dense matrix when its nonzeros fit a band narrower than n.
inline std::optional<BandedComplexMatrix> as_banded(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  int q = 0, p = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k) == cplx{}) continue;
      const int off = static_cast<int>(k) - static_cast<int>(i);
      q = std::max(q, -off);
      p = std::max(p, off);
    }
  if (q + p + 1 >= static_cast<int>(n)) return std::nullopt;
  BandedComplexMatrix m(n, q, p);
  for (int j = -q; j <= p; ++j) {
    auto& d = m.diagonal(j);
    for (std::size_t s = 0; s < d.size(); ++s) {
      const std::size_t i = j < 0 ? s + static_cast<std::size_t>(-j) : s;
      d[s] = a(i, static_cast<std::size_t>(static_cast<long>(i) + j));
    }
  }
  return m;
}

inline Spectrum eigenvalues(const ComplexMatrix& a, const EigenOptions& opts = {}) {
  if (!a.square()) throw std::invalid_argument("eigenvalues needs a square matrix");
  if (opts.balance) {
    // Banded input gets the geometric balancing, which norm sweeps alone miss.
    if (auto m = as_banded(a)) return eigenvalues(*m, opts);
  }
  return hessenberg_eigenvalues(hessenberg_reduce(opts.balance ? balance(a, opts.max_balance_sweeps) : a).h);
}

/// log|det(M - z I)| by banded LU with partial pivoting, accumulated in
/// log-magnitude.  Returns -infinity when a pivot column is exactly zero.
inline double log_abs_det(const BandedComplexMatrix& m, cplx z) {
  const std::size_t n = m.size();
  const int q = m.lower(), p = m.upper();
  const std::size_t width = static_cast<std::size_t>(p + 2 * q + 1);
  // Row i keeps columns [i - q, i + p + q] at offset (col - i + q).
  std::vector<cplx> w(n * width, cplx{});
  auto at = [&](std::size_t i, std::size_t col) -> cplx& {
    return w[i * width + static_cast<std::size_t>(static_cast<long>(col) - static_cast<long>(i) + q)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= static_cast<std::size_t>(q) ? i - static_cast<std::size_t>(q) : 0;
    const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(p));
    for (std::size_t k = lo; k <= hi; ++k) at(i, k) = m(i, k);
    at(i, i) -= z;
  }
  double log_det = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + static_cast<std::size_t>(q));
    const std::size_t last_col = std::min(n - 1, k + static_cast<std::size_t>(p + q));
    std::size_t piv = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double v = std::abs(at(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return -std::numeric_limits<double>::infinity();
    if (piv != k)
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(piv, j));
    const cplx pivot = at(k, k);
    log_det += std::log(best);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const cplx f = at(i, k) / pivot;
      if (f == cplx{}) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= f * at(k, j);
      at(i, k) = cplx{};
    }
  }
  return log_det;
}

/// Determinant by dense LU with partial pivoting; the empty matrix has determinant 1.
inline cplx determinant(ComplexMatrix a) {
  if (!a.square()) throw std::invalid_argument("determinant needs a square matrix");
  const std::size_t n = a.rows();
  cplx det(1.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == cplx{}) return cplx{};
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

/// det M det N - x y det M' det N', where M' drops the last row/column of M and
/// N' the first row/column of N.  Equals the determinant of
///   [ M  Y ]
///   [ X  N ]
/// where X is zero except X(0, r-1) = x and Y is zero except Y(r-1, 0) = y.
inline cplx block_det(const ComplexMatrix& m, const ComplexMatrix& nmat, cplx x, cplx y) {
  if (!m.square() || !nmat.square() || m.rows() == 0 || nmat.rows() == 0)
    throw std::invalid_argument("block_det needs non-empty square blocks");
  const cplx main = determinant(m) * determinant(nmat);
  if (x == cplx{} || y == cplx{}) return main;
  const ComplexMatrix m_minor = m.principal(0, m.rows() - 1);
  const ComplexMatrix n_minor = nmat.principal(1, nmat.rows() - 1);
  return main - x * y * determinant(m_minor) * determinant(n_minor);
}

/// Assembled (r+s) x (r+s) matrix of block_det.
inline ComplexMatrix assemble_block(const ComplexMatrix& m, const ComplexMatrix& nmat, cplx x, cplx y) {
  const std::size_t r = m.rows(), s = nmat.rows();
  ComplexMatrix a(r + s, r + s);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) a(i, j) = m(i, j);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) a(r + i, r + j) = nmat(i, j);
  a(r - 1, r) = y;
  a(r, r - 1) = x;
  return a;
}

/// Pairs two multisets by repeatedly matching the globally closest unmatched
/// pair; returns the largest matched distance (infinity on size mismatch).
inline double matched_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& u, const Pair& v) {
    return u.d < v.d || (u.d == v.d && (u.i < v.i || (u.i == v.i && u.j < v.j)));
  });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const Pair& pr : pairs) {
    if (used_a[pr.i] || used_b[pr.j]) continue;
    used_a[pr.i] = used_b[pr.j] = true;
    worst = std::max(worst, pr.d);
    if (++matched == a.size()) break;
  }
  return worst;
}

}  // namespace ttz
