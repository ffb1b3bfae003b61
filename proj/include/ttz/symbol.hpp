// Laurent-polynomial symbols a(x, z) = sum_{j=-q}^{p} a_j(x) z^j with coefficient
// expressions in x, their range curves, and the tridiagonal support set.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ttz/errors.hpp"
#include "ttz/expr.hpp"
#include "ttz/point_cloud.hpp"

namespace ttz {

/// Constant tridiagonal symbol d0 z^{-1} + b0 + c0 z.
struct FrozenSymbol {
  cplx b0{}, c0{}, d0{};
};

/// Constant banded symbol: coeffs[j + q] is the coefficient of z^j.
struct FrozenLaurent {
  int q = 0;
  int p = 0;
  std::vector<cplx> coeffs;

  cplx coeff(int j) const { return (j < -q || j > p) ? cplx{} : coeffs[static_cast<std::size_t>(j + q)]; }

  cplx operator()(cplx z) const {
    cplx sum{};
    for (int j = -q; j <= p; ++j) sum += coeff(j) * detail::integer_power(z, j);
    return sum;
  }
};

class LaurentSymbol {
 public:
  LaurentSymbol() = default;

  /// Builds from (power, expression) pairs.  Powers may repeat (terms add up).
  /// The band is [-q, p] with q = max(0, -min power), p = max(0, max power).
  static LaurentSymbol from_terms(const std::vector<std::pair<int, Expr>>& terms) {
    LaurentSymbol s;
    for (const auto& [power, expr] : terms) {
      auto it = s.coeffs_.find(power);
      if (it == s.coeffs_.end()) {
        s.coeffs_.emplace(power, expr);
      } else {
        it->second = Expr::parse("(" + it->second.to_string() + ")+(" + expr.to_string() + ")");
      }
      s.q_ = std::max(s.q_, -power);
      s.p_ = std::max(s.p_, power);
    }
    if (s.p_ + s.q_ < 1) throw ConfigError("symbol must have at least one off-diagonal power (p + q >= 1)");
    return s;
  }

  static LaurentSymbol from_strings(const std::vector<std::pair<int, std::string>>& terms) {
    std::vector<std::pair<int, Expr>> parsed;
    parsed.reserve(terms.size());
    for (const auto& [power, src] : terms) parsed.emplace_back(power, Expr::parse(src));
    return from_terms(parsed);
  }

  int lower() const { return q_; }
  int upper() const { return p_; }
  bool is_tridiagonal() const { return q_ <= 1 && p_ <= 1; }

  /// Coefficient expression of z^k, or nullptr when identically zero.
  const Expr* coefficient_expr(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? nullptr : &it->second;
  }

  /// Fourier coefficient \hat a_k(x): the coefficient at k inside the band, 0 outside.
  cplx fourier_coefficient(int k, double x) const {
    const Expr* e = coefficient_expr(k);
    return e ? (*e)(x) : cplx{};
  }

  FrozenLaurent frozen(double x) const {
    FrozenLaurent f;
    f.q = q_;
    f.p = p_;
    f.coeffs.resize(static_cast<std::size_t>(p_ + q_ + 1));
    for (int j = -q_; j <= p_; ++j) f.coeffs[static_cast<std::size_t>(j + q_)] = fourier_coefficient(j, x);
    return f;
  }

  cplx operator()(double x, cplx z) const {
    if (z == cplx{}) throw DomainError("Laurent symbol evaluated at z = 0");
    cplx sum{};
    for (const auto& [power, expr] : coeffs_) sum += expr(x) * detail::integer_power(z, power);
    return sum;
  }

  bool depends_on_x() const {
    return std::any_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.depends_on_x(); });
  }

  /// (power, expression source) pairs in increasing power order.
  std::vector<std::pair<int, std::string>> terms() const {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& [power, expr] : coeffs_) out.emplace_back(power, expr.source());
    return out;
  }

 private:
  int q_ = 0;
  int p_ = 0;
  std::map<int, Expr> coeffs_;
};

/// a(x, z) = d(x) z^{-1} + b(x) + c(x) z.
struct TridiagonalSymbol {
  Expr d;
  Expr b;
  Expr c;

  static TridiagonalSymbol parse(const std::string& d, const std::string& b, const std::string& c) {
    return {Expr::parse(d), Expr::parse(b), Expr::parse(c)};
  }

  static TridiagonalSymbol from_laurent(const LaurentSymbol& s) {
    if (!s.is_tridiagonal()) throw ConfigError("symbol is not tridiagonal");
    auto get = [&](int k) {
      const Expr* e = s.coefficient_expr(k);
      return e ? *e : Expr::constant(0.0);
    };
    return {get(-1), get(0), get(1)};
  }

  LaurentSymbol to_laurent() const { return LaurentSymbol::from_terms({{-1, d}, {0, b}, {1, c}}); }

  FrozenSymbol frozen(double x) const { return {b(x), c(x), d(x)}; }
};

/// Segment {center + t * half_width : t in [-1, 1]}.
struct ComplexInterval {
  cplx center{};
  cplx half_width{};

  cplx at(double t) const { return center + t * half_width; }
  cplx lower_end() const { return center - half_width; }
  cplx upper_end() const { return center + half_width; }

  double distance(cplx z) const {
    const double len2 = std::norm(half_width);
    if (len2 == 0.0) return std::abs(z - center);
    const cplx rel = z - center;
    double t = (rel.real() * half_width.real() + rel.imag() * half_width.imag()) / len2;
    t = std::clamp(t, -1.0, 1.0);
    return std::abs(z - at(t));
  }

  /// `count` equispaced points from the lower to the upper end (count >= 1).
  PointCloud sample(std::size_t count) const {
    PointCloud out;
    out.points.reserve(count);
    if (count == 1) {
      out.points.push_back(center);
      return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
      out.points.push_back(at(-1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(count - 1)));
    }
    return out;
  }
};

/// Arcsine-support interval of the frozen tridiagonal symbol: b0 +- 2 sqrt(d0 c0).
inline ComplexInterval frozen_interval(const FrozenSymbol& f) {
  return {f.b0, 2.0 * std::sqrt(f.d0 * f.c0)};
}

inline cplx eval_symbol(const LaurentSymbol& sym, double x, cplx z) { return sym(x, z); }

/// Samples a(r/nx, e^{2 pi i s/nt}) for r = 0..nx, s = 0..nt-1; x-major order.
inline PointCloud symbol_range(const LaurentSymbol& sym, std::size_t nx, std::size_t nt) {
  if (nx < 1 || nt < 1) throw ConfigError("symbol_range needs nx, nt >= 1");
  PointCloud out;
  out.points.reserve((nx + 1) * nt);
  for (std::size_t r = 0; r <= nx; ++r) {
    const FrozenLaurent f = sym.frozen(static_cast<double>(r) / static_cast<double>(nx));
    for (std::size_t s = 0; s < nt; ++s) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(nt);
      out.points.push_back(f(std::polar(1.0, t)));
    }
  }
  return out;
}

/// One interval per grid point x_r = r/nx, r = 0..nx.
inline std::vector<ComplexInterval> xi_support_tridiagonal(const TridiagonalSymbol& sym, std::size_t nx) {
  if (nx < 1) throw ConfigError("xi_support_tridiagonal needs nx >= 1");
  std::vector<ComplexInterval> out;
  out.reserve(nx + 1);
  for (std::size_t r = 0; r <= nx; ++r) {
    out.push_back(frozen_interval(sym.frozen(static_cast<double>(r) / static_cast<double>(nx))));
  }
  return out;
}

/// Union of `per_interval` equispaced samples from each interval.
inline PointCloud sample_intervals(const std::vector<ComplexInterval>& intervals, std::size_t per_interval) {
  PointCloud out;
  out.points.reserve(intervals.size() * per_interval);
  for (const auto& iv : intervals) out.append(iv.sample(per_interval));
  return out;
}

// Named symbols from the reference experiments.
inline LaurentSymbol preset_symbol(const std::string& name) {
  if (name == "fig1") return LaurentSymbol::from_strings({{-1, "i"}, {0, "1-2*x"}, {1, "i/4"}});
  if (name == "fig2") return LaurentSymbol::from_strings({{-1, "i/(x+1)"}, {1, "i/(x^2+100)"}});
  if (name == "ex4") {
    return LaurentSymbol::from_strings(
        {{-1, "i*(1-x/2)"}, {0, "1-x"}, {1, "(i/4)*(1+x)"}, {2, "3/2"}});
  }
  if (name == "ex5") {
    return LaurentSymbol::from_strings({{-2, "-(1/5)*(x+i)"},
                                        {-1, "i*(3/4+x)"},
                                        {0, "(i/3)*x"},
                                        {1, "1-2*x"},
                                        {2, "(x^2-1)/5"}});
  }
  throw ConfigError("unknown symbol preset '" + name + "' (expected fig1, fig2, ex4 or ex5)");
}

}  // namespace ttz
