// Empirical spectral measures and distances between planar point clouds.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ttz/errors.hpp"
#include "ttz/linalg.hpp"
#include "ttz/point_cloud.hpp"

namespace ttz {

/// Uniform probability measure on a finite multiset.
struct EmpiricalMeasure {
  PointCloud cloud;

  std::size_t size() const { return cloud.size(); }
  double weight() const { return cloud.weight(); }
  double total_mass() const { return weight() * static_cast<double>(size()); }
};

inline EmpiricalMeasure esm(const Spectrum& s) {
  if (s.values.empty()) throw NumericalError("empty spectrum");
  if (!s.all_converged())
    throw NumericalError("spectrum has " + std::to_string(s.unconverged_count()) + " unconverged eigenvalue(s)");
  return {PointCloud{s.values}};
}

inline EmpiricalMeasure esm(PointCloud cloud) {
  if (cloud.empty()) throw ConfigError("empirical measure of an empty cloud");
  return {std::move(cloud)};
}

/// W1 between the uniform measures on two sorted samples: the integral over t in (0, 1)
/// of |F^{-1}(t) - G^{-1}(t)| with step quantile functions.  Breakpoints are merged
/// in integer arithmetic, so unequal sizes are handled exactly.
inline double w1_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ConfigError("W1 of an empty sample");
  const std::size_t n = a.size(), m = b.size();
  if (n == m) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += std::abs(a[r] - b[r]);
    return sum / static_cast<double>(n);
  }
  // Quantile index i covers t in [i/n, (i+1)/n); in units of 1/(n m) that is [i m, (i+1) m).
  const double unit = 1.0 / (static_cast<double>(n) * static_cast<double>(m));
  std::size_t i = 0, j = 0;
  unsigned long long t = 0;
  double sum = 0.0;
  while (i < n && j < m) {
    const unsigned long long end_a = (i + 1) * static_cast<unsigned long long>(m);
    const unsigned long long end_b = (j + 1) * static_cast<unsigned long long>(n);
    const unsigned long long end = std::min(end_a, end_b);
    sum += static_cast<double>(end - t) * std::abs(a[i] - b[j]);
    t = end;
    if (end_a == end) ++i;
    if (end_b == end) ++j;
  }
  return sum * unit;
}

inline std::vector<double> projection(const PointCloud& p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<double> out(p.size());
  for (std::size_t r = 0; r < p.size(); ++r) out[r] = c * p.points[r].real() + s * p.points[r].imag();
  std::sort(out.begin(), out.end());
  return out;
}

/// (1/K) sum_k W1 of the projections onto direction angle k pi / K.
inline double sliced_w1(const PointCloud& p, const PointCloud& q, std::size_t angles = 32) {
  if (angles < 1) throw ConfigError("sliced_w1 needs K >= 1");
  if (p.empty() || q.empty()) throw ConfigError("sliced_w1 of an empty cloud");
  double sum = 0.0;
  for (std::size_t k = 0; k < angles; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(angles);
    sum += w1_sorted(projection(p, theta), projection(q, theta));
  }
  return sum / static_cast<double>(angles);
}

inline double sliced_w1(const EmpiricalMeasure& p, const EmpiricalMeasure& q, std::size_t angles = 32) {
  return sliced_w1(p.cloud, q.cloud, angles);
}

/// Exact nearest-neighbour distances to a fixed cloud, bucketed on a uniform grid.
class NearestGrid {
 public:
  explicit NearestGrid(const PointCloud& cloud) : pts_(cloud.points) {
    if (pts_.empty()) throw ConfigError("nearest-neighbour index over an empty cloud");
    box_ = ComplexRect::bounding_box(cloud);
    const double span = std::max({box_.width(), box_.height(), 1e-300});
    const double area = std::max(box_.width(), span * 1e-3) * std::max(box_.height(), span * 1e-3);
    cell_ = std::sqrt(area / static_cast<double>(pts_.size()));
    cell_ = std::max(cell_, span / 4096.0);
    nx_ = static_cast<long>(box_.width() / cell_) + 1;
    ny_ = static_cast<long>(box_.height() / cell_) + 1;
    start_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
    std::vector<std::size_t> bucket(pts_.size());
    for (std::size_t r = 0; r < pts_.size(); ++r) {
      bucket[r] = index(cell_x(pts_[r]), cell_y(pts_[r]));
      ++start_[bucket[r] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    sorted_.resize(pts_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t r = 0; r < pts_.size(); ++r) sorted_[fill[bucket[r]]++] = pts_[r];
  }

  double distance(cplx z) const {
    const long cx = raw_cell(z.real() - box_.re_min), cy = raw_cell(z.imag() - box_.im_min);
    // Chebyshev ring radius range that intersects the grid.
    const long r_min = std::max({0L, -cx, cx - (nx_ - 1), -cy, cy - (ny_ - 1)});
    const long r_max = std::max({std::abs(cx), std::abs(cx - (nx_ - 1)), std::abs(cy), std::abs(cy - (ny_ - 1))});
    double best = std::numeric_limits<double>::infinity();
    for (long r = r_min; r <= r_max; ++r) {
      // Cells at Chebyshev radius > r are at least r * cell_ away.
      if (best <= static_cast<double>(r - 1) * cell_ && r > r_min) break;
      auto scan = [&](long gx, long gy) {
        if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) return;
        const std::size_t c = index(gx, gy);
        for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) best = std::min(best, std::abs(sorted_[k] - z));
      };
      if (r == 0) {
        scan(cx, cy);
        continue;
      }
      const long x_lo = std::max(cx - r, 0L), x_hi = std::min(cx + r, nx_ - 1);
      const long y_lo = std::max(cy - r, 0L), y_hi = std::min(cy + r, ny_ - 1);
      for (long gx = x_lo; gx <= x_hi; ++gx) {
        if (gx == cx - r || gx == cx + r) {
          for (long gy = y_lo; gy <= y_hi; ++gy) scan(gx, gy);
        } else {
          scan(gx, cy - r);
          scan(gx, cy + r);
        }
      }
    }
    return best;
  }

 private:
  long raw_cell(double offset) const {
    const double c = std::floor(offset / cell_);
    return static_cast<long>(std::clamp(c, -1e15, 1e15));
  }
  long cell_x(cplx z) const { return std::clamp(raw_cell(z.real() - box_.re_min), 0L, nx_ - 1); }
  long cell_y(cplx z) const { return std::clamp(raw_cell(z.imag() - box_.im_min), 0L, ny_ - 1); }
  std::size_t index(long gx, long gy) const { return static_cast<std::size_t>(gx * ny_ + gy); }

  std::vector<cplx> pts_;
  std::vector<cplx> sorted_;
  std::vector<std::size_t> start_;
  ComplexRect box_{};
  double cell_ = 1.0;
  long nx_ = 1, ny_ = 1;
};

/// sup_{p in P} inf_{q in Q} |p - q|.
inline double directed_hausdorff(const PointCloud& p, const PointCloud& q) {
  if (p.empty() || q.empty()) throw ConfigError("hausdorff distance of an empty cloud");
  const NearestGrid index(q);
  double worst = 0.0;
  for (const cplx& z : p) worst = std::max(worst, index.distance(z));
  return worst;
}

inline double hausdorff(const PointCloud& p, const PointCloud& q) {
  return std::max(directed_hausdorff(p, q), directed_hausdorff(q, p));
}

/// (1/|P|) sum log|p - z|; -infinity when z is a point of P.
inline double sample_log_potential(const PointCloud& p, cplx z) {
  if (p.empty()) throw ConfigError("log potential of an empty cloud");
  double sum = 0.0;
  for (const cplx& v : p) {
    const double r = std::abs(v - z);
    if (r == 0.0) return -std::numeric_limits<double>::infinity();
    sum += std::log(r);
  }
  return sum / static_cast<double>(p.size());
}

inline double sample_log_potential(const EmpiricalMeasure& p, cplx z) { return sample_log_potential(p.cloud, z); }

}  // namespace ttz
