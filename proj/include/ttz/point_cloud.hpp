#pragma once

#include <algorithm>
#include <complex>
#include <vector>

namespace ttz {

using cplx = std::complex<double>;

/// Finite multiset of points in the complex plane.  When used as a
/// probability measure every point carries weight 1/size().
struct PointCloud {
  std::vector<cplx> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<cplx> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  double weight() const { return points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size()); }

  void append(const PointCloud& other) { points.insert(points.end(), other.points.begin(), other.points.end()); }

  auto begin() const { return points.begin(); }
  auto end() const { return points.end(); }
};

/// Axis-aligned rectangle in the complex plane.
struct ComplexRect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }

  static ComplexRect bounding_box(const PointCloud& cloud) {
    ComplexRect r{1e300, -1e300, 1e300, -1e300};
    for (const cplx& p : cloud) {
      r.re_min = std::min(r.re_min, p.real());
      r.re_max = std::max(r.re_max, p.real());
      r.im_min = std::min(r.im_min, p.imag());
      r.im_max = std::max(r.im_max, p.imag());
    }
    return r;
  }

  /// Pads every side by `fraction` of the larger side length, so that degenerate
  /// (zero-height or zero-width) boxes still become proper rectangles.
  ComplexRect padded(double fraction) const {
    double pad = fraction * std::max(width(), height());
    if (pad == 0.0) pad = fraction;
    return {re_min - pad, re_max + pad, im_min - pad, im_max + pad};
  }
};

}  // namespace ttz
