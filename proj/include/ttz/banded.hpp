#pragma once

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "ttz/errors.hpp"

namespace ttz {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* row(std::size_t i) { return data_.data() + i * cols_; }
  const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

  /// Submatrix of rows/cols [first, first + size).
  ComplexMatrix principal(std::size_t first, std::size_t size) const {
    ComplexMatrix out(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) out(i, j) = (*this)(first + i, first + j);
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// n x n complex matrix stored by diagonals: offset j in [-q, p] holds n - |j| entries,
/// entry (i, i + j) at index min(i, i + j).  Entries outside the band are zero.
class BandedComplexMatrix {
 public:
  BandedComplexMatrix() = default;
  BandedComplexMatrix(std::size_t n, int lower, int upper) : n_(n), q_(lower), p_(upper) {
    if (lower < 0 || upper < 0) throw std::invalid_argument("bandwidths must be non-negative");
    diags_.resize(static_cast<std::size_t>(lower + upper + 1));
    for (int j = -lower; j <= upper; ++j) {
      const auto width = static_cast<std::size_t>(j < 0 ? -j : j);
      diags_[static_cast<std::size_t>(j + lower)].assign(width < n ? n - width : 0, cplx{});
    }
  }

  std::size_t size() const { return n_; }
  int lower() const { return q_; }
  int upper() const { return p_; }
  bool is_tridiagonal() const { return q_ <= 1 && p_ <= 1; }

  bool in_band(std::size_t i, std::size_t k) const {
    const long off = static_cast<long>(k) - static_cast<long>(i);
    return off >= -q_ && off <= p_;
  }

  /// Entry (i, k), 0-based; zero outside the band.
  cplx operator()(std::size_t i, std::size_t k) const {
    if (!in_band(i, k)) return {};
    return diags_[static_cast<std::size_t>(static_cast<long>(k) - static_cast<long>(i) + q_)][std::min(i, k)];
  }

  cplx& at(std::size_t i, std::size_t k) {
    if (!in_band(i, k)) throw std::out_of_range("entry outside the band");
    return diags_[static_cast<std::size_t>(static_cast<long>(k) - static_cast<long>(i) + q_)][std::min(i, k)];
  }

  std::vector<cplx>& diagonal(int offset) { return diags_.at(static_cast<std::size_t>(offset + q_)); }
  const std::vector<cplx>& diagonal(int offset) const { return diags_.at(static_cast<std::size_t>(offset + q_)); }

  ComplexMatrix dense() const {
    ComplexMatrix out(n_, n_);
    for (int j = -q_; j <= p_; ++j) {
      const auto& d = diagonal(j);
      for (std::size_t m = 0; m < d.size(); ++m) {
        const std::size_t i = j < 0 ? m + static_cast<std::size_t>(-j) : m;
        out(i, static_cast<std::size_t>(static_cast<long>(i) + j)) = d[m];
      }
    }
    return out;
  }

  BandedComplexMatrix transpose() const {
    BandedComplexMatrix out(n_, p_, q_);
    for (int j = -q_; j <= p_; ++j) out.diagonal(-j) = diagonal(j);
    return out;
  }

  /// Principal block of rows/cols [first, first + count).
  BandedComplexMatrix principal_block(std::size_t first, std::size_t count) const {
    if (first + count > n_) throw std::out_of_range("principal block exceeds matrix");
    BandedComplexMatrix out(count, q_, p_);
    for (int j = -q_; j <= p_; ++j) {
      auto& dst = out.diagonal(j);
      const auto& src = diagonal(j);
      for (std::size_t m = 0; m < dst.size(); ++m) dst[m] = src[first + m];
    }
    return out;
  }

  /// Copy with the band widened to [-lower, upper] (new diagonals zero).
  BandedComplexMatrix widened(int lower, int upper) const {
    BandedComplexMatrix out(n_, std::max(lower, q_), std::max(upper, p_));
    for (int j = -q_; j <= p_; ++j) out.diagonal(j) = diagonal(j);
    return out;
  }

  /// M - z I.
  BandedComplexMatrix shifted(cplx z) const {
    BandedComplexMatrix out = *this;
    for (cplx& v : out.diagonal(0)) v -= z;
    return out;
  }

  cplx trace() const {
    cplx t{};
    for (const cplx& v : diagonal(0)) t += v;
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& d : diags_)
      for (const cplx& v : d) m = std::max(m, std::abs(v));
    return m;
  }

  bool operator==(const BandedComplexMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  int q_ = 0;
  int p_ = 0;
  std::vector<std::vector<cplx>> diags_;
};

}  // namespace ttz
