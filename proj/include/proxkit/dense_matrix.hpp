#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxkit/errors.hpp"

namespace proxkit {

namespace detail {

// Neumaier-compensated accumulator. Summation order is fixed by the caller,
// so results are deterministic across runs.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// Dense real matrix with row-major storage. Every entry is finite; rows and
/// columns are at least one. Construction validates both invariants.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
    check_shape(rows, cols);
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    check_shape(rows, cols);
    if (entries_.size() != rows_ * cols_) {
      throw DimensionError("entry count " + std::to_string(entries_.size()) +
                           " does not match " + std::to_string(rows_) + "x" +
                           std::to_string(cols_));
    }
    for (double e : entries_) {
      if (!std::isfinite(e)) {
        throw DomainError("matrix entries must be finite");
      }
    }
  }

  DenseMatrix(std::size_t rows, std::size_t cols,
              std::initializer_list<double> entries)
      : DenseMatrix(rows, cols, std::vector<double>(entries)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Square matrix with the given diagonal, zero elsewhere.
  static DenseMatrix diagonal(const std::vector<double>& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// A column vector (n x 1).
  static DenseMatrix column(const std::vector<double>& v) {
    return DenseMatrix(v.size(), 1, v);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return entries_[i * cols_ + j];
  }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  static void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("matrix dimensions must be positive");
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("matrix subtraction requires equal shapes");
  }
  DenseMatrix d(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    d.entries()[i] = a.entries()[i] - b.entries()[i];
  }
  return d;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("matrix addition requires equal shapes");
  }
  DenseMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.entries()[i] = a.entries()[i] + b.entries()[i];
  }
  return s;
}

/// Sum of squared entries, accumulated entry-wise with compensated
/// summation. Kept separate from frobenius_norm so objectives that need the
/// square avoid the sqrt-then-square round trip.
inline double frobenius_norm_squared(const DenseMatrix& a) {
  detail::KahanSum s;
  for (double e : a.entries()) s.add(e * e);
  return std::max(s.value(), 0.0);
}

/// Square root of the sum of squared entries.
inline double frobenius_norm(const DenseMatrix& a) {
  return std::sqrt(frobenius_norm_squared(a));
}

/// Sum of absolute values of all entries (matrix treated as a vector).
inline double l1_norm(const DenseMatrix& a) {
  detail::KahanSum s;
  for (double e : a.entries()) s.add(std::abs(e));
  return s.value();
}

/// Same-shape matrix with all off-diagonal entries zeroed.
inline DenseMatrix diag_part(const DenseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  const std::size_t k = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < k; ++i) d(i, i) = a(i, i);
  return d;
}

/// Number of entries that are exactly nonzero.
inline std::size_t nonzero_count(const DenseMatrix& a) {
  std::size_t n = 0;
  for (double e : a.entries()) n += (e != 0.0);
  return n;
}

}  // namespace proxkit
