#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "proxkit/dense_matrix.hpp"
#include "proxkit/errors.hpp"

namespace proxkit {

/// Thin SVD: a = u * diag(sigma) * v^T with k = min(rows, cols).
/// u is m x k and v is n x k, both with orthonormal columns; sigma is
/// nonnegative and sorted descending.
struct SvdFactorization {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

struct SvdOptions {
  // Column pair (p, q) counts as orthogonal once
  // |b_p . b_q| <= tol * ||b_p|| * ||b_q||.
  double tol = 1e-14;
  std::size_t max_sweeps = 60;
};

namespace detail {

inline double column_dot(const DenseMatrix& b, std::size_t p, std::size_t q) {
  KahanSum s;
  for (std::size_t i = 0; i < b.rows(); ++i) s.add(b(i, p) * b(i, q));
  return s.value();
}

// One cyclic sweep of one-sided Jacobi rotations over all column pairs of b,
// mirrored onto v. Returns the number of rotations applied.
inline std::size_t jacobi_sweep(DenseMatrix& b, DenseMatrix& v, double tol) {
  const std::size_t n = b.cols();
  std::size_t rotations = 0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double alpha = column_dot(b, p, p);
      const double gamma = column_dot(b, q, q);
      const double d = column_dot(b, p, q);
      if (alpha == 0.0 || gamma == 0.0) continue;  // exactly zero column
      if (std::abs(d) <= tol * std::sqrt(alpha) * std::sqrt(gamma)) continue;

      // Rotation angle that makes columns p and q orthogonal (Rutishauser
      // form, smaller root for stability).
      const double theta = (gamma - alpha) / (2.0 * d);
      const double t =
          (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = c * t;

      for (std::size_t i = 0; i < b.rows(); ++i) {
        const double bp = b(i, p);
        const double bq = b(i, q);
        b(i, p) = c * bp - s * bq;
        b(i, q) = s * bp + c * bq;
      }
      for (std::size_t i = 0; i < v.rows(); ++i) {
        const double vp = v(i, p);
        const double vq = v(i, q);
        v(i, p) = c * vp - s * vq;
        v(i, q) = s * vp + c * vq;
      }
      ++rotations;
    }
  }
  return rotations;
}

inline double worst_offdiag(const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t p = 0; p + 1 < b.cols(); ++p) {
    for (std::size_t q = p + 1; q < b.cols(); ++q) {
      const double alpha = column_dot(b, p, p);
      const double gamma = column_dot(b, q, q);
      if (alpha == 0.0 || gamma == 0.0) continue;
      worst = std::max(worst, std::abs(column_dot(b, p, q)) /
                                  (std::sqrt(alpha) * std::sqrt(gamma)));
    }
  }
  return worst;
}

// Fill each left-singular-vector column whose singular value is exactly zero
// with a canonical basis vector orthogonalized against everything already in
// place.
inline void complete_zero_columns(DenseMatrix& u, const std::vector<double>& sigma) {
  const std::size_t m = u.rows();
  const std::size_t k = u.cols();
  for (std::size_t j = 0; j < k; ++j) {
    if (sigma[j] != 0.0) continue;
    for (std::size_t cand = 0; cand < m; ++cand) {
      std::vector<double> w(m, 0.0);
      w[cand] = 1.0;
      for (std::size_t l = 0; l < k; ++l) {
        if (l == j || (sigma[l] == 0.0 && l > j)) continue;  // not yet filled
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += u(i, l) * w[i];
        for (std::size_t i = 0; i < m; ++i) w[i] -= proj * u(i, l);
      }
      double norm2 = 0.0;
      for (double x : w) norm2 += x * x;
      if (norm2 > 0.25) {  // candidate not (nearly) in the current span
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < m; ++i) u(i, j) = w[i] * inv;
        break;
      }
    }
  }
}

// Make the first largest-magnitude entry of each left singular vector
// nonnegative, flipping the matching right singular vector with it.
inline void fix_signs(DenseMatrix& u, DenseMatrix& v) {
  for (std::size_t j = 0; j < u.cols(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double mag = std::abs(u(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
    }
  }
}

// Core factorization for rows >= cols.
inline SvdFactorization svd_tall(const DenseMatrix& a, const SvdOptions& opts) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix b = a;
  DenseMatrix v = DenseMatrix::identity(n);

  bool converged = false;
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (jacobi_sweep(b, v, opts.tol) == 0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    const double residual = worst_offdiag(b);
    if (residual > opts.tol) {
      throw ConvergenceError("svd: Jacobi sweeps exhausted, residual " +
                                 std::to_string(residual),
                             residual);
    }
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    KahanSum s;
    for (std::size_t i = 0; i < m; ++i) s.add(b(i, j) * b(i, j));
    sigma[j] = std::sqrt(std::max(s.value(), 0.0));
  }

  // Stable descending sort keeps column order deterministic on ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  DenseMatrix u(m, n);
  DenseMatrix v_sorted(n, n);
  std::vector<double> sigma_sorted(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sigma_sorted[j] = sigma[src];
    if (sigma[src] != 0.0) {
      const double inv = 1.0 / sigma[src];
      for (std::size_t i = 0; i < m; ++i) u(i, j) = b(i, src) * inv;
    }
    for (std::size_t i = 0; i < n; ++i) v_sorted(i, j) = v(i, src);
  }

  complete_zero_columns(u, sigma_sorted);
  fix_signs(u, v_sorted);
  return SvdFactorization{std::move(u), std::move(sigma_sorted), std::move(v_sorted)};
}

}  // namespace detail

/// Thin SVD by one-sided Jacobi with cyclic column sweeps.
///
/// Deterministic: fixed sweep order and a fixed sign convention (the first
/// largest-magnitude entry of every left singular vector is nonnegative), so
/// identical inputs factor identically. Matrices with rows < cols are
/// factored through their transpose. Throws ConvergenceError if the sweep
/// budget runs out.
inline SvdFactorization svd(const DenseMatrix& a, const SvdOptions& opts = {}) {
  if (a.rows() >= a.cols()) return detail::svd_tall(a, opts);
  SvdFactorization f = detail::svd_tall(transpose(a), opts);
  // A^T = U S V^T  =>  A = V S U^T; the sign convention was applied to the
  // left factor of A^T, which is the right factor here. Reapply on the final
  // orientation.
  SvdFactorization swapped{std::move(f.v), std::move(f.sigma), std::move(f.u)};
  detail::fix_signs(swapped.u, swapped.v);
  return swapped;
}

/// Reassemble u * diag(sigma) * v^T.
inline DenseMatrix svd_reconstruct(const SvdFactorization& f) {
  DenseMatrix scaled = f.u;
  for (std::size_t j = 0; j < scaled.cols(); ++j) {
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
      scaled(i, j) *= f.sigma[j];
    }
  }
  return matmul(scaled, transpose(f.v));
}

/// Sum of singular values.
inline double nuclear_norm(const DenseMatrix& a) {
  const SvdFactorization f = svd(a);
  detail::KahanSum s;
  for (double sv : f.sigma) s.add(sv);
  return s.value();
}

}  // namespace proxkit
