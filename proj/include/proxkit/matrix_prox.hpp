#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "proxkit/dense_matrix.hpp"
#include "proxkit/scalar_prox.hpp"
#include "proxkit/svd.hpp"
#include "proxkit/vector_prox.hpp"

namespace proxkit {

namespace detail {

inline DenseMatrix assemble(const SvdFactorization& f,
                            const std::vector<double>& sigma) {
  DenseMatrix scaled = f.u;
  for (std::size_t j = 0; j < scaled.cols(); ++j) {
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
      scaled(i, j) *= sigma[j];
    }
  }
  return matmul(scaled, transpose(f.v));
}

}  // namespace detail

/// Singular value thresholding: minimizes ||X||_* + (beta/2)||X - A||_F^2.
///
/// Soft thresholds each singular value at 1/beta and reassembles with A's
/// own singular subspaces. The reported objective uses the entry-wise
/// Frobenius norm, so diagnostics do not inherit factorization error.
inline ProxSolution svt(const DenseMatrix& a, Beta beta) {
  const SvdFactorization f = svd(a);
  const Lambda lambda(1.0 / beta.value());

  std::vector<double> sigma_out(f.sigma.size());
  for (std::size_t i = 0; i < f.sigma.size(); ++i) {
    sigma_out[i] = shrink(f.sigma[i], lambda);
  }

  ProxSolution out{detail::assemble(f, sigma_out),
                   0.0,
                   lambda.value(),
                   f.sigma,
                   std::move(sigma_out),
                   0};
  detail::KahanSum nuclear;
  for (double s : out.sigma_out) nuclear.add(s);
  out.objective = nuclear.value() +
                  0.5 * beta.value() * frobenius_norm_squared(out.solution - a);
  out.rank_out = detail::count_above_rank_threshold(out.sigma_out, out.sigma_in[0]);
  return out;
}

/// Nearest matrix in the nuclear-norm ball of radius tau: shrink the
/// singular values by the exact budget-matching threshold from
/// solve_budget_lambda and reassemble. Matrices already inside the ball are
/// returned unchanged.
inline ProxSolution nuclear_ball_nearest(const DenseMatrix& a, Tau tau) {
  const SvdFactorization f = svd(a);
  const BudgetSolve budget =
      solve_budget_lambda(DenseMatrix(1, f.sigma.size(), f.sigma), tau);

  ProxSolution out{a, 0.0, budget.lambda_star, f.sigma, f.sigma, 0};
  if (budget.active) {
    std::vector<double> sigma_out(f.sigma.size());
    const Lambda lambda(budget.lambda_star);
    for (std::size_t i = 0; i < f.sigma.size(); ++i) {
      sigma_out[i] = shrink(f.sigma[i], lambda);
    }
    out.solution = detail::assemble(f, sigma_out);
    out.sigma_out = std::move(sigma_out);
  }
  out.objective = frobenius_norm(out.solution - a);
  out.rank_out = detail::count_above_rank_threshold(out.sigma_out, out.sigma_in[0]);
  return out;
}

}  // namespace proxkit
