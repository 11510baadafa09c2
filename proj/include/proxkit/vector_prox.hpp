#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "proxkit/dense_matrix.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/scalar_prox.hpp"

namespace proxkit {

/// Norm budget for ball-constrained nearest-point problems.
class Tau {
 public:
  explicit Tau(double value) : value_(detail::checked_positive(value, "tau")) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Result of solving ||S_lambda(v)||_1 = tau for lambda.
struct BudgetSolve {
  double lambda_star = 0.0;  // 0 when the budget does not bind
  double achieved_l1 = 0.0;  // l1 norm of S_{lambda_star}(v)
  bool active = false;       // true when the budget constrains v
};

/// Solution of a proximal or ball-projection problem together with the
/// diagnostics every operator here can report: the spectrum (or sorted
/// magnitudes) before and after thresholding, the threshold that was
/// applied, and the resulting rank.
struct ProxSolution {
  DenseMatrix solution;
  double objective = 0.0;
  double effective_lambda = 0.0;
  std::vector<double> sigma_in;
  std::vector<double> sigma_out;
  std::size_t rank_out = 0;
};

namespace detail {

inline std::vector<double> sorted_magnitudes(const DenseMatrix& m) {
  std::vector<double> w(m.entries().begin(), m.entries().end());
  for (double& x : w) x = std::abs(x);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

inline std::size_t count_above_rank_threshold(const std::vector<double>& sigma_out,
                                              double sigma_in_max) {
  const double threshold = 1e-10 * std::max(1.0, sigma_in_max);
  std::size_t rank = 0;
  for (double s : sigma_out) rank += (s > threshold);
  return rank;
}

}  // namespace detail

/// Entry-wise soft threshold of a vector or matrix.
inline DenseMatrix soft_threshold(const DenseMatrix& v, Lambda lambda) {
  DenseMatrix u(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) {
    u.entries()[i] = shrink(v.entries()[i], lambda);
  }
  return u;
}

/// Entry-wise hard threshold: minimizes cardinality + (beta/2) distance^2.
inline DenseMatrix l0_approx(const DenseMatrix& v, Beta beta) {
  DenseMatrix u(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.size(); ++i) {
    u.entries()[i] = hard_keep(v.entries()[i], beta);
  }
  return u;
}

/// Find the threshold lambda* >= 0 with ||S_{lambda*}(v)||_1 = tau.
///
/// g(lambda) = sum_i max(|v_i| - lambda, 0) is piecewise linear and
/// decreasing with breakpoints at the sorted magnitudes, so the root is
/// solved in closed form inside the segment containing tau; no iteration.
/// When ||v||_1 <= tau the budget does not bind and lambda* = 0.
inline BudgetSolve solve_budget_lambda(const DenseMatrix& v, Tau tau) {
  const std::vector<double> w = detail::sorted_magnitudes(v);

  detail::KahanSum total;
  for (double x : w) total.add(x);
  const double l1 = total.value();
  if (l1 <= tau.value()) {
    return BudgetSolve{0.0, l1, false};
  }

  // Largest j for which the segment solution (P_j - tau)/j still lies left
  // of the j-th breakpoint; duplicates only steepen the slope and need no
  // special case.
  double lambda = 0.0;
  double prefix = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    prefix += w[j];
    const double candidate = (prefix - tau.value()) / static_cast<double>(j + 1);
    if (w[j] - candidate > 0.0) lambda = candidate;
  }

  detail::KahanSum achieved;
  for (double x : w) achieved.add(std::max(x - lambda, 0.0));
  return BudgetSolve{lambda, achieved.value(), true};
}

/// Nearest point to v in the l1 ball of radius tau: soft threshold at the
/// exact budget-matching level. Interior points are returned unchanged.
inline ProxSolution l1_ball_nearest(const DenseMatrix& v, Tau tau) {
  const BudgetSolve budget = solve_budget_lambda(v, tau);
  std::vector<double> sigma_in = detail::sorted_magnitudes(v);

  DenseMatrix u = budget.active ? soft_threshold(v, Lambda(budget.lambda_star)) : v;
  std::vector<double> sigma_out = detail::sorted_magnitudes(u);

  ProxSolution out{std::move(u),
                   0.0,
                   budget.lambda_star,
                   std::move(sigma_in),
                   std::move(sigma_out),
                   0};
  out.objective = frobenius_norm(out.solution - v);
  out.rank_out = detail::count_above_rank_threshold(out.sigma_out, out.sigma_in[0]);
  return out;
}

}  // namespace proxkit
