#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "proxkit/dense_matrix.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/rng.hpp"
#include "proxkit/scalar_prox.hpp"
#include "proxkit/vector_prox.hpp"

// Brute-force verifiers, deliberately independent of the closed-form
// operators they audit: every objective below is evaluated from scratch,
// entry by entry. The only shared code is DenseMatrix itself and the
// entry-wise norms.

namespace proxkit {

/// Outcome of pitting a candidate minimizer against brute-force competitors.
struct OracleReport {
  double candidate_objective = 0.0;
  double best_competitor_objective = 0.0;
  double margin = 0.0;  // best competitor minus candidate; negative = beaten
  std::size_t competitors_tested = 0;
  bool pass = false;  // margin >= -tolerance
  double tolerance = 0.0;
};

namespace detail {

inline OracleReport make_report(double candidate, double best_competitor,
                                std::size_t tested, double tolerance) {
  OracleReport r;
  r.candidate_objective = candidate;
  r.best_competitor_objective = best_competitor;
  r.margin = best_competitor - candidate;
  r.competitors_tested = tested;
  r.tolerance = tolerance;
  r.pass = r.margin >= -tolerance;
  return r;
}

}  // namespace detail

/// Default optimality margins: scalar and vector closed forms are exact up
/// to rounding; spectral problems compose two factorizations.
inline constexpr double kScalarOracleTol = 1e-12;
inline constexpr double kSpectralOracleTol = 1e-9;

/// Brute-force minimizer of lambda*|x| + (x-a)^2/2 over [a-span, a+span]:
/// dense grid scan, then golden-section refinement of the winning interval
/// down to 1e-12 width.
inline double grid_min_scalar(double a, Lambda lambda, double span,
                              std::size_t steps) {
  detail::checked_finite(a, "a");
  detail::checked_positive(span, "span");
  if (steps < 1000) {
    throw DomainError("grid_min_scalar needs at least 1000 steps");
  }

  const double lam = lambda.value();
  const auto objective = [a, lam](double x) {
    const double d = x - a;
    return lam * std::abs(x) + 0.5 * d * d;
  };

  const double lo = a - span;
  const double h = 2.0 * span / static_cast<double>(steps);
  std::size_t best = 0;
  double best_f = objective(lo);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double f = objective(lo + h * static_cast<double>(i));
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }

  // Golden-section on the bracket around the winning grid point.
  double left = lo + h * static_cast<double>(best == 0 ? 0 : best - 1);
  double right = lo + h * static_cast<double>(std::min(best + 1, steps));
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = right - inv_phi * (right - left);
  double x2 = left + inv_phi * (right - left);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (right - left > 1e-12) {
    if (f1 < f2) {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - inv_phi * (right - left);
      f1 = objective(x1);
    } else {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + inv_phi * (right - left);
      f2 = objective(x2);
    }
  }
  return 0.5 * (left + right);
}

/// Exhaustive check of a candidate for the cardinality-penalized problem
/// min card(u) + (beta/2)||u - v||^2: enumerate every support pattern, set
/// u = v on the support (the restricted optimum), and compare objectives.
inline OracleReport support_enum_l0(const DenseMatrix& v, Beta beta,
                                    const DenseMatrix& candidate,
                                    double tolerance = kScalarOracleTol) {
  if (!v.same_shape(candidate)) {
    throw DimensionError("support_enum_l0: candidate shape differs from v");
  }
  const std::size_t n = v.size();
  if (n > 20) {
    throw SizeError("support_enum_l0: 2^n enumeration limited to 20 entries");
  }

  const double b = beta.value();
  const auto objective = [&](const auto& value_at) {
    detail::KahanSum dist;
    std::size_t card = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = value_at(i);
      card += (u != 0.0);
      const double d = u - v.entries()[i];
      dist.add(d * d);
    }
    return static_cast<double>(card) + 0.5 * b * dist.value();
  };

  const double candidate_obj =
      objective([&](std::size_t i) { return candidate.entries()[i]; });

  double best = std::numeric_limits<double>::infinity();
  const std::size_t patterns = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    const double f = objective([&](std::size_t i) {
      return (mask >> i) & 1 ? v.entries()[i] : 0.0;
    });
    best = std::min(best, f);
  }
  return detail::make_report(candidate_obj, best, patterns, tolerance);
}

/// Random perturbation audit of a claimed minimizer. Draws `trials`
/// competitors candidate + delta with ||delta||_F <= radius (uniform
/// direction, radius scaled by uniform(0,1]); when a feasible-point
/// generator is supplied, one generated competitor is evaluated per trial as
/// well. Objectives may return +infinity to flag an infeasible competitor.
/// Deterministic in (seed); trial t uses the sub-generator Rng(seed, t).
inline OracleReport perturbation_check(
    const DenseMatrix& candidate,
    const std::function<double(const DenseMatrix&)>& objective,
    std::size_t trials, double radius, std::uint64_t seed,
    double tolerance = kSpectralOracleTol,
    const std::function<DenseMatrix(Rng&)>& feasible_gen = {}) {
  if (trials < 100) {
    throw DomainError("perturbation_check needs at least 100 trials");
  }
  detail::checked_positive(radius, "radius");

  const double candidate_obj = objective(candidate);
  double best = std::numeric_limits<double>::infinity();
  std::size_t tested = 0;

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    DenseMatrix delta(candidate.rows(), candidate.cols());
    double norm2 = 0.0;
    for (double& e : delta.entries()) {
      e = rng.gaussian();
      norm2 += e * e;
    }
    const double r = radius * rng.uniform_open();
    if (norm2 > 0.0) {
      const double scale = r / std::sqrt(norm2);
      for (double& e : delta.entries()) e *= scale;
    }
    best = std::min(best, objective(candidate + delta));
    ++tested;

    if (feasible_gen) {
      best = std::min(best, objective(feasible_gen(rng)));
      ++tested;
    }
  }
  return detail::make_report(candidate_obj, best, tested, tolerance);
}

/// Eigenvalues of a symmetric matrix by classical two-sided Jacobi,
/// descending. Test-only machinery: validates the SVD through
/// eig(A^T A) = sigma^2 without touching the SVD code path.
inline std::vector<double> symmetric_eigs_jacobi(const DenseMatrix& s) {
  if (s.rows() != s.cols()) {
    throw DomainError("symmetric_eigs_jacobi: matrix must be square");
  }
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s(i, j) - s(j, i)) > 1e-12) {
        throw DomainError("symmetric_eigs_jacobi: matrix is not symmetric");
      }
    }
  }

  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = 0.5 * (s(i, j) + s(j, i));
    }
  }

  double scale = 0.0;
  for (double e : a.entries()) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return std::vector<double>(n, 0.0);
  const double stop = 1e-15 * scale * static_cast<double>(n);

  const std::size_t max_sweeps = 100;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        off = std::max(off, std::abs(a(p, q)));
      }
    }
    if (off <= stop) break;
    if (sweep + 1 == max_sweeps) {
      throw ConvergenceError("symmetric_eigs_jacobi: no convergence", off);
    }

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i);
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return eigs;
}

/// Nuclear norm computed without the SVD under test. Uses the symmetric
/// embedding [[0, A], [A^T, 0]], whose eigenvalues are exactly +-sigma_i
/// padded with zeros; unlike eig(A^T A) this keeps full precision for tiny
/// singular values (no square root of a squared quantity).
inline double oracle_nuclear_norm(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix embed(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      embed(i, m + j) = a(i, j);
      embed(m + j, i) = a(i, j);
    }
  }
  detail::KahanSum sum;
  for (double e : symmetric_eigs_jacobi(embed)) sum.add(std::abs(e));
  return 0.5 * sum.value();
}

/// Bisection root of sum_i max(|v_i| - lambda, 0) = tau; the slow reference
/// for solve_budget_lambda. Returns 0 when the budget does not bind.
inline double bisect_budget_lambda(const DenseMatrix& v, Tau tau) {
  const auto g = [&](double lambda) {
    detail::KahanSum s;
    for (double e : v.entries()) s.add(std::max(std::abs(e) - lambda, 0.0));
    return s.value();
  };
  if (g(0.0) <= tau.value()) return 0.0;

  double lo = 0.0;
  double hi = 0.0;
  for (double e : v.entries()) hi = std::max(hi, std::abs(e));
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > tau.value()) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace proxkit
