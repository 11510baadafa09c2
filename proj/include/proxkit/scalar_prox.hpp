#pragma once

#include <cmath>
#include <string>

#include "proxkit/errors.hpp"

namespace proxkit {

namespace detail {

inline double checked_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(name) + " must be a finite positive real, got " +
                      std::to_string(value));
  }
  return value;
}

inline double checked_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be finite");
  }
  return value;
}

}  // namespace detail

/// Soft-threshold level. Strictly positive; callers wanting the identity map
/// (no shrinkage at all) must handle that case themselves.
class Lambda {
 public:
  explicit Lambda(double value) : value_(detail::checked_positive(value, "lambda")) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Balancing weight between a sparsity term and the squared distance term.
class Beta {
 public:
  explicit Beta(double value) : value_(detail::checked_positive(value, "beta")) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Soft threshold: the unique minimizer of lambda*|x| + (x-a)^2/2.
///
/// Computed as sign(a)*max(|a|-lambda, 0) rather than by the three-branch
/// case split, so that shrink(-a) == -shrink(a) holds exactly in floating
/// point. Results of magnitude zero are returned as +0.0.
inline double shrink(double a, Lambda lambda) {
  detail::checked_finite(a, "a");
  const double m = std::abs(a) - lambda.value();
  if (m <= 0.0) return 0.0;
  return a < 0.0 ? -m : m;
}

/// The objective lambda*|x| + (x-a)^2/2 whose minimizer shrink() returns.
inline double scalar_objective(double x, double a, Lambda lambda) {
  detail::checked_finite(x, "x");
  detail::checked_finite(a, "a");
  const double d = x - a;
  return lambda.value() * std::abs(x) + 0.5 * d * d;
}

/// Hard threshold: keep v when a nonzero entry pays off, else zero it.
///
/// Zeroing an entry costs (beta/2)*v^2 in the distance term; keeping it
/// costs exactly 1 in the cardinality term. Ties (equal cost) zero the
/// entry.
inline double hard_keep(double v, Beta beta) {
  detail::checked_finite(v, "v");
  return (0.5 * beta.value() * v * v <= 1.0) ? 0.0 : v;
}

}  // namespace proxkit
