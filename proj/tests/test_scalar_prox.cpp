#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "proxkit/oracle.hpp"
#include "proxkit/rng.hpp"
#include "proxkit/scalar_prox.hpp"

using namespace proxkit;

namespace {

// The three-branch form from the derivation, kept as an oracle for the
// branch-free implementation.
double shrink_by_cases(double a, double lambda) {
  if (a > lambda) return a - lambda;
  if (a < -lambda) return a + lambda;
  return 0.0;
}

}  // namespace

TEST_CASE("penalty parameters reject non-positive and non-finite values", "[scalar]") {
  REQUIRE_THROWS_AS(Lambda(0.0), DomainError);
  REQUIRE_THROWS_AS(Lambda(-1.0), DomainError);
  REQUIRE_THROWS_AS(Lambda(std::numeric_limits<double>::infinity()), DomainError);
  REQUIRE_THROWS_AS(Lambda(std::numeric_limits<double>::quiet_NaN()), DomainError);
  REQUIRE_THROWS_AS(Beta(0.0), DomainError);
  REQUIRE_THROWS_AS(Beta(-0.5), DomainError);
  REQUIRE(Lambda(2.5).value() == 2.5);
  REQUIRE(Beta(0.25).value() == 0.25);
}

TEST_CASE("shrink matches the case analysis on the worked examples", "[scalar]") {
  REQUIRE(shrink(2.0, Lambda(1.0)) == 1.0);
  REQUIRE(shrink(0.5, Lambda(1.0)) == 0.0);
  REQUIRE(shrink(-3.0, Lambda(1.0)) == -2.0);

  // Independent grid oracle for the negative-side case.
  const double oracle = grid_min_scalar(-3.0, Lambda(1.0), 6.0, 1000000);
  REQUIRE(std::abs(oracle - (-2.0)) < 1e-6);

  REQUIRE_THROWS_AS(shrink(std::numeric_limits<double>::quiet_NaN(), Lambda(1.0)),
                    DomainError);
  REQUIRE_THROWS_AS(shrink(std::numeric_limits<double>::infinity(), Lambda(1.0)),
                    DomainError);
}

TEST_CASE("scalar_objective evaluates the penalized distance", "[scalar]") {
  REQUIRE(scalar_objective(0.0, 0.0, Lambda(1.0)) == 0.0);
  REQUIRE(scalar_objective(1.0, 2.0, Lambda(1.0)) == 1.5);

  // At the minimizer of (a=5, lambda=2): x = 3, objective 2*3 + 0.5*4 = 8,
  // and the grid confirms nothing lower exists nearby.
  const Lambda lambda(2.0);
  const double x = shrink(5.0, lambda);
  REQUIRE(x == 3.0);
  REQUIRE(scalar_objective(x, 5.0, lambda) == 8.0);
  const double xg = grid_min_scalar(5.0, lambda, 11.0, 100000);
  REQUIRE(scalar_objective(x, 5.0, lambda) <=
          scalar_objective(xg, 5.0, lambda) + 1e-12);

  REQUIRE_THROWS_AS(
      scalar_objective(std::numeric_limits<double>::infinity(), 0.0, Lambda(1.0)),
      DomainError);
}

TEST_CASE("hard_keep kills small entries and ties", "[scalar]") {
  REQUIRE(hard_keep(0.5, Beta(2.0)) == 0.0);
  REQUIRE(hard_keep(-3.0, Beta(2.0)) == -3.0);

  // Exact boundary: (beta/2) v^2 == 1 bit-for-bit at beta=2, v=1; both
  // branches cost 1 and the tie goes to the zero branch.
  REQUIRE(0.5 * 2.0 * 1.0 * 1.0 == 1.0);
  REQUIRE(hard_keep(1.0, Beta(2.0)) == 0.0);
  REQUIRE(hard_keep(-1.0, Beta(2.0)) == 0.0);

  // sqrt(2) at beta=1 is a tie only in exact arithmetic: the rounded square
  // exceeds 2, so the keep branch is strictly cheaper and wins. Whatever the
  // branch, the exhaustive oracle must agree it is optimal.
  const double root2 = std::sqrt(2.0);
  const double kept = hard_keep(root2, Beta(1.0));
  const OracleReport report = support_enum_l0(
      DenseMatrix(1, 1, {root2}), Beta(1.0), DenseMatrix(1, 1, {kept}));
  REQUIRE(report.pass);
  REQUIRE(report.margin >= 0.0);

  REQUIRE_THROWS_AS(hard_keep(std::numeric_limits<double>::quiet_NaN(), Beta(1.0)),
                    DomainError);
}

TEST_CASE("shrink is exactly odd and matches the branch oracle", "[scalar]") {
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const double lam = rng.uniform_open() * 5.0;
    const Lambda lambda(lam);
    REQUIRE(shrink(-a, lambda) == -shrink(a, lambda));
    REQUIRE(shrink(a, lambda) == shrink_by_cases(a, lam));
    REQUIRE(std::abs(shrink(a, lambda)) == std::max(std::abs(a) - lam, 0.0));
  }
}

TEST_CASE("shrink is nonexpansive and monotone in lambda", "[scalar]") {
  Rng rng(32);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const double b = rng.uniform(-10.0, 10.0);
    const double lam1 = rng.uniform_open() * 5.0;
    const double lam2 = lam1 + rng.uniform_open() * 5.0;
    const double slack = 1e-13 * (std::abs(a) + std::abs(b) + lam1);
    REQUIRE(std::abs(shrink(a, Lambda(lam1)) - shrink(b, Lambda(lam1))) <=
            std::abs(a - b) + slack);
    REQUIRE(std::abs(shrink(a, Lambda(lam1))) >= std::abs(shrink(a, Lambda(lam2))));
  }
}

TEST_CASE("shrink minimizes the objective over a dense grid", "[scalar]") {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(-10.0, 10.0);
    const Lambda lambda(rng.uniform_open() * 5.0);
    const double x_star = shrink(a, lambda);
    const double f_star = scalar_objective(x_star, a, lambda);

    const double lo = a - 3.0 * lambda.value() - 1.0;
    const double hi = a + 3.0 * lambda.value() + 1.0;
    const int steps = 100000;
    double best_grid = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= steps; ++s) {
      const double x = lo + (hi - lo) * static_cast<double>(s) / steps;
      best_grid = std::min(best_grid, scalar_objective(x, a, lambda));
    }
    REQUIRE(f_star <= best_grid + 1e-12);
  }
}

TEST_CASE("hard_keep always picks the cheaper branch", "[scalar]") {
  Rng rng(34);
  for (int i = 0; i < 5000; ++i) {
    const double v = rng.uniform(-4.0, 4.0);
    const Beta beta(rng.uniform_open() * 5.0);
    const double kept = hard_keep(v, beta);
    const double zero_cost = 0.5 * beta.value() * v * v;
    const double keep_cost = (v != 0.0) ? 1.0 : 0.0;
    const double chosen = (kept == 0.0) ? zero_cost : keep_cost;
    REQUIRE(chosen <= std::min(zero_cost, keep_cost));
  }
}
