#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "proxkit/dense_matrix.hpp"
#include "proxkit/oracle.hpp"
#include "proxkit/svd.hpp"

#include "test_util.hpp"

using namespace proxkit;
using testutil::max_abs_diff;
using testutil::orthonormality_residual;
using testutil::random_matrix;
using testutil::random_orthogonal;
using testutil::reconstruction_residual;

TEST_CASE("DenseMatrix enforces its invariants at construction", "[linalg]") {
  REQUIRE_THROWS_AS(DenseMatrix(0, 3), DimensionError);
  REQUIRE_THROWS_AS(DenseMatrix(2, 0), DimensionError);
  REQUIRE_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  REQUIRE_THROWS_AS(
      DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}),
      DomainError);
  REQUIRE_THROWS_AS(
      DenseMatrix(1, 1, {std::numeric_limits<double>::infinity()}), DomainError);
}

TEST_CASE("matmul and transpose identities", "[linalg]") {
  Rng rng(41);
  const DenseMatrix m = random_matrix(rng, 4, 3, 5.0);
  REQUIRE(max_abs_diff(matmul(DenseMatrix::identity(4), m), m) == 0.0);
  REQUIRE(max_abs_diff(transpose(transpose(m)), m) == 0.0);

  const DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
  const DenseMatrix b(3, 2, {7, 8, 9, 10, 11, 12});
  REQUIRE(max_abs_diff(transpose(matmul(a, b)),
                       matmul(transpose(b), transpose(a))) == 0.0);

  REQUIRE_THROWS_AS(matmul(a, a), DimensionError);
}

TEST_CASE("entry-wise norms and diag_part", "[linalg]") {
  REQUIRE(frobenius_norm(DenseMatrix(2, 2)) == 0.0);
  REQUIRE(frobenius_norm(DenseMatrix::diagonal({3.0, 4.0})) == 5.0);

  REQUIRE(l1_norm(DenseMatrix::diagonal({3.0, -1.0})) == 4.0);
  REQUIRE(l1_norm(DenseMatrix(2, 3)) == 0.0);
  REQUIRE(l1_norm(DenseMatrix(1, 3, {1.0, -2.0, 0.5})) == 3.5);

  const DenseMatrix d = DenseMatrix::diagonal({3.0, 1.0});
  REQUIRE(max_abs_diff(diag_part(d), d) == 0.0);
  REQUIRE(max_abs_diff(diag_part(DenseMatrix(2, 2, {1, 2, 3, 4})),
                       DenseMatrix(2, 2, {1, 0, 0, 4})) == 0.0);
}

TEST_CASE("svd of simple matrices", "[linalg]") {
  const SvdFactorization id = svd(DenseMatrix::identity(3));
  REQUIRE(id.sigma == std::vector<double>{1.0, 1.0, 1.0});

  const SvdFactorization diag = svd(DenseMatrix::diagonal({3.0, -1.0}));
  REQUIRE(diag.sigma == std::vector<double>{3.0, 1.0});
  REQUIRE(max_abs_diff(svd_reconstruct(diag), DenseMatrix::diagonal({3.0, -1.0})) ==
          0.0);
}

TEST_CASE("svd reconstructs a random 5x3 matrix and matches the eig oracle",
          "[linalg]") {
  Rng rng(42);
  const DenseMatrix m = random_matrix(rng, 5, 3, 2.0);
  const SvdFactorization f = svd(m);

  REQUIRE(reconstruction_residual(f, m) <= 1e-10);
  REQUIRE(orthonormality_residual(f.u) <= 1e-10);
  REQUIRE(orthonormality_residual(f.v) <= 1e-10);
  for (std::size_t i = 0; i + 1 < f.sigma.size(); ++i) {
    REQUIRE(f.sigma[i] >= f.sigma[i + 1]);
  }

  const std::vector<double> eigs = symmetric_eigs_jacobi(matmul(transpose(m), m));
  const double scale = std::max(1.0, f.sigma[0] * f.sigma[0]);
  for (std::size_t i = 0; i < f.sigma.size(); ++i) {
    REQUIRE(std::abs(f.sigma[i] * f.sigma[i] - eigs[i]) <= 1e-8 * scale);
  }
}

TEST_CASE("svd handles wide, rank-deficient, and zero matrices", "[linalg]") {
  Rng rng(43);

  const DenseMatrix wide = random_matrix(rng, 3, 7, 1.5);
  const SvdFactorization fw = svd(wide);
  REQUIRE(fw.u.rows() == 3);
  REQUIRE(fw.u.cols() == 3);
  REQUIRE(fw.v.rows() == 7);
  REQUIRE(fw.v.cols() == 3);
  REQUIRE(reconstruction_residual(fw, wide) <= 1e-10);
  REQUIRE(orthonormality_residual(fw.u) <= 1e-10);
  REQUIRE(orthonormality_residual(fw.v) <= 1e-10);

  const DenseMatrix lowrank =
      testutil::matrix_with_spectrum(rng, 6, 4, {5.0, 2.0});  // rank 2 of 4
  const SvdFactorization fl = svd(lowrank);
  REQUIRE(reconstruction_residual(fl, lowrank) <= 1e-10);
  REQUIRE(orthonormality_residual(fl.u) <= 1e-10);
  REQUIRE(fl.sigma[0] == Catch::Approx(5.0).margin(1e-10));
  REQUIRE(fl.sigma[1] == Catch::Approx(2.0).margin(1e-10));
  REQUIRE(fl.sigma[2] <= 1e-10);
  REQUIRE(fl.sigma[3] <= 1e-10);

  // Exactly-zero matrix: canonical left factor, identity right factor.
  const SvdFactorization fz = svd(DenseMatrix(4, 2));
  REQUIRE(fz.sigma == std::vector<double>{0.0, 0.0});
  REQUIRE(orthonormality_residual(fz.u) == 0.0);
  REQUIRE(max_abs_diff(fz.v, DenseMatrix::identity(2)) == 0.0);

  // A zero column inside an otherwise full matrix.
  DenseMatrix with_zero_col = random_matrix(rng, 5, 3, 1.0);
  for (std::size_t i = 0; i < 5; ++i) with_zero_col(i, 1) = 0.0;
  const SvdFactorization fc = svd(with_zero_col);
  REQUIRE(reconstruction_residual(fc, with_zero_col) <= 1e-10);
  REQUIRE(orthonormality_residual(fc.u) <= 1e-10);
}

TEST_CASE("svd is deterministic with a fixed sign convention", "[linalg]") {
  Rng rng(44);
  const DenseMatrix m = random_matrix(rng, 6, 4, 3.0);
  const SvdFactorization f1 = svd(m);
  const SvdFactorization f2 = svd(m);
  REQUIRE(max_abs_diff(f1.u, f2.u) == 0.0);
  REQUIRE(max_abs_diff(f1.v, f2.v) == 0.0);
  REQUIRE(f1.sigma == f2.sigma);

  for (std::size_t j = 0; j < f1.u.cols(); ++j) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < f1.u.rows(); ++i) {
      if (std::abs(f1.u(i, j)) > best) {
        best = std::abs(f1.u(i, j));
        arg = i;
      }
    }
    REQUIRE(f1.u(arg, j) >= 0.0);
  }
}

TEST_CASE("svd reports non-convergence through ConvergenceError", "[linalg]") {
  const DenseMatrix m(2, 2, {1.0, 1.0, 0.0, 1.0});
  SvdOptions opts;
  opts.max_sweeps = 0;  // force the failure path
  try {
    svd(m, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    REQUIRE(e.residual() > opts.tol);
  }
}

TEST_CASE("nuclear norm basics and unitary invariance", "[linalg]") {
  REQUIRE(nuclear_norm(DenseMatrix::diagonal({3.0, 1.0})) == 4.0);
  REQUIRE(nuclear_norm(DenseMatrix(3, 3)) == 0.0);

  Rng rng(45);
  const DenseMatrix m = random_matrix(rng, 3, 3, 2.0);
  const DenseMatrix q = random_orthogonal(rng, 3);
  REQUIRE(orthonormality_residual(q) <= 1e-12);
  REQUIRE(std::abs(nuclear_norm(matmul(q, m)) - nuclear_norm(m)) <= 1e-9);
}

TEST_CASE("frobenius norm agrees with the singular value route", "[linalg]") {
  Rng rng(46);
  const DenseMatrix m = random_matrix(rng, 4, 4, 2.0);
  const SvdFactorization f = svd(m);
  double sum2 = 0.0;
  for (double s : f.sigma) sum2 += s * s;
  const double via_sigma = std::sqrt(sum2);
  const double direct = frobenius_norm(m);
  REQUIRE(std::abs(direct - via_sigma) <= 1e-10 * std::max(1.0, direct));
}

TEST_CASE("diagonal of a matrix never exceeds it in nuclear norm", "[linalg]") {
  Rng rng(47);
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = 1 + rng.uniform_index(6);
    const std::size_t n = 1 + rng.uniform_index(6);
    const DenseMatrix a = random_matrix(rng, m, n, 3.0);
    REQUIRE(nuclear_norm(diag_part(a)) <= nuclear_norm(a) + 1e-9);
  }
}
