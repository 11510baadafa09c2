// Build a noisy low-rank matrix, then recover structure three ways:
// singular value thresholding, nuclear-ball projection, and entry-wise
// sparse approximation. Prints the spectra before and after.

#include <cstdio>

#include "proxkit/proxkit.hpp"

using namespace proxkit;

namespace {

void print_spectrum(const char* label, const std::vector<double>& sigma) {
  std::printf("%-22s", label);
  for (double s : sigma) std::printf(" %8.4f", s);
  std::printf("\n");
}

}  // namespace

int main() {
  Rng rng(7);

  // Rank-2 signal plus small dense noise.
  const std::size_t m = 8, n = 6;
  DenseMatrix left(m, 2), right(2, n);
  for (double& e : left.entries()) e = rng.gaussian();
  for (double& e : right.entries()) e = rng.gaussian();
  DenseMatrix a = matmul(left, right);
  for (double& e : a.entries()) e += 0.05 * rng.gaussian();

  print_spectrum("input spectrum", svd(a).sigma);

  const ProxSolution low_rank = svt(a, Beta(2.0));
  print_spectrum("after svt (beta=2)", low_rank.sigma_out);
  std::printf("svt rank: %zu, objective: %.6f\n\n", low_rank.rank_out,
              low_rank.objective);

  const Tau budget(0.5 * nuclear_norm(a));
  const ProxSolution projected = nuclear_ball_nearest(a, budget);
  print_spectrum("after nuclear ball", projected.sigma_out);
  std::printf("budget %.4f achieved with lambda* = %.6f\n\n", budget.value(),
              projected.effective_lambda);

  const DenseMatrix sparse = l0_approx(a, Beta(0.5));
  std::printf("hard threshold kept %zu of %zu entries\n", nonzero_count(sparse),
              sparse.size());
  return 0;
}
