// proxkit: closed-form sparse / low-rank approximation on CSV matrices.
//
// Subcommands map one-to-one onto the library operators; solutions go to
// stdout (or --output) as CSV, machine-readable diagnostics to --report as
// JSON, human-readable messages to stderr only.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "proxkit/proxkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitOracleFail = 5;

struct CommonArgs {
  std::string input = "-";
  std::string output = "-";
  std::string report;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("-i,--input", args->input, "Input CSV matrix path ('-' = stdin)");
  cmd->add_option("-o,--output", args->output, "Output CSV path ('-' = stdout)");
  cmd->add_option("--report", args->report, "Write a JSON run report to this path");
}

bool same_file(const std::string& a, const std::string& b) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path pa = fs::weakly_canonical(fs::path(a), ec);
  const fs::path pb = fs::weakly_canonical(fs::path(b), ec);
  return pa == pb;
}

void refuse_in_place(const CommonArgs& args) {
  if (args.input == "-") return;
  if (args.output != "-" && same_file(args.input, args.output)) {
    throw proxkit::IoError("output path must differ from input path");
  }
  if (!args.report.empty() && same_file(args.input, args.report)) {
    throw proxkit::IoError("report path must differ from input path");
  }
}

proxkit::MatrixDocument load_matrix(const CommonArgs& args) {
  if (args.input == "-") {
    return proxkit::read_csv(std::cin, "stdin");
  }
  std::ifstream in(args.input);
  if (!in) throw proxkit::IoError("cannot open input file: " + args.input);
  return proxkit::read_csv(in, args.input);
}

void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw proxkit::IoError("cannot open output file: " + path);
  write(out);
}

double lagrangian_objective(const proxkit::DenseMatrix& u,
                            const proxkit::DenseMatrix& v, double lambda) {
  return lambda * proxkit::l1_norm(u) +
         0.5 * proxkit::frobenius_norm_squared(u - v);
}

double penalized_l1_objective(const proxkit::DenseMatrix& u,
                              const proxkit::DenseMatrix& v, double beta) {
  return proxkit::l1_norm(u) + 0.5 * beta * proxkit::frobenius_norm_squared(u - v);
}

double penalized_l0_objective(const proxkit::DenseMatrix& u,
                              const proxkit::DenseMatrix& v, double beta) {
  return static_cast<double>(proxkit::nonzero_count(u)) +
         0.5 * beta * proxkit::frobenius_norm_squared(u - v);
}

struct OpResult {
  proxkit::DenseMatrix solution;
  proxkit::RunReport report;
};

OpResult run_shrink(const proxkit::DenseMatrix& v, double lambda_raw) {
  const proxkit::Lambda lambda(lambda_raw);
  proxkit::DenseMatrix u = proxkit::soft_threshold(v, lambda);
  proxkit::RunReport r;
  r.operation = "shrink";
  r.params = {{"lambda", lambda.value()}};
  r.effective_lambda = lambda.value();
  r.objective = lagrangian_objective(u, v, lambda.value());
  r.cardinality_out = proxkit::nonzero_count(u);
  return OpResult{std::move(u), std::move(r)};
}

OpResult run_sparse(const proxkit::DenseMatrix& v, const std::string& mode,
                    double beta_raw) {
  const proxkit::Beta beta(beta_raw);
  proxkit::RunReport r;
  r.params = {{"beta", beta.value()}};
  proxkit::DenseMatrix u(1, 1);
  if (mode == "l1") {
    u = proxkit::soft_threshold(v, proxkit::Lambda(1.0 / beta.value()));
    r.operation = "sparse-l1";
    r.effective_lambda = 1.0 / beta.value();
    r.objective = penalized_l1_objective(u, v, beta.value());
  } else {
    u = proxkit::l0_approx(v, beta);
    r.operation = "sparse-l0";
    // Entries with magnitude at or below this level were zeroed.
    r.effective_lambda = std::sqrt(2.0 / beta.value());
    r.objective = penalized_l0_objective(u, v, beta.value());
  }
  r.cardinality_out = proxkit::nonzero_count(u);
  return OpResult{std::move(u), std::move(r)};
}

OpResult run_svt(const proxkit::DenseMatrix& a, double beta_raw) {
  const proxkit::Beta beta(beta_raw);
  proxkit::ProxSolution sol = proxkit::svt(a, beta);
  proxkit::RunReport r;
  r.operation = "svt";
  r.params = {{"beta", beta.value()}};
  r.effective_lambda = sol.effective_lambda;
  r.objective = sol.objective;
  r.sigma_in = std::move(sol.sigma_in);
  r.sigma_out = std::move(sol.sigma_out);
  r.rank_out = sol.rank_out;
  r.cardinality_out = proxkit::nonzero_count(sol.solution);
  return OpResult{std::move(sol.solution), std::move(r)};
}

OpResult run_nuclear_project(const proxkit::DenseMatrix& a, double tau_raw) {
  const proxkit::Tau tau(tau_raw);
  proxkit::ProxSolution sol = proxkit::nuclear_ball_nearest(a, tau);
  proxkit::RunReport r;
  r.operation = "nuclear-project";
  r.params = {{"tau", tau.value()}};
  r.effective_lambda = sol.effective_lambda;
  r.objective = sol.objective;
  r.sigma_in = std::move(sol.sigma_in);
  r.sigma_out = std::move(sol.sigma_out);
  r.rank_out = sol.rank_out;
  r.cardinality_out = proxkit::nonzero_count(sol.solution);
  return OpResult{std::move(sol.solution), std::move(r)};
}

proxkit::OracleReport check_oracle(const std::string& op, const std::string& mode,
                                   const proxkit::DenseMatrix& v,
                                   const OpResult& result, std::uint64_t seed) {
  const proxkit::DenseMatrix& u = result.solution;
  const double radius = 0.1 * std::max(1.0, proxkit::frobenius_norm(v));
  constexpr std::size_t kTrials = 1000;

  if (op == "shrink") {
    const double lambda = result.report.effective_lambda;
    return proxkit::perturbation_check(
        u, [&](const proxkit::DenseMatrix& x) { return lagrangian_objective(x, v, lambda); },
        kTrials, radius, seed, proxkit::kScalarOracleTol);
  }
  if (op == "sparse" && mode == "l1") {
    const double beta = result.report.params.front().second;
    return proxkit::perturbation_check(
        u, [&](const proxkit::DenseMatrix& x) { return penalized_l1_objective(x, v, beta); },
        kTrials, radius, seed, proxkit::kScalarOracleTol);
  }
  if (op == "sparse") {
    const double beta = result.report.params.front().second;
    return proxkit::support_enum_l0(v, proxkit::Beta(beta), u,
                                    proxkit::kScalarOracleTol);
  }
  if (op == "svt") {
    const double beta = result.report.params.front().second;
    const auto objective = [&](const proxkit::DenseMatrix& x) {
      return proxkit::oracle_nuclear_norm(x) +
             0.5 * beta * proxkit::frobenius_norm_squared(x - v);
    };
    return proxkit::perturbation_check(u, objective, kTrials, radius, seed,
                                       proxkit::kSpectralOracleTol);
  }

  // nuclear-project: distance objective over the tau-ball, infeasible
  // competitors flagged by +inf; extra competitors come from a feasible
  // spectrum generator on A's own singular subspaces.
  const double tau = result.report.params.front().second;
  const auto objective = [&](const proxkit::DenseMatrix& x) {
    if (proxkit::oracle_nuclear_norm(x) > tau * (1.0 + 1e-9)) {
      return std::numeric_limits<double>::infinity();
    }
    return proxkit::frobenius_norm(x - v);
  };
  const proxkit::SvdFactorization f = proxkit::svd(v);
  const auto feasible = [&](proxkit::Rng& rng) {
    std::vector<double> s(f.sigma.size());
    double total = 0.0;
    for (double& x : s) {
      x = std::abs(rng.gaussian());
      total += x;
    }
    const double scale = total > 0.0 ? tau * rng.uniform() / total : 0.0;
    proxkit::DenseMatrix scaled = f.u;
    for (std::size_t j = 0; j < scaled.cols(); ++j) {
      for (std::size_t i = 0; i < scaled.rows(); ++i) {
        scaled(i, j) *= s[j] * scale;
      }
    }
    return proxkit::matmul(scaled, proxkit::transpose(f.v));
  };
  return proxkit::perturbation_check(u, objective, kTrials, radius, seed,
                                     proxkit::kSpectralOracleTol, feasible);
}

int dispatch(const std::string& subcommand, const CommonArgs& common,
             const std::string& op, const std::string& mode, double lambda,
             double beta, double tau, std::uint64_t seed) {
  refuse_in_place(common);
  const proxkit::MatrixDocument doc = load_matrix(common);
  const proxkit::DenseMatrix& v = doc.matrix;

  if (subcommand == "svd") {
    const proxkit::SvdFactorization f = proxkit::svd(v);
    proxkit::RunReport r;
    r.operation = "svd";
    r.sigma_in = f.sigma;
    r.sigma_out = f.sigma;
    r.rank_out = proxkit::detail::count_above_rank_threshold(f.sigma, f.sigma[0]);
    r.cardinality_out = r.rank_out;
    emit(common.output, [&](std::ostream& o) { proxkit::write_values(f.sigma, o); });
    if (!common.report.empty()) {
      emit(common.report, [&](std::ostream& o) { proxkit::write_report(r, o); });
    }
    return kExitOk;
  }

  const std::string effective_op = subcommand == "check" ? op : subcommand;
  OpResult result = [&] {
    if (effective_op == "shrink") return run_shrink(v, lambda);
    if (effective_op == "sparse") return run_sparse(v, mode, beta);
    if (effective_op == "svt") return run_svt(v, beta);
    return run_nuclear_project(v, tau);
  }();

  int exit_code = kExitOk;
  if (subcommand == "check") {
    const proxkit::OracleReport oracle =
        check_oracle(effective_op, mode, v, result, seed);
    result.report.oracle = oracle;
    std::cerr << "oracle " << (oracle.pass ? "pass" : "FAIL") << ": margin "
              << oracle.margin << " over " << oracle.competitors_tested
              << " competitors (tolerance " << oracle.tolerance << ")\n";
    if (!oracle.pass) exit_code = kExitOracleFail;
  }

  emit(common.output, [&](std::ostream& o) { proxkit::write_csv(result.solution, o); });
  if (!common.report.empty()) {
    emit(common.report, [&](std::ostream& o) { proxkit::write_report(result.report, o); });
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-threshold operators on CSV matrices: entry-wise and "
               "spectral proximal maps, norm-ball projections, and brute-force "
               "solution checks"};
  app.require_subcommand(1);

  CommonArgs common;
  double lambda = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  std::string mode;
  std::string op;
  std::uint64_t seed = 0;

  CLI::App* cmd_shrink =
      app.add_subcommand("shrink", "Entry-wise soft threshold at a given lambda");
  add_common(cmd_shrink, &common);
  cmd_shrink->add_option("--lambda", lambda, "Threshold level (> 0)")->required();

  CLI::App* cmd_sparse = app.add_subcommand(
      "sparse", "Sparse approximation: l0 hard threshold or l1 soft threshold "
                "with lambda = 1/beta");
  add_common(cmd_sparse, &common);
  cmd_sparse->add_option("--mode", mode, "l0 or l1")
      ->required()
      ->check(CLI::IsMember({"l0", "l1"}));
  cmd_sparse->add_option("--beta", beta, "Balancing weight (> 0)")->required();

  CLI::App* cmd_svt =
      app.add_subcommand("svt", "Singular value thresholding at 1/beta");
  add_common(cmd_svt, &common);
  cmd_svt->add_option("--beta", beta, "Balancing weight (> 0)")->required();

  CLI::App* cmd_nuclear = app.add_subcommand(
      "nuclear-project", "Nearest matrix with nuclear norm at most tau");
  add_common(cmd_nuclear, &common);
  cmd_nuclear->add_option("--tau", tau, "Nuclear-norm budget (> 0)")->required();

  CLI::App* cmd_svd =
      app.add_subcommand("svd", "Write the singular values, one per line");
  add_common(cmd_svd, &common);

  CLI::App* cmd_check = app.add_subcommand(
      "check", "Run an operator, then audit its output with the matching "
               "brute-force oracle; exit 5 if the audit fails");
  add_common(cmd_check, &common);
  cmd_check->add_option("--op", op, "Operator to audit")
      ->required()
      ->check(CLI::IsMember({"shrink", "sparse", "svt", "nuclear-project"}));
  cmd_check->add_option("--mode", mode, "l0 or l1 (sparse only)")
      ->check(CLI::IsMember({"l0", "l1"}));
  cmd_check->add_option("--lambda", lambda, "Threshold level (shrink)");
  cmd_check->add_option("--beta", beta, "Balancing weight (sparse, svt)");
  cmd_check->add_option("--tau", tau, "Nuclear-norm budget (nuclear-project)");
  cmd_check->add_option("--seed", seed, "Oracle RNG seed (default 0)");

  try {
    app.parse(argc, argv);

    const std::string subcommand = app.get_subcommands().front()->get_name();
    if (subcommand == "check") {
      const auto require = [&](const std::string& flag) {
        if (cmd_check->count(flag) == 0) {
          throw CLI::RequiredError("check --op " + op + " requires " + flag);
        }
      };
      if (op == "shrink") require("--lambda");
      if (op == "sparse") {
        require("--mode");
        require("--beta");
      }
      if (op == "svt") require("--beta");
      if (op == "nuclear-project") require("--tau");
    }

    return dispatch(subcommand, common, op, mode, lambda, beta, tau, seed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const proxkit::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const proxkit::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const proxkit::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const proxkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}
