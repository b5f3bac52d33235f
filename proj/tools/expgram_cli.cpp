// Command-line front end: compute e^{tA} and the Gramian Cholesky factor for
// matrices given as text files, run the bundled experiments, verify the
// integer coefficient tables, and re-derive the eta thresholds.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expgram/bounds.hpp"
#include "expgram/expgram.hpp"
#include "expgram/experiments.hpp"
#include "expgram/oracle.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

int run_compute(const std::string& a_file, const std::string& b_file,
                double t, const std::string& out_prefix) {
  expgram::Matrix<double> a = expgram::parse_matrix_file(a_file);
  expgram::Matrix<double> b = expgram::parse_matrix_file(b_file);
  expgram::ExpGramResult res = expgram::exp_and_gram({a, b, t});
  expgram::write_matrix_file(res.phi, out_prefix + "_phi.txt");
  expgram::write_matrix_file(res.u, out_prefix + "_u.txt");
  const double norm_ta = expgram::one_norm(t * a);
  std::printf("q=%d s=%d norm_tA=%.17g\n", res.order_scaling.q,
              res.order_scaling.s, norm_ta);
  return 0;
}

int run_experiment(const std::string& id, const std::string& out_file,
                   const std::string& format, int n_min, int n_max,
                   const std::vector<double>& lambdas,
                   const std::vector<int>& ms, int reps, unsigned long seed,
                   int digits, bool include_hard) {
  expgram::PrecisionSpec prec{digits};
  expgram::ExperimentReport report;
  if (id == "integrator") {
    report = expgram::run_integrator_experiment(n_min < 2 ? 2 : n_min,
                                                n_max, prec);
  } else if (id == "laguerre") {
    report = expgram::run_laguerre_experiment(lambdas, n_min, n_max, prec);
  } else if (id == "gallery") {
    report = expgram::run_gallery_experiment(ms, reps, seed, prec,
                                             include_hard);
    report.seed = seed;
  } else {
    std::fprintf(stderr, "unknown experiment id '%s'\n", id.c_str());
    return kExitUsage;
  }
  std::ofstream out(out_file);
  if (!out) {
    std::fprintf(stderr, "cannot open output file '%s'\n", out_file.c_str());
    return kExitFailure;
  }
  if (format == "json")
    expgram::write_report_json(report, out);
  else
    expgram::write_report_csv(report, out);
  std::printf("%s: %zu cases -> %s\n", report.experiment.c_str(),
              report.records.size(), out_file.c_str());
  return 0;
}

int run_verify_tables() {
  bool all_ok = true;
  for (int q : expgram::kSupportedOrders) {
    const bool ok = expgram::verify_tables(q);
    std::printf("q=%-2d %s\n", q, ok ? "ok" : "MISMATCH");
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : kExitFailure;
}

int run_derive_eta(int q, int digits, int order, int p) {
  const double eta = expgram::find_eta(q, expgram::PrecisionSpec{digits},
                                       order, p);
  std::printf("q=%d eta=%.6g table=%.2g\n", q, eta,
              expgram::BoundTable::eta[q]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix exponential and Cholesky-factored finite-horizon "
               "controllability Gramian"};
  app.require_subcommand(1);

  // compute
  std::string a_file, b_file, out_prefix = "out";
  double t = 1.0;
  auto* compute = app.add_subcommand(
      "compute", "compute e^{tA} and the Gramian factor for matrix files");
  compute->add_option("a_file", a_file, "text file holding A")->required();
  compute->add_option("b_file", b_file, "text file holding B")->required();
  compute->add_option("--t", t, "integration horizon (must be positive)")
      ->check(CLI::PositiveNumber);
  compute->add_option("--out", out_prefix, "output file prefix");

  // experiment
  std::string id, out_file = "report.csv", format = "csv";
  int n_min = -1, n_max = -1, reps = 50, digits = 60;
  unsigned long seed = 2024;
  bool include_hard = false;
  std::vector<double> lambdas = {1.0, 2.5, 5.0};
  std::vector<int> ms = {1, 5, 10};
  auto* experiment = app.add_subcommand(
      "experiment", "run a bundled experiment and write a report");
  experiment->add_option("id", id, "integrator | laguerre | gallery")
      ->required()
      ->check(CLI::IsMember({"integrator", "laguerre", "gallery"}));
  experiment->add_option("--out", out_file, "report file");
  experiment->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--n-min", n_min, "smallest dimension");
  experiment->add_option("--n-max", n_max, "largest dimension");
  experiment->add_option("--lambda", lambdas, "laguerre decay rates");
  experiment->add_option("--m", ms, "B column counts (gallery)");
  experiment->add_option("--reps", reps, "repetitions per case (gallery)");
  experiment->add_option("--seed", seed, "random seed (gallery)");
  experiment->add_option("--digits", digits, "oracle decimal digits")
      ->check(CLI::Range(50, 1000));
  experiment->add_flag("--include-hard", include_hard,
                       "add the large-norm positive-eigenvalue cases");

  // verify-tables
  auto* verify = app.add_subcommand(
      "verify-tables",
      "re-derive the coefficient tables exactly and compare");

  // derive-eta
  int eta_q = 13, eta_digits = 120, eta_order = 150, eta_p = 2;
  auto* derive = app.add_subcommand(
      "derive-eta", "re-derive the scaling threshold eta for one order");
  derive->add_option("--q", eta_q, "order (1..21)")->check(CLI::Range(1, 21));
  derive->add_option("--digits", eta_digits, "working decimal digits")
      ->check(CLI::Range(50, 2000));
  derive->add_option("--order", eta_order, "series truncation order");
  derive->add_option("--p", eta_p, "grid points per subinterval")
      ->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (compute->parsed()) return run_compute(a_file, b_file, t, out_prefix);
    if (experiment->parsed()) {
      if (n_min < 0) n_min = (id == "integrator") ? 2 : 1;
      if (n_max < 0) n_max = (id == "integrator") ? 30 : 100;
      return run_experiment(id, out_file, format, n_min, n_max, lambdas, ms,
                            reps, seed, digits, include_hard);
    }
    if (verify->parsed()) return run_verify_tables();
    if (derive->parsed())
      return run_derive_eta(eta_q, eta_digits, eta_order, eta_p);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
