#pragma once

#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "expgram/core.hpp"
#include "expgram/oracle.hpp"

namespace expgram {

/// One experiment case: relative 1-norm errors of the computed Gramian
/// (u'u), its Cholesky factor and the exponential against the applicable
/// reference, together with the order/scaling actually selected.
struct ExperimentRecord {
  std::string label;
  int n = 0;
  int m = 0;
  double param = 0.0;
  int rep = 0;
  double rel_err_gram = 0.0;
  double rel_err_chol = 0.0;
  double rel_err_exp = 0.0;
  int q = 0;
  int s = 0;
};

struct ExperimentReport {
  std::string experiment;
  unsigned long seed = 0;
  int digits = 60;
  std::vector<ExperimentRecord> records;
};

namespace detail {

inline Matrix<MpReal> gram_of_factor_mp(const Matrix<double>& u) {
  Matrix<MpReal> um = to_mp(u);
  return um.transposed() * um;
}

inline double factor_error(const Matrix<double>& u,
                           const Matrix<MpReal>& ref_gram) {
  Matrix<MpReal> ref_chol = mp_cholesky_upper(ref_gram);
  normalize_factor_signs(ref_chol);
  Matrix<double> uu = u;
  normalize_factor_signs(uu);
  return rel_error_1norm(uu, ref_chol);
}

}  // namespace detail

/// Integrator chain (nilpotent shift + first unit vector), compared against
/// the exact closed form. Serves as the end-to-end smoke experiment.
inline ExperimentReport run_integrator_experiment(int n_min, int n_max,
                                                  const PrecisionSpec& prec) {
  ExperimentReport report;
  report.experiment = "integrator";
  report.digits = prec.decimal_digits;
  for (int n = n_min; n <= n_max; ++n) {
    Problem p = integrator_pair(n);
    ExpGramResult res = exp_and_gram(p);
    auto [g_exact, u_exact] = integrator_closed_form(n, prec);
    ScopedPrecision guard(prec);
    ExperimentRecord rec;
    rec.label = "integrator";
    rec.n = n;
    rec.m = 1;
    rec.q = res.order_scaling.q;
    rec.s = res.order_scaling.s;
    rec.rel_err_gram =
        rel_error_1norm_mp(detail::gram_of_factor_mp(res.u), g_exact);
    Matrix<double> u = res.u;
    normalize_factor_signs(u);
    Matrix<MpReal> u_ref = u_exact;
    normalize_factor_signs(u_ref);
    rec.rel_err_chol = rel_error_1norm(u, u_ref);
    rec.rel_err_exp =
        rel_error_1norm(res.phi, expm_reference(p.a, prec));
    report.records.push_back(std::move(rec));
  }
  return report;
}

/// Laguerre networks for several decay rates, compared against the
/// algebraic-Lyapunov closed form I - e^A e^{A'}.
inline ExperimentReport run_laguerre_experiment(const std::vector<double>& lambdas,
                                                int n_min, int n_max,
                                                const PrecisionSpec& prec) {
  ExperimentReport report;
  report.experiment = "laguerre";
  report.digits = prec.decimal_digits;
  for (double lambda : lambdas) {
    for (int n = n_min; n <= n_max; ++n) {
      Problem p = laguerre_pair(n, lambda);
      ExpGramResult res = exp_and_gram(p);
      Matrix<MpReal> g_ref = laguerre_reference(p.a, prec);
      ScopedPrecision guard(prec);
      ExperimentRecord rec;
      rec.label = "laguerre";
      rec.n = n;
      rec.m = 1;
      rec.param = lambda;
      rec.q = res.order_scaling.q;
      rec.s = res.order_scaling.s;
      rec.rel_err_gram =
          rel_error_1norm_mp(detail::gram_of_factor_mp(res.u), g_ref);
      rec.rel_err_chol = detail::factor_error(res.u, g_ref);
      Matrix<MpReal> e_ref = expm_lower_toeplitz_mp(to_mp(p.a));
      rec.rel_err_exp = rel_error_1norm(res.phi, e_ref);
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

/// A self-contained 10x10 test gallery with varied spectra. The `zero`
/// case pairs with an identity-slice B so its result is exact; the others
/// get randomized B matrices. Hard cases (positive eigenvalues with very
/// large norms, forcing extreme numbers of doublings) are kept behind a
/// flag and excluded from the defaults.
struct GalleryCase {
  std::string label;
  Matrix<double> a;
  bool identity_b = false;
};

inline std::vector<GalleryCase> make_gallery(unsigned long seed,
                                             bool include_hard = false) {
  const int n = 10;
  std::vector<GalleryCase> cases;

  cases.push_back({"zero", Matrix<double>(n, n), true});
  cases.push_back({"integrator", integrator_pair(n).a, false});
  for (double lambda : {1.0, 2.5, 5.0}) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "laguerre_%g", lambda);
    cases.push_back({buf, laguerre_pair(n, lambda).a, false});
  }

  Matrix<double> diag(n, n);
  for (int i = 0; i < n; ++i) {
    double mag = std::pow(10.0, -1.0 + 2.0 * i / (n - 1.0));
    diag(i, i) = (i % 2 ? -mag : mag);
  }
  cases.push_back({"diag_logspace", std::move(diag), false});

  Matrix<double> toep(n, n);
  for (int i = 0; i < n; ++i) {
    toep(i, i) = -2.0;
    if (i > 0) toep(i, i - 1) = 1.0;
    if (i + 1 < n) toep(i, i + 1) = 1.0;
  }
  cases.push_back({"toeplitz_tridiag", std::move(toep), false});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<double> dense(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dense(i, j) = normal(rng);
  cases.push_back({"dense_normal", std::move(dense), false});

  Matrix<double> rot(n, n);
  for (int b = 0; b < n / 2; ++b) {
    double omega = b + 1.0;
    rot(2 * b, 2 * b + 1) = -omega;
    rot(2 * b + 1, 2 * b) = omega;
  }
  cases.push_back({"block_rotation", std::move(rot), false});

  if (include_hard) {
    // Unit eigenvalues attached to a huge norm: dozens of doublings.
    Matrix<double> jordan(n, n);
    for (int i = 0; i < n; ++i) {
      jordan(i, i) = 1.0;
      if (i + 1 < n) jordan(i, i + 1) = 1.0e7;
    }
    cases.push_back({"jordan_large", std::move(jordan), false});
  }
  return cases;
}

/// Gallery experiment: for every case, column count and repetition, draws a
/// fresh B, runs the solver and compares against the matrix-fraction oracle.
inline ExperimentReport run_gallery_experiment(const std::vector<int>& ms,
                                               int reps, unsigned long seed,
                                               const PrecisionSpec& prec,
                                               bool include_hard = false) {
  ExperimentReport report;
  report.experiment = "gallery";
  report.seed = seed;
  report.digits = prec.decimal_digits;
  const auto cases = make_gallery(seed, include_hard);
  std::mt19937_64 rng(seed + 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (const auto& c : cases) {
    const int n = static_cast<int>(c.a.rows());
    Matrix<MpReal> e_ref = expm_reference(c.a, prec);
    for (int m : ms) {
      const int actual_reps = c.identity_b ? 1 : reps;
      for (int rep = 0; rep < actual_reps; ++rep) {
        Matrix<double> b(n, m);
        if (c.identity_b) {
          for (int j = 0; j < m && j < n; ++j) b(j, j) = 1.0;
        } else {
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) b(i, j) = normal(rng);
        }
        ExpGramResult res = exp_and_gram({c.a, b, 1.0});
        Matrix<MpReal> g_ref = gramian_mfd(c.a, b, prec);
        ScopedPrecision guard(prec);
        ExperimentRecord rec;
        rec.label = c.label;
        rec.n = n;
        rec.m = m;
        rec.rep = rep;
        rec.q = res.order_scaling.q;
        rec.s = res.order_scaling.s;
        rec.rel_err_gram =
            rel_error_1norm_mp(detail::gram_of_factor_mp(res.u), g_ref);
        rec.rel_err_chol = detail::factor_error(res.u, g_ref);
        rec.rel_err_exp = rel_error_1norm(res.phi, e_ref);
        report.records.push_back(std::move(rec));
      }
    }
  }
  return report;
}

inline void write_report_csv(const ExperimentReport& report,
                             std::ostream& out) {
  out << "experiment,label,n,m,param,rep,rel_err_gram,rel_err_chol,"
         "rel_err_exp,q,s\n";
  char buf[256];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%g,%d,%.6e,%.6e,%.6e,%d,%d\n",
                  report.experiment.c_str(), r.label.c_str(), r.n, r.m,
                  r.param, r.rep, r.rel_err_gram, r.rel_err_chol,
                  r.rel_err_exp, r.q, r.s);
    out << buf;
  }
}

inline void write_report_json(const ExperimentReport& report,
                              std::ostream& out) {
  nlohmann::json j;
  j["experiment"] = report.experiment;
  j["seed"] = report.seed;
  j["digits"] = report.digits;
  j["cases"] = nlohmann::json::array();
  for (const auto& r : report.records) {
    j["cases"].push_back({{"label", r.label},
                          {"n", r.n},
                          {"m", r.m},
                          {"param", r.param},
                          {"rep", r.rep},
                          {"rel_err_gram", r.rel_err_gram},
                          {"rel_err_chol", r.rel_err_chol},
                          {"rel_err_exp", r.rel_err_exp},
                          {"q", r.q},
                          {"s", r.s}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace expgram
