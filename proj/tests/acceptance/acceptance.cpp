// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "katu/frac_ops.hpp"
#include "katu/picard.hpp"
#include "katu/special_fn.hpp"
#include "../support.hpp"

using namespace katu;
using katu_test::run_cli;
using katu_test::scratch_dir;
using katu_test::slurp;
using katu_test::stage_config;
using mp = boost::multiprecision::cpp_bin_float_50;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Ball excursions of every solver run made here, for criterion 8.
struct BallLog {
  double worst_ratio = 0.0;
  std::size_t runs = 0;
  std::size_t iterates = 0;

  void record(const SolveResult& res, const ProblemSpec& spec) {
    ++runs;
    for (const auto& it : res.iterates) {
      ++iterates;
      double dev = 0.0;
      for (double v : it) dev = std::max(dev, std::abs(v - spec.x_a));
      worst_ratio = std::max(worst_ratio, dev / spec.hyp.ball_radius);
    }
  }
};

BallLog ball_log;

std::shared_ptr<const GradedMesh> mesh2048(double L = 1.0) {
  return std::make_shared<const GradedMesh>(L, 2048, 3.0);
}

Outcome closed_form_integrals() {
  const auto m = mesh2048();
  double worst_loose = 0.0, worst_exact = 0.0;
  std::size_t bad = 0;
  std::string first_bad;
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (double sigma : {0.0, 0.5, 1.5}) {
      for (double rho : {1.0, 2.0}) {
        const FracParams p(alpha, 0.0, rho, 1.0);
        const PowerFn q = PowerFn::monomial(1.0, sigma);
        const auto g = sample_on_mesh(m, [&](double u) { return std::pow(to_u(to_t(u, p), p), sigma); });
        const auto got = katugampola_integral_grid(g, alpha);
        const auto want = integral_power(q, alpha);
        const bool exact = (sigma == 0.0 || sigma == 1.0);
        const double tol = exact ? 1e-6 : 1e-3;
        for (std::size_t i = 0; i < m->size(); ++i) {
          const double w = want((*m)[i]);
          const double err = w == 0.0 ? std::abs(got[i]) : std::abs(got[i] - w) / std::abs(w);
          (exact ? worst_exact : worst_loose) = std::max(exact ? worst_exact : worst_loose, err);
          if (err > tol) {
            if (bad++ == 0) {
              first_bad = "alpha=" + fmt("%g", alpha) + " sigma=" + fmt("%g", sigma) + " rho=" + fmt("%g", rho) +
                          " node " + std::to_string(i) + " rel " + fmt("%.3g", err);
            }
          }
        }
      }
    }
  }
  std::string d = "worst rel err " + fmt("%.3g", worst_loose) + " (sigma 0.5, 1.5), " + fmt("%.3g", worst_exact) +
                  " (sigma 0); " + std::to_string(bad) + " node failures";
  if (bad) d += "; first: " + first_bad;
  return {bad == 0, d};
}

Outcome semigroup() {
  const auto m = mesh2048();
  const auto g = sample_on_mesh(m, [](double u) { return u * u; });
  const auto two = katugampola_integral_grid(katugampola_integral_grid(g, 0.4), 0.3);
  const auto one = katugampola_integral_grid(g, 0.7);
  double diff = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < m->size(); ++i) {
    diff = std::max(diff, std::abs(two[i] - one[i]));
    sup = std::max(sup, std::abs(one[i]));
  }
  const double rel = diff / sup;
  return {rel <= 1e-3, "relative sup difference " + fmt("%.3g", rel)};
}

Outcome annihilation() {
  std::size_t power_fail = 0;
  for (double alpha : {0.2, 0.5, 0.8}) {
    const FracParams rl(alpha, 0.0, 1.0, 0.0);
    if (!generalized_derivative_power(PowerFn::monomial(1.0, alpha - 1.0), rl).is_zero()) ++power_fail;
    for (double beta : {0.0, 0.5, 1.0}) {
      const FracParams p(alpha, beta, 1.0, 0.0);
      if (!generalized_derivative_power(PowerFn::monomial(1.0, p.gamma_w() - 1.0), p).is_zero()) ++power_fail;
    }
  }

  const auto m = mesh2048();
  const double x_a = 1.0;
  double worst = 0.0;
  auto interior = [&](const GridFunction& d) {
    for (std::size_t i = 1; i + 1 < d.size(); ++i) worst = std::max(worst, std::abs(d[i]));
  };
  for (double alpha : {0.2, 0.5, 0.8}) {
    interior(katugampola_derivative_grid(sample_on_mesh(m, [&](double u) { return std::pow(u, alpha - 1.0); }), alpha));
    for (double beta : {0.0, 0.5, 1.0}) {
      const FracParams p(alpha, beta, 1.0, 0.0);
      const auto g = sample_on_mesh(m, [&](double u) { return x_a * std::pow(u, p.gamma_w() - 1.0); });
      interior(generalized_derivative_grid(g, p));
    }
  }
  return {power_fail == 0 && worst <= 1e-2, std::to_string(power_fail) + " closed-form non-zero results; grid sup " +
                                                "over interior nodes " + fmt("%.3g", worst)};
}

Outcome gauss_product() {
  const double g = katu::gamma(0.5);
  const double e5 = std::abs(gauss_gamma_product(0.5, 100000) - g);
  const double e4 = std::abs(gauss_gamma_product(0.5, 10000) - g);
  return {e5 <= 1e-4 * g && e5 < e4, "error " + fmt("%.3g", e5) + " at m=1e5, " + fmt("%.3g", e4) + " at m=1e4"};
}

Outcome mittag_leffler_oracle() {
  const FracParams p(0.7, 0.5, 1.5, 1.0);
  const auto spec = make_problem(p, 1.0, "-x", {2.0, p.gamma_w() - 1.0, 1.0, 1.0, 1.0});
  SolverConfig cfg{2048, 3.0, 1e-8, 200, true};
  const auto res = picard_solve(spec, cfg);
  ball_log.record(res, spec);

  const auto again = picard_solve(spec, cfg, std::vector<double>(res.mesh->size(), 1.5));
  ball_log.record(again, spec);

  // 50-digit series for Γ(0.85) E_{0.7,0.85}(-u^0.7)
  std::vector<mp> coef(300);
  for (int j = 0; j < 300; ++j) coef[j] = 1 / boost::math::tgamma(mp(0.7) * j + mp(0.85));
  double err = 0.0;
  for (std::size_t i = 0; i < res.mesh->size(); ++i) {
    const double u = (*res.mesh)[i];
    mp z = -pow(mp(u), mp(0.7)), term = 1, sum = 0;
    for (int j = 0; j < 300; ++j) {
      sum += term * coef[j];
      term *= z;
    }
    const double want = static_cast<double>(boost::math::tgamma(mp(0.85)) * sum);
    err = std::max(err, std::abs(res.weighted_solution[i] - want));
  }
  const bool ok = err <= 1e-3 && res.converged && res.residual_sup <= 1e-3;
  return {ok, "sup error " + fmt("%.3g", err) + ", converged " + (res.converged ? "true" : "false") + " after " +
                  std::to_string(res.iterations_used) + " iterations, residual " + fmt("%.3g", res.residual_sup)};
}

const FracParams kStd(0.5, 0.5, 1.0, 0.0);
const HypothesisData kStdHyp{1.0, 0.0, 1.0, 1.0, 1.0};

double standard_radius() { return existence_radius(make_problem(kStd, 1.0, "1", kStdHyp)); }

Outcome radius() {
  const double l = standard_radius();
  const mp a = 0.5, k = 0, mu = 0.75, b = 1, M = 1, h = 1;
  const mp branch = pow(b / M * boost::math::tgamma(a) / boost::math::beta(a, k + 1), 1 / (mu + k));
  const double oracle = static_cast<double>(branch < h ? branch : h);
  const bool ok = std::abs(l - 0.8513) <= 5e-4 && std::abs(l - oracle) <= 1e-13;
  char text[128];
  std::snprintf(text, sizeof text, "l = %.10f, extended-precision value %.10f", l, oracle);
  return {ok, text};
}

Outcome diagnostics() {
  const double l = standard_radius();
  const auto r = ratio_sequence(20, kStd, kStdHyp, l);
  bool decreasing = true;
  for (std::size_t n = 3; n < r.size(); ++n) decreasing = decreasing && r[n] < r[n - 1];  // r_{n+1} < r_n, n >= 3
  bool finite = true;
  for (std::size_t n = 0; n <= 200; ++n) {
    const auto t = apriori_products(n, kStd, kStdHyp, l);
    finite = finite && std::isfinite(t.log_term_u_n) && std::isfinite(t.log_P_n);
  }
  const double r20 = r.back();
  return {decreasing && r20 < 0.05 && finite,
          std::string("decreasing from n=3 ") + (decreasing ? "yes" : "no") + ", r_20 = " + fmt("%.4g", r20) +
              ", log terms finite to n=200 " + (finite ? "yes" : "no")};
}

Outcome ball_invariant() {
  {
    // x-independent right side, from the picard examples
    const FracParams p(0.6, 0.5, 1.0, 0.0);
    const auto spec = make_problem(p, 1.0, "u^0.5", {1.0, 0.5, 1.0, 1.0, 1.0});
    ball_log.record(picard_solve(spec, {2048, 3.0, 1e-8, 200, true}), spec);
  }
  {
    const auto spec = make_problem(kStd, 0.5, "0.5 * u^0.25", {0.5, 0.25, 1.0, 1.0, 1.0});
    ball_log.record(picard_solve(spec, {2048, 3.0, 1e-8, 200, true}), spec);
  }
  return {ball_log.worst_ratio <= 1.0 && ball_log.iterates > 0,
          std::to_string(ball_log.runs) + " runs, " + std::to_string(ball_log.iterates) +
              " iterates, worst max|w-x_a|/b = " + fmt("%.4g", ball_log.worst_ratio)};
}

Outcome limit_cases() {
  const FracParams p(0.37, 0.0, 1.0, 0.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 0.0173 * i;
    const double t = s + 0.01 + 0.031 * ((7 * i) % 23);
    const double rl = std::pow(t - s, p.alpha() - 1.0);
    worst = std::max(worst, std::abs(katugampola_kernel(t, s, p) - rl) / rl);
  }
  const auto dir = scratch_dir("accept-limit");
  const std::vector<std::string> common = {"--alpha", "0.5", "--expr", "exp(-u) + u^2", "--rho", "1", "--a", "0"};
  auto d = common, g = common;
  d.insert(d.begin(), "derivative");
  g.insert(g.begin(), "generalized");
  g.insert(g.end(), {"--beta", "0"});
  const auto a = run_cli(d, dir);
  const auto b = run_cli(g, dir);
  const bool same = a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out;
  return {worst <= 1e-15 && same, "kernel worst relative difference " + fmt("%.3g", worst) +
                                      ", CLI outputs " + (same ? "byte-identical" : "differ")};
}

Outcome interfaces() {
  std::string csv[2], rep[2];
  int exit_ok = -1;
  std::vector<std::string> schema_errors;
  for (int i = 0; i < 2; ++i) {
    const auto dir = scratch_dir("accept-det");
    const auto cfg = stage_config("linear.ini", dir);
    exit_ok = run_cli({"solve", cfg.string()}, dir).status;
    csv[i] = slurp(dir / "linear.csv");
    rep[i] = slurp(dir / "linear.report.json");
    if (i == 0) schema_errors = katu_test::validate_report(dir / "linear.report.json");
  }
  const auto dir = scratch_dir("accept-exit");
  const int exit_err = run_cli({"solve", stage_config("bad_alpha.ini", dir).string()}, dir).status;
  const int exit_nc = run_cli({"solve", stage_config("truncated.ini", dir).string()}, dir).status;
  const auto nc_schema = katu_test::validate_report(dir / "truncated.report.json");
  schema_errors.insert(schema_errors.end(), nc_schema.begin(), nc_schema.end());

  const bool identical = !csv[0].empty() && csv[0] == csv[1] && rep[0] == rep[1];
  const bool ok = identical && schema_errors.empty() && exit_ok == 0 && exit_err == 1 && exit_nc == 2;
  return {ok, std::string("outputs ") + (identical ? "byte-identical" : "differ") + ", " +
                  std::to_string(schema_errors.size()) + " schema errors, exit codes " + std::to_string(exit_ok) +
                  "/" + std::to_string(exit_err) + "/" + std::to_string(exit_nc)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form integral identities", closed_form_integrals},
      {"semigroup of integrals", semigroup},
      {"annihilation", annihilation},
      {"gauss gamma product", gauss_product},
      {"picard vs mittag-leffler", mittag_leffler_oracle},
      {"existence radius", radius},
      {"convergence diagnostics", diagnostics},
      {"ball invariant", ball_invariant},
      {"limit-case consistency", limit_cases},
      {"determinism and interfaces", interfaces},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
