#include "katu/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "katu/special_fn.hpp"

namespace katu {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_dev(std::span<const double> w, double centre) {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v - centre));
  return m;
}

double radical_inverse(std::size_t i, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

void validate(const HypothesisData& hyp, const FracParams& p) {
  if (!(hyp.bound_M >= 0.0) || !std::isfinite(hyp.bound_M)) {
    throw std::invalid_argument("M must be nonnegative, got " + fmt(hyp.bound_M));
  }
  if (!(hyp.lipschitz_A > 0.0) || !std::isfinite(hyp.lipschitz_A)) {
    throw std::invalid_argument("A must be positive, got " + fmt(hyp.lipschitz_A));
  }
  if (!(hyp.ball_radius > 0.0) || !std::isfinite(hyp.ball_radius)) {
    throw std::invalid_argument("ball_radius must be positive, got " + fmt(hyp.ball_radius));
  }
  if (!(hyp.horizon_h > 0.0) || !std::isfinite(hyp.horizon_h)) {
    throw std::invalid_argument("horizon_h must be positive, got " + fmt(hyp.horizon_h));
  }
  const double k = hyp.exponent_k;
  if (!std::isfinite(k) || !(k > p.beta_type() * (1.0 - p.alpha()) - 1.0) || !(k + p.mu() > 0.0)) {
    throw std::invalid_argument("k must exceed beta(1-alpha) - 1 = " + fmt(p.beta_type() * (1.0 - p.alpha()) - 1.0) +
                                ", got " + fmt(k));
  }
  const double lhs = p.alpha() + k + 1.0 - p.gamma_w();
  const double rhs = k + p.mu();
  if (std::abs(lhs - rhs) > 1e-15 * std::max(1.0, std::abs(k))) {
    throw std::logic_error("exponent identity alpha + k + 1 - gamma_w = k + mu fails");
  }
}

ProblemSpec make_problem(const FracParams& params, double x_a, std::string_view f_text,
                         const HypothesisData& hyp) {
  if (!std::isfinite(x_a)) throw std::invalid_argument("x_a must be finite");
  validate(hyp, params);
  ProblemSpec spec{params, x_a, expr::parse(f_text), hyp};
  const double t = params.a() + 0.5 * hyp.horizon_h;
  const double u = to_u(t, params);
  const double x = std::pow(u, params.gamma_w() - 1.0) * x_a;
  const double v = spec.f.eval({t, x, u});
  if (!std::isfinite(v)) {
    throw std::invalid_argument("f is not finite at the sample point t = " + fmt(t));
  }
  return spec;
}

double SolveResult::unweighted(std::size_t i, double gamma_w) const {
  const double u = (*mesh)[i];
  if (gamma_w == 1.0) return weighted_solution[i];
  if (u == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::pow(u, gamma_w - 1.0) * weighted_solution[i];
}

double existence_radius(const ProblemSpec& spec) {
  const auto& p = spec.params;
  const auto& hyp = spec.hyp;
  const double expo = hyp.exponent_k + p.mu();
  if (!(expo > 0.0)) throw std::domain_error("existence_radius: k + mu must be positive");
  if (hyp.bound_M == 0.0) return hyp.horizon_h;
  const double log_base = std::log(hyp.ball_radius) - std::log(hyp.bound_M) + log_gamma(p.alpha()) -
                          log_beta(p.alpha(), hyp.exponent_k + 1.0);
  const double branch = std::exp(log_base / expo);
  return std::min(hyp.horizon_h, branch);
}

GridFunction phi0(const ProblemSpec& spec, std::shared_ptr<const GradedMesh> mesh) {
  std::vector<double> w(mesh->size(), spec.x_a);
  return GridFunction(std::move(mesh), std::move(w));
}

PicardMap::PicardMap(const ProblemSpec& spec, std::shared_ptr<const GradedMesh> mesh)
    : spec_(spec), mesh_(std::move(mesh)), abel_(*mesh_, spec.params.alpha()) {
  const std::size_t n = mesh_->size();
  const double gw = spec_.params.gamma_w();
  t_.resize(n);
  to_x_.resize(n);
  to_w_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (*mesh_)[i];
    t_[i] = to_t(u, spec_.params);
    to_x_[i] = (gw == 1.0) ? 1.0 : (u == 0.0 ? 0.0 : std::pow(u, gw - 1.0));
    to_w_[i] = (gw == 1.0) ? 1.0 : std::pow(u, 1.0 - gw);
  }
}

std::vector<double> PicardMap::operator()(std::span<const double> w_prev) const {
  const std::size_t n = mesh_->size();
  if (w_prev.size() != n) throw std::invalid_argument("picard_step: iterate does not match mesh");
  const double gw = spec_.params.gamma_w();
  std::vector<double> g(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double u = (*mesh_)[i];
    double v = 0.0;
    try {
      v = spec_.f.eval({t_[i], to_x_[i] * w_prev[i], u});
    } catch (const expr::EvalError& e) {
      throw StepError("f failed at node " + std::to_string(i) + " (t = " + fmt(t_[i]) + ", u = " + fmt(u) +
                      "): " + e.what());
    }
    if (!std::isfinite(v)) {
      throw StepError("f is not finite at node " + std::to_string(i) + " (t = " + fmt(t_[i]) + ", u = " + fmt(u) +
                      ")");
    }
    g[i] = v;
  }
  // At u = 0, x = u^(gamma_w-1) w is infinite unless gamma_w = 1; the
  // integrand is then taken from the line through nodes 1 and 2.
  bool extrapolate = gw < 1.0;
  if (!extrapolate) {
    try {
      g[0] = spec_.f.eval({t_[0], w_prev[0], 0.0});
      extrapolate = !std::isfinite(g[0]);
    } catch (const expr::EvalError&) {
      extrapolate = true;
    }
  }
  if (extrapolate) g[0] = extrapolate_node0(g, *mesh_);

  const std::vector<double> integral = abel_.apply(g);
  std::vector<double> w(n);
  w[0] = spec_.x_a;
  for (std::size_t i = 1; i < n; ++i) w[i] = spec_.x_a + to_w_[i] * integral[i];
  return w;
}

GridFunction picard_step(const GridFunction& w_prev, const ProblemSpec& spec) {
  PicardMap map(spec, w_prev.mesh_ptr());
  return GridFunction(w_prev.mesh_ptr(), map(w_prev.values()));
}

namespace {

SolveResult solve_impl(const ProblemSpec& spec, const SolverConfig& config, const std::vector<double>* initial) {
  if (config.node_count_N < 2) throw std::invalid_argument("solver: N must be >= 2");
  if (!(config.tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");

  SolveResult res;
  res.l = existence_radius(spec);
  res.L = to_u(spec.params.a() + res.l, spec.params);
  res.mesh = std::make_shared<const GradedMesh>(res.L, config.node_count_N, config.grading_r);
  const PicardMap map(spec, res.mesh);
  res.t_nodes.resize(res.mesh->size());
  for (std::size_t i = 0; i < res.mesh->size(); ++i) res.t_nodes[i] = to_t((*res.mesh)[i], spec.params);

  std::vector<double> w;
  if (initial) {
    if (initial->size() != res.mesh->size()) {
      throw std::invalid_argument("picard_solve: initial iterate has wrong length");
    }
    w = *initial;
  } else {
    const GridFunction start = phi0(spec, res.mesh);
    w.assign(start.values().begin(), start.values().end());
  }
  const double b = spec.hyp.ball_radius;
  auto check_ball = [&](const std::vector<double>& it, std::size_t n) {
    const double dev = sup_dev(it, spec.x_a);
    res.ball_excursions.push_back(dev);
    if (dev > b) {
      throw BallViolation("iterate " + std::to_string(n) + " leaves the ball: sup |w - x_a| = " + fmt(dev) +
                          " > ball_radius = " + fmt(b) + "; the declared M, k or A do not hold");
    }
  };
  check_ball(w, 0);
  if (config.keep_iterates) res.iterates.push_back(w);

  for (std::size_t n = 1; n <= config.max_iter; ++n) {
    std::vector<double> next = map(w);
    const double inc = sup_diff(next, w);
    w = std::move(next);
    res.iterations_used = n;
    res.increments.push_back(inc);
    res.final_increment = inc;
    check_ball(w, n);
    if (config.keep_iterates) res.iterates.push_back(w);
    if (inc <= config.tol) {
      res.converged = true;
      break;
    }
  }
  res.residual_sup = sup_diff(map(w), w);
  res.weighted_solution = std::move(w);
  for (std::size_t n = 0; n <= res.iterations_used; ++n) {
    res.apriori_terms.push_back(apriori_products(n, spec.params, spec.hyp, res.L).term_u_n);
  }
  return res;
}

}  // namespace

SolveResult picard_solve(const ProblemSpec& spec, const SolverConfig& config) {
  return solve_impl(spec, config, nullptr);
}

SolveResult picard_solve(const ProblemSpec& spec, const SolverConfig& config, std::span<const double> initial) {
  const std::vector<double> start(initial.begin(), initial.end());
  return solve_impl(spec, config, &start);
}

double residual(const SolveResult& result, const ProblemSpec& spec) {
  const PicardMap map(spec, result.mesh);
  return sup_diff(map(result.weighted_solution), result.weighted_solution);
}

AprioriTerm apriori_products(std::size_t n, const FracParams& p, const HypothesisData& hyp, double len) {
  const double k = hyp.exponent_k;
  const double alpha = p.alpha();
  const double shift = alpha + 1.0 - p.gamma_w();
  if (!(k + p.mu() > 0.0)) throw std::domain_error("apriori_products: k + mu must be positive");
  if (!(len > 0.0)) throw std::domain_error("apriori_products: length must be positive");
  const double lg_alpha = log_gamma(alpha);
  auto log_factor = [&](std::size_t i) {
    const double id = static_cast<double>(i);
    const double arg = (id + 1.0) * k + id * shift + 1.0;
    if (!(arg > 0.0)) {
      throw std::domain_error("apriori_products: beta argument " + fmt(arg) + " is nonpositive at i = " +
                              std::to_string(i));
    }
    return log_beta(alpha, arg) - lg_alpha;
  };
  AprioriTerm out;
  for (std::size_t i = 0; i <= n; ++i) out.log_P_n += log_factor(i);
  const double log_P_next = out.log_P_n + log_factor(n + 1);
  out.P_n = std::exp(out.log_P_n);
  const double nd = static_cast<double>(n);
  if (hyp.bound_M == 0.0) {
    out.log_term_u_n = -std::numeric_limits<double>::infinity();
    out.term_u_n = 0.0;
  } else {
    out.log_term_u_n = (nd + 1.0) * std::log(hyp.lipschitz_A) + std::log(hyp.bound_M) +
                       (nd + 2.0) * (alpha + k + 1.0 - p.gamma_w()) * std::log(len) + log_P_next;
    out.term_u_n = std::exp(out.log_term_u_n);
  }
  return out;
}

std::vector<double> ratio_sequence(std::size_t n_max, const FracParams& p, const HypothesisData& hyp, double len) {
  if (n_max < 2) throw std::invalid_argument("ratio_sequence: n_max must be >= 2");
  if (hyp.bound_M == 0.0) throw DegenerateError("ratio_sequence: M = 0, every bound term is zero");
  std::vector<double> out;
  out.reserve(n_max);
  double prev = apriori_products(1, p, hyp, len).log_term_u_n;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double next = apriori_products(n + 1, p, hyp, len).log_term_u_n;
    if (!std::isfinite(prev) || !std::isfinite(next)) {
      throw DegenerateError("ratio_sequence: bound term underflowed at n = " + std::to_string(n));
    }
    out.push_back(std::exp(next - prev));
    prev = next;
  }
  return out;
}

HypothesisReport verify_hypotheses(const ProblemSpec& spec, std::size_t sample_count) {
  if (sample_count < 10) throw std::invalid_argument("verify_hypotheses: need at least 10 samples");
  const auto& p = spec.params;
  const auto& hyp = spec.hyp;
  const double gw = p.gamma_w();
  HypothesisReport rep;
  for (std::size_t i = 1; i <= sample_count; ++i) {
    const double q = radical_inverse(i, 2);
    const double t = p.a() + hyp.horizon_h * (q > 0.0 ? q : 1.0);
    const double w1 = spec.x_a - hyp.ball_radius + 2.0 * hyp.ball_radius * radical_inverse(i, 3);
    const double w2 = spec.x_a - hyp.ball_radius + 2.0 * hyp.ball_radius * radical_inverse(i, 5);
    try {
      const double u = to_u(t, p);
      const double scale = gw == 1.0 ? 1.0 : std::pow(u, gw - 1.0);
      const double f1 = spec.f.eval({t, scale * w1, u});
      const double f2 = spec.f.eval({t, scale * w2, u});
      const double uk = std::pow(u, hyp.exponent_k);
      rep.observed_M = std::max({rep.observed_M, std::abs(f1) / uk, std::abs(f2) / uk});
      if (w1 != w2) rep.observed_A = std::max(rep.observed_A, std::abs(f1 - f2) / (uk * std::abs(w1 - w2)));
      ++rep.samples;
    } catch (const std::exception& e) {
      rep.errors.push_back("sample " + std::to_string(i) + " (t = " + fmt(t) + "): " + e.what());
    }
  }
  rep.m_violation = rep.observed_M > 1.01 * hyp.bound_M;
  rep.a_violation = rep.observed_A > 1.01 * hyp.lipschitz_A;
  return rep;
}

}  // namespace katu
