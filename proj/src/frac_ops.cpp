#include "katu/frac_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "katu/special_fn.hpp"

namespace katu {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Exponent arithmetic like (gamma_w - 1) + (1 - beta)(1 - alpha) is zero in
// exact arithmetic but only within a few ulps in double. Sums this close to an
// integer exponent of 0 are snapped so the annihilation stays exact.
double snap_zero(double sum, double lhs, double rhs) {
  const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
  return std::abs(sum) <= 16.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0 : sum;
}

void check_exponent(double e, const char* where) {
  if (!(e > -1.0) || !std::isfinite(e)) {
    throw std::domain_error(std::string(where) + ": exponent " + fmt_double(e) +
                            " lies outside (-1, inf)");
  }
}

}  // namespace

FracParams::FracParams(double alpha, double beta_type, double rho, double a)
    : alpha_(alpha), beta_type_(beta_type), rho_(rho), a_(a) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + fmt_double(alpha));
  }
  if (!(beta_type >= 0.0 && beta_type <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1], got " + fmt_double(beta_type));
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rho must be positive, got " + fmt_double(rho));
  }
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("a must be nonnegative, got " + fmt_double(a));
  }
  if (rho < 1.0 && a == 0.0) {
    throw std::invalid_argument("a must be positive when rho < 1 (s^(rho-1) is unbounded at 0)");
  }
  gamma_w_ = alpha + beta_type * (1.0 - alpha);
  mu_ = 1.0 - beta_type * (1.0 - alpha);
  if (std::abs((alpha + 1.0 - gamma_w_) - mu_) > 1e-15) {
    throw std::logic_error("FracParams: alpha + 1 - gamma_w != mu");
  }
}

double to_u(double t, const FracParams& p) {
  if (!(t >= p.a())) {
    throw std::domain_error("to_u: t = " + fmt_double(t) + " lies left of a = " + fmt_double(p.a()));
  }
  if (t == p.a()) return 0.0;
  if (p.rho() == 1.0) return t - p.a();
  return (std::pow(t, p.rho()) - std::pow(p.a(), p.rho())) / p.rho();
}

double to_t(double u, const FracParams& p) {
  if (!(u >= 0.0)) throw std::domain_error("to_t: u must be nonnegative, got " + fmt_double(u));
  if (u == 0.0) return p.a();
  if (p.rho() == 1.0) return p.a() + u;
  return std::pow(std::pow(p.a(), p.rho()) + p.rho() * u, 1.0 / p.rho());
}

double katugampola_kernel(double t, double s, const FracParams& p) {
  if (!(s >= p.a() && s < t)) throw std::domain_error("katugampola_kernel: need a <= s < t");
  const double rho = p.rho();
  return std::pow(s, rho - 1.0) * std::pow((std::pow(t, rho) - std::pow(s, rho)) / rho, p.alpha() - 1.0);
}

PowerFn::PowerFn(std::vector<PowerTerm> terms) {
  for (const auto& t : terms) {
    check_exponent(t.exponent, "PowerFn");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("PowerFn: non-finite coefficient");
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& l, const PowerTerm& r) { return l.exponent < r.exponent; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().exponent == t.exponent) {
      terms_.back().coef += t.coef;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const PowerTerm& t) { return t.coef == 0.0; });
}

double PowerFn::operator()(double u) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coef * (t.exponent == 0.0 ? 1.0 : std::pow(u, t.exponent));
  return acc;
}

PowerFn integral_power(const PowerFn& q, double order) {
  if (!(order >= 0.0) || !std::isfinite(order)) {
    throw std::domain_error("integral_power: order must be nonnegative");
  }
  if (order == 0.0) return q;
  std::vector<PowerTerm> out;
  out.reserve(q.terms().size());
  for (const auto& t : q.terms()) {
    check_exponent(t.exponent, "integral_power");
    const double ratio = std::exp(log_gamma(t.exponent + 1.0) - log_gamma(t.exponent + order + 1.0));
    out.push_back({t.coef * ratio, t.exponent + order});
  }
  return PowerFn(std::move(out));
}

PowerFn generalized_derivative_power(const PowerFn& q, const FracParams& p) {
  const double inner = p.inner_order();
  std::vector<PowerTerm> differentiated;
  for (const auto& t : q.terms()) {
    check_exponent(t.exponent, "generalized_derivative_power");
    double coef = t.coef;
    double e = t.exponent;
    if (inner > 0.0) {
      coef *= std::exp(log_gamma(e + 1.0) - log_gamma(e + inner + 1.0));
      e = snap_zero(e + inner, e, inner);
    }
    if (e == 0.0) continue;  // d/du of a constant
    check_exponent(e - 1.0, "generalized_derivative_power");
    differentiated.push_back({coef * e, e - 1.0});
  }
  return integral_power(PowerFn(std::move(differentiated)), p.outer_order());
}

GridFunction::GridFunction(std::shared_ptr<const GradedMesh> mesh, std::vector<double> values,
                           bool node0_extrapolated)
    : mesh_(std::move(mesh)), values_(std::move(values)), node0_extrapolated_(node0_extrapolated) {
  if (!mesh_) throw std::invalid_argument("GridFunction: null mesh");
  if (values_.size() != mesh_->size()) {
    throw std::invalid_argument("GridFunction: " + std::to_string(values_.size()) +
                                " values for a mesh of " + std::to_string(mesh_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::domain_error("GridFunction: non-finite value at node " + std::to_string(i));
    }
  }
}

double extrapolate_node0(std::span<const double> values, const GradedMesh& mesh) {
  const double u1 = mesh[1];
  const double u2 = mesh[2];
  return values[1] - (values[2] - values[1]) * u1 / (u2 - u1);
}

GridFunction sample_on_mesh(std::shared_ptr<const GradedMesh> mesh,
                            const std::function<double(double)>& fn) {
  std::vector<double> v(mesh->size());
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = fn((*mesh)[i]);
  bool extrapolated = false;
  try {
    v[0] = fn(0.0);
    if (!std::isfinite(v[0])) extrapolated = true;
  } catch (const std::exception&) {
    extrapolated = true;
  }
  if (extrapolated) v[0] = extrapolate_node0(v, *mesh);
  return GridFunction(std::move(mesh), std::move(v), extrapolated);
}

std::vector<double> differentiate(std::span<const double> f, const GradedMesh& mesh) {
  const std::size_t n = mesh.size();
  if (n < 3) throw std::invalid_argument("differentiate: mesh too coarse, need at least 3 nodes");
  if (f.size() != n) throw std::invalid_argument("differentiate: value count does not match mesh");
  std::vector<double> d(n);
  {
    const double h1 = mesh[1] - mesh[0];
    const double h2 = mesh[2] - mesh[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
           h1 / (h2 * (h1 + h2)) * f[2];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = mesh[i] - mesh[i - 1];
    const double h2 = mesh[i + 1] - mesh[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
           h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const std::size_t k = n - 1;
    const double h1 = mesh[k - 1] - mesh[k - 2];
    const double h2 = mesh[k] - mesh[k - 1];
    d[k] = h2 / (h1 * (h1 + h2)) * f[k - 2] - (h1 + h2) / (h1 * h2) * f[k - 1] +
           (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[k];
  }
  return d;
}

GridFunction katugampola_integral_grid(const GridFunction& g, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("katugampola_integral_grid: alpha must lie in (0, 1]");
  }
  return GridFunction(g.mesh_ptr(), abel_convolve(g.values(), alpha, g.mesh()));
}

GridFunction katugampola_derivative_grid(const GridFunction& g, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("katugampola_derivative_grid: alpha must lie in (0, 1)");
  }
  const auto inner = abel_convolve(g.values(), 1.0 - alpha, g.mesh());
  return GridFunction(g.mesh_ptr(), differentiate(inner, g.mesh()), true);
}

GridFunction generalized_derivative_grid(const GridFunction& g, const FracParams& p) {
  const double inner_order = p.inner_order();
  const double outer_order = p.outer_order();
  std::vector<double> work(g.values().begin(), g.values().end());
  if (inner_order > 0.0) work = abel_convolve(work, inner_order, g.mesh());
  work = differentiate(work, g.mesh());
  if (outer_order > 0.0) work = abel_convolve(work, outer_order, g.mesh());
  return GridFunction(g.mesh_ptr(), std::move(work), true);
}

}  // namespace katu
