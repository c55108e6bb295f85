#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "katu/quadrature.hpp"

namespace katu {

/// Order alpha in (0,1), type beta in [0,1], scale rho > 0 and left endpoint a
/// of the generalized Katugampola derivative. Derived: the weight exponent
/// gamma_w = alpha + beta (1 - alpha) and mu = 1 - beta (1 - alpha).
class FracParams {
 public:
  FracParams(double alpha, double beta_type, double rho, double a);

  double alpha() const { return alpha_; }
  double beta_type() const { return beta_type_; }
  double rho() const { return rho_; }
  double a() const { return a_; }
  double gamma_w() const { return gamma_w_; }
  double mu() const { return mu_; }

  /// Order of the inner integral, (1 - beta)(1 - alpha).
  double inner_order() const { return (1.0 - beta_type_) * (1.0 - alpha_); }
  /// Order of the outer integral, beta (1 - alpha).
  double outer_order() const { return beta_type_ * (1.0 - alpha_); }

 private:
  double alpha_;
  double beta_type_;
  double rho_;
  double a_;
  double gamma_w_;
  double mu_;
};

// Every operator here works in u = (t^rho - a^rho)/rho. Substituting
// v = (s^rho - a^rho)/rho gives s^(rho-1) ds = dv and (t^rho - s^rho)/rho = u - v,
// so the Katugampola integral becomes the Riemann-Liouville integral
// (1/Γ(alpha)) ∫_0^u (u - v)^(alpha-1) g dv, and t^(1-rho) d/dt becomes d/du.

double to_u(double t, const FracParams& p);
double to_t(double u, const FracParams& p);

/// s^(rho-1) ((t^rho - s^rho)/rho)^(alpha-1) for a <= s < t, the integrand
/// weight in the original variable.
double katugampola_kernel(double t, double s, const FracParams& p);

struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;

  bool operator==(const PowerTerm&) const = default;
};

/// Finite sum of c u^sigma with every sigma > -1. Terms are kept sorted by
/// exponent; equal exponents are merged and zero coefficients dropped.
class PowerFn {
 public:
  PowerFn() = default;
  explicit PowerFn(std::vector<PowerTerm> terms);

  static PowerFn monomial(double coef, double exponent) { return PowerFn({{coef, exponent}}); }

  std::span<const PowerTerm> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double operator()(double u) const;

  bool operator==(const PowerFn&) const = default;

 private:
  std::vector<PowerTerm> terms_;
};

/// Closed-form I^order: c u^s -> c Γ(s+1)/Γ(s+order+1) u^(s+order). order = 0 is the identity.
PowerFn integral_power(const PowerFn& q, double order);

/// Closed-form I^{beta(1-alpha)} d/du I^{(1-beta)(1-alpha)} q. A term whose
/// inner image is a constant is annihilated exactly.
PowerFn generalized_derivative_power(const PowerFn& q, const FracParams& p);

/// Node values of a function on a graded mesh.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const GradedMesh> mesh, std::vector<double> values,
               bool node0_extrapolated = false);

  const GradedMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const GradedMesh>& mesh_ptr() const { return mesh_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  /// Set when the value at u = 0 was not evaluated directly.
  bool node0_extrapolated() const { return node0_extrapolated_; }

 private:
  std::shared_ptr<const GradedMesh> mesh_;
  std::vector<double> values_;
  bool node0_extrapolated_;
};

/// Linear extrapolation of node 0 from nodes 1 and 2.
double extrapolate_node0(std::span<const double> values, const GradedMesh& mesh);

/// Samples fn at every node. When fn throws or is non-finite at u = 0 (a
/// singular integrand), node 0 is extrapolated from nodes 1 and 2 instead.
GridFunction sample_on_mesh(std::shared_ptr<const GradedMesh> mesh,
                            const std::function<double(double)>& fn);

/// d/du by three-point finite differences: centered on interior nodes,
/// one-sided at both ends. Requires at least 3 nodes.
std::vector<double> differentiate(std::span<const double> values, const GradedMesh& mesh);

GridFunction katugampola_integral_grid(const GridFunction& g, double alpha);
GridFunction katugampola_derivative_grid(const GridFunction& g, double alpha);
GridFunction generalized_derivative_grid(const GridFunction& g, const FracParams& p);

}  // namespace katu
