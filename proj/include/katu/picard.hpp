#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "katu/expr.hpp"
#include "katu/frac_ops.hpp"
#include "katu/quadrature.hpp"

namespace katu {

/// Constants of the growth and Lipschitz hypotheses on f, stated in weighted
/// coordinates w = u^(1-gamma_w) x:
///   |f(t, u^(gamma_w-1) w)| <= M u^k                      for |w - x_a| <= b,
///   |f(t, u^(gamma_w-1) w1) - f(t, u^(gamma_w-1) w2)| <= A u^k |w1 - w2|,
/// for a < t <= a + h.
struct HypothesisData {
  double bound_M = 0.0;
  double exponent_k = 0.0;
  double lipschitz_A = 1.0;
  double ball_radius = 1.0;
  double horizon_h = 1.0;
};

/// Throws std::invalid_argument unless k + mu > 0 and the constants are in range.
void validate(const HypothesisData& hyp, const FracParams& p);

struct ProblemSpec {
  FracParams params;
  double x_a = 0.0;
  expr::Expr f;
  HypothesisData hyp;
};

/// Parses f, validates every constant and test-evaluates f once inside D_h x E.
ProblemSpec make_problem(const FracParams& params, double x_a, std::string_view f_text,
                         const HypothesisData& hyp);

struct SolverConfig {
  std::size_t node_count_N = 2048;
  double grading_r = 3.0;
  double tol = 1e-8;
  std::size_t max_iter = 200;
  bool keep_iterates = false;
};

/// Raised when an iterate leaves |w - x_a| <= ball_radius, which cannot
/// happen for hypothesis constants that actually hold.
class BallViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation failure of f on the mesh; the message carries the node.
class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  std::shared_ptr<const GradedMesh> mesh;
  double l = 0.0;  // existence radius in t
  double L = 0.0;  // transformed length, to_u(a + l)
  std::vector<double> t_nodes;
  std::vector<double> weighted_solution;
  std::size_t iterations_used = 0;
  double final_increment = 0.0;
  double residual_sup = 0.0;
  bool converged = false;
  std::vector<double> increments;       // sup |w_n - w_{n-1}|, n = 1..iterations_used
  std::vector<double> ball_excursions;  // sup |w_n - x_a|, n = 0..iterations_used
  std::vector<double> apriori_terms;    // u_n for n = 0..iterations_used, at length L
  std::vector<std::vector<double>> iterates;  // only with keep_iterates

  /// x at node i, u^(gamma_w - 1) w_i. Undefined (NaN) at u = 0 when gamma_w < 1.
  double unweighted(std::size_t i, double gamma_w) const;
};

double existence_radius(const ProblemSpec& spec);

/// w_0 = x_a at every node.
GridFunction phi0(const ProblemSpec& spec, std::shared_ptr<const GradedMesh> mesh);

/// One application of the Picard map in weighted form.
class PicardMap {
 public:
  PicardMap(const ProblemSpec& spec, std::shared_ptr<const GradedMesh> mesh);

  std::vector<double> operator()(std::span<const double> w_prev) const;
  const GradedMesh& mesh() const { return *mesh_; }

 private:
  ProblemSpec spec_;
  std::shared_ptr<const GradedMesh> mesh_;
  AbelOperator abel_;
  std::vector<double> t_;
  std::vector<double> to_x_;  // u^(gamma_w - 1); unused at node 0
  std::vector<double> to_w_;  // u^(1 - gamma_w)
};

GridFunction picard_step(const GridFunction& w_prev, const ProblemSpec& spec);

SolveResult picard_solve(const ProblemSpec& spec, const SolverConfig& config);
/// Same, starting from an arbitrary weighted iterate instead of phi0.
SolveResult picard_solve(const ProblemSpec& spec, const SolverConfig& config,
                         std::span<const double> initial);

/// sup-node |T(w) - w| for the final iterate, T the Picard map.
double residual(const SolveResult& result, const ProblemSpec& spec);

struct AprioriTerm {
  double P_n = 0.0;
  double term_u_n = 0.0;
  double log_P_n = 0.0;
  double log_term_u_n = 0.0;  // -inf when M = 0
};

/// P_n = prod_{i=0}^n B(alpha, (i+1)k + i(alpha+1-gamma_w) + 1)/Γ(alpha) and
/// u_n = A^(n+1) M len^((n+2)(alpha+k+1-gamma_w)) P_{n+1}, both in log space.
AprioriTerm apriori_products(std::size_t n, const FracParams& p, const HypothesisData& hyp, double len);

/// r_n = u_{n+1}/u_n for n = 1..n_max.
std::vector<double> ratio_sequence(std::size_t n_max, const FracParams& p, const HypothesisData& hyp,
                                   double len);

struct HypothesisReport {
  std::size_t samples = 0;
  double observed_M = 0.0;
  double observed_A = 0.0;
  bool m_violation = false;
  bool a_violation = false;
  std::vector<std::string> errors;

  bool ok() const { return !m_violation && !a_violation && errors.empty(); }
};

/// Falsification check of the declared M and A on Halton samples of D_h x E x E.
/// Flags a violation when an observed ratio exceeds the declared constant by 1%.
HypothesisReport verify_hypotheses(const ProblemSpec& spec, std::size_t sample_count);

}  // namespace katu
