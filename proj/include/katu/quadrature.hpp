#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace katu {

/// Nodes u_j = L (j/N)^r, j = 0..N, on [0, L]. r = 1 is the uniform mesh;
/// r > 1 clusters nodes toward u = 0 where integrands are singular.
class GradedMesh {
 public:
  GradedMesh(double length, std::size_t panels, double grading);

  double length() const { return length_; }
  /// Number of panels N. The mesh has N + 1 nodes.
  std::size_t panels() const { return nodes_.size() - 1; }
  std::size_t size() const { return nodes_.size(); }
  double grading() const { return grading_; }
  double operator[](std::size_t j) const { return nodes_[j]; }
  std::span<const double> nodes() const { return nodes_; }

  bool operator==(const GradedMesh&) const = default;

 private:
  double length_;
  double grading_;
  std::vector<double> nodes_;
};

GradedMesh build_mesh(double length, std::size_t panels, double grading);

/// Exact kernel moments of one panel [u_j, u_{j+1}] against (T - v)^(alpha-1):
/// m0 = integral of the kernel, m1 = integral of the kernel times v.
struct PanelMoments {
  double m0 = 0.0;
  double m1 = 0.0;
};

PanelMoments panel_moments(double T, std::size_t j, const GradedMesh& mesh, double alpha);

/// Product-trapezoidal weights for (1/Γ(alpha)) ∫_0^{u_i} (u_i - v)^(alpha-1) g(v) dv.
///
/// g is replaced by its piecewise-linear interpolant and each hat function is
/// integrated exactly against the kernel, so row i holds i + 1 nonnegative
/// weights. Building costs O(N^2) and is independent of g, which lets the
/// Picard driver reuse one operator across iterations.
class AbelOperator {
 public:
  AbelOperator(const GradedMesh& mesh, double alpha);

  double alpha() const { return alpha_; }
  std::size_t size() const { return size_; }

  /// Row i of the weight matrix (already divided by Γ(alpha)).
  std::span<const double> row(std::size_t i) const;

  /// Applies the operator to node values g. Each output node is summed in
  /// increasing j, so results are bitwise reproducible.
  std::vector<double> apply(std::span<const double> g) const;

 private:
  double alpha_;
  std::size_t size_;
  std::vector<double> weights_;  // packed lower triangle, row i at i(i+1)/2
};

/// One-shot convolution; builds an AbelOperator and applies it.
std::vector<double> abel_convolve(std::span<const double> g, double alpha, const GradedMesh& mesh);

}  // namespace katu
