#include "katu/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "katu/special_fn.hpp"

namespace katu {

namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << where << ": alpha must lie in (0, 1], got " << alpha;
    throw std::invalid_argument(os.str());
  }
}

struct HatWeights {
  double left = 0.0;   // coefficient of g(u_j)
  double right = 0.0;  // coefficient of g(u_{j+1})
};

// ∫_{u_j}^{u_{j+1}} (T - v)^(alpha-1) phi(v) dv for the two hat functions of
// the panel. With x = T - v the panel becomes [d_near, d_far].
HatWeights hat_weights(double d_far, double d_near, double h, double alpha) {
  HatWeights w;
  if (d_near == 0.0 || h >= 0.125 * d_near) {
    // Closed form. Cancellation here costs at most a few ulps since d/h is bounded.
    const double a0 = (std::pow(d_far, alpha) - std::pow(d_near, alpha)) / alpha;
    const double a1 = (std::pow(d_far, alpha + 1.0) - std::pow(d_near, alpha + 1.0)) / (alpha + 1.0);
    w.left = (a1 - d_near * a0) / h;
    w.right = (d_far * a0 - a1) / h;
    return w;
  }
  // Far panel: x = d_near (1 + eps s), expand (1 + eps s)^(alpha-1) binomially.
  const double eps = h / d_near;
  double coef = 1.0;
  double pw = 1.0;
  double sum_left = 0.0;
  double sum_right = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double kd = static_cast<double>(k);
    const double c = coef * pw;
    sum_left += c / (kd + 2.0);
    sum_right += c / ((kd + 1.0) * (kd + 2.0));
    if (std::abs(c) < 1e-18 * sum_right) break;
    coef *= (alpha - 1.0 - kd) / (kd + 1.0);
    pw *= eps;
    if (coef == 0.0) break;
  }
  const double scale = h * std::pow(d_near, alpha - 1.0);
  w.left = scale * sum_left;
  w.right = scale * sum_right;
  return w;
}

}  // namespace

GradedMesh::GradedMesh(double length, std::size_t panels, double grading)
    : length_(length), grading_(grading) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("build_mesh: length must be positive and finite");
  }
  if (panels < 2) throw std::invalid_argument("build_mesh: need at least 2 panels");
  if (!(grading >= 1.0) || !std::isfinite(grading)) {
    throw std::invalid_argument("build_mesh: grading must be >= 1");
  }
  nodes_.resize(panels + 1);
  const double n = static_cast<double>(panels);
  for (std::size_t j = 0; j <= panels; ++j) {
    nodes_[j] = length * std::pow(static_cast<double>(j) / n, grading);
  }
  nodes_.front() = 0.0;
  nodes_.back() = length;
  for (std::size_t j = 1; j <= panels; ++j) {
    if (!(nodes_[j] > nodes_[j - 1])) {
      throw std::invalid_argument("build_mesh: nodes collapse; reduce N or grading");
    }
  }
}

GradedMesh build_mesh(double length, std::size_t panels, double grading) {
  return GradedMesh(length, panels, grading);
}

PanelMoments panel_moments(double T, std::size_t j, const GradedMesh& mesh, double alpha) {
  check_alpha(alpha, "panel_moments");
  if (j >= mesh.panels()) throw std::out_of_range("panel_moments: panel index out of range");
  const double lo = mesh[j];
  const double hi = mesh[j + 1];
  if (hi > T) {
    std::ostringstream os;
    os.precision(17);
    os << "panel_moments: panel [" << lo << ", " << hi << "] lies right of T = " << T;
    throw std::domain_error(os.str());
  }
  const HatWeights w = hat_weights(T - lo, T - hi, hi - lo, alpha);
  return {w.left + w.right, lo * w.left + hi * w.right};
}

AbelOperator::AbelOperator(const GradedMesh& mesh, double alpha)
    : alpha_(alpha), size_(mesh.size()) {
  check_alpha(alpha, "abel_convolve");
  weights_.assign(size_ * (size_ + 1) / 2, 0.0);
  const double inv_gamma = 1.0 / gamma(alpha);
  for (std::size_t i = 1; i < size_; ++i) {
    double* row = weights_.data() + i * (i + 1) / 2;
    const double T = mesh[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double lo = mesh[j];
      const double hi = mesh[j + 1];
      const HatWeights w = hat_weights(T - lo, T - hi, hi - lo, alpha);
      row[j] += w.left * inv_gamma;
      row[j + 1] += w.right * inv_gamma;
    }
  }
}

std::span<const double> AbelOperator::row(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("AbelOperator::row");
  return {weights_.data() + i * (i + 1) / 2, i + 1};
}

std::vector<double> AbelOperator::apply(std::span<const double> g) const {
  if (g.size() != size_) {
    throw std::invalid_argument("abel_convolve: value count does not match mesh");
  }
  std::vector<double> out(size_, 0.0);
  for (std::size_t i = 1; i < size_; ++i) {
    const double* row = weights_.data() + i * (i + 1) / 2;
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * g[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> abel_convolve(std::span<const double> g, double alpha, const GradedMesh& mesh) {
  return AbelOperator(mesh, alpha).apply(g);
}

}  // namespace katu
