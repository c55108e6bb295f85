#pragma once

#include <cstddef>

namespace katu {

/// Euler gamma for x > 0. Throws std::domain_error for x <= 0 and
/// std::overflow_error once the result exceeds the double range (x > ~171.6).
double gamma(double x);

/// log Γ(x) for x > 0.
double log_gamma(double x);

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated as exp of a log-gamma sum so that
/// large arguments do not overflow. Symmetric bit-for-bit.
double beta(double x, double y);

/// log B(x, y).
double log_beta(double x, double y);

/// Gauss's product m^x m! / (x(x+1)...(x+m)), which tends to Γ(x) as m grows.
/// O(m); intended for checking the limit, not as a gamma implementation.
double gauss_gamma_product(double x, std::size_t m);

struct MLParams {
  double ml_alpha = 1.0;
  double ml_beta = 1.0;
  double tol = 1e-15;
  std::size_t max_terms = 500;
};

struct MLResult {
  double value = 0.0;
  std::size_t terms = 0;
};

/// Two-parameter Mittag-Leffler function E_{a,b}(z) = sum_j z^j / Γ(a j + b)
/// by direct summation. Only meant for |z| <= 50; cancellation makes the
/// series useless for large negative z anyway.
///
/// Stops when the next term is below tol * |partial sum|. Throws
/// std::runtime_error if max_terms is reached first.
MLResult mittag_leffler(const MLParams& p, double z);

}  // namespace katu
