#pragma once

// Closed forms used as oracles.

#include <cmath>

namespace oracle {

inline double v_tilde(double lambda, double alpha, double x) {
  return 1.0 / (2.0 * alpha) - x / (2.0 * (2.0 * lambda + alpha));
}

// L V(x, 1) + (1 - x)/2 on (-1, -B), where V(x, 1) = V(-x) + c1 + c2/2 (1 + x)
// and V = V_tilde - K phi solves L V = -(1 - x)/2. Reflection maps the
// homogeneous part onto itself, leaving the affine remainder.
inline double switch_region_excess(double lambda, double alpha, double c1, double c2, double x) {
  const double lv = -(1.0 + x) / 2.0 - alpha * c1 - lambda * c2 * x - alpha * c2 / 2.0 * (1.0 + x);
  return lv + (1.0 - x) / 2.0;
}

// Discounted cost of a constant mismatch over [0, T].
inline double discounted_mass(double alpha, double T) { return (1.0 - std::exp(-alpha * T)) / alpha; }

}  // namespace oracle
