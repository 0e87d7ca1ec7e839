#pragma once

// p(x) = int_0^x exp(k / (1 - y^2)) dy by tanh-sinh quadrature, directly in
// the original variable.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace oracle {

inline double scale_tanh_sinh(double lambda, double mu, double x) {
  const double k = 2.0 * lambda / (mu * mu);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([k](double y) { return std::exp(k / ((1.0 - y) * (1.0 + y))); }, 0.0, x,
                      1e-15);
}

}  // namespace oracle
