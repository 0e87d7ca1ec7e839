#pragma once

#include <vector>

#include "seqtrack/model.hpp"

namespace seqtrack {

/// Scale function and speed measure of the posterior-mean diffusion
/// dM = -2 lambda M dt + mu (1 - M^2) dW on (-1, 1):
///
///   p'(x) = exp{(2 lambda / mu^2) / (1 - x^2)},   p(0) = 0,
///   m(x)  = 2 / (p'(x) mu^2 (1 - x^2)^2).
///
/// p' overflows long before |x| reaches 1, so integrals are evaluated in
/// log space relative to the upper end point.
class ScaleSpeed {
 public:
  /// |x| beyond `x_cap` maps p(x) to +-infinity.
  explicit ScaleSpeed(const ModelParams& p, double x_cap = 1.0 - 1e-8);

  const ModelParams& params() const noexcept { return params_; }
  double x_cap() const noexcept { return x_cap_; }

  double log_scale_density(double x) const;
  double scale_density(double x) const;
  double speed_density(double x) const;

  /// p(x). Returns +-infinity when |x| > x_cap or the value overflows.
  double scale(double x) const;
  /// log p(x) for x in (0, 1); finite up to x_cap.
  double log_scale(double x) const;

  /// p(x) / (p'(x)(1 - x^2)^2) for x in (0, 1). Tends to mu^2/(4 lambda).
  double hopital_ratio(double x) const;
  /// p(y) m(y) on (0, 1), the integrand of the entrance test.
  double entrance_integrand(double y) const;

  /// int_a^b p(y) m(y) dy for 0 <= a < b < 1.
  double entrance_integral(double a, double b) const;

 private:
  // int_x^1 ... written in u = 1 - x so points near 1 keep full precision.
  double relative_scale_integral(double u) const;
  double entrance_integral_u(double u_lo, double u_hi) const;

  ModelParams params_;
  double k_;  // 2 lambda / mu^2
  double x_cap_;
};

inline double scale_function(const ModelParams& p, double x) { return ScaleSpeed(p).scale(x); }
inline double hopital_ratio(const ModelParams& p, double x) {
  return ScaleSpeed(p).hopital_ratio(x);
}

struct EntranceRow {
  double cap;
  /// int_0^cap p(y) m(y) dy
  double integral;
  /// Difference from the previous row (NaN on the first row).
  double increment;
};

struct EntranceReport {
  std::vector<EntranceRow> rows;
  bool converged = false;
  double tolerance = 0;
};

/// 1 - 10^-j for j = 1..8.
std::vector<double> default_entrance_caps();

/// Evaluates int_0^cap p m for an increasing sequence of caps and flags
/// convergence once two successive values differ by less than `tolerance`.
EntranceReport entrance_boundary_check(const ModelParams& p,
                                       const std::vector<double>& caps = default_entrance_caps(),
                                       double tolerance = 1e-6);

}  // namespace seqtrack
