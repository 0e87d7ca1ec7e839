#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqtrack/model.hpp"

namespace seqtrack {

struct PhiOptions {
  /// Integration starts at 1 - epsilon and stops at -1 + epsilon.
  double epsilon = 1e-4;
  /// Mixed absolute/relative local error tolerance of the integrator.
  double tol = 1e-10;
  /// phi(1 - epsilon). The starting slope is -alpha/(2 lambda) times this.
  double normalization = 1.0;
  /// The table is truncated once phi exceeds this value.
  double overflow_cap = 1e12;
  /// Step sizes below this (relative to max(1, |x|)) abort the integration.
  double min_step = 1e-15;
  std::size_t max_steps = 5'000'000;
  /// Extra abscissae the integrator must land on exactly.
  std::vector<double> stops;
};

struct PhiPoint {
  double value;
  double slope;
};

/// Tabulated decreasing, positive, convex solution phi of L f = 0.
///
/// Nodes are stored in increasing x together with phi, phi' and phi'' (the
/// latter read off the ODE), and queried by quintic Hermite interpolation.
/// Immutable once built.
class PhiSolution {
 public:
  const ModelParams& params() const noexcept { return params_; }
  double epsilon() const noexcept { return epsilon_; }
  double tol() const noexcept { return tol_; }
  double normalization() const noexcept { return normalization_; }

  /// True if the overflow cap cut the table short of -1 + epsilon.
  bool truncated() const noexcept { return truncated_; }
  double x_min() const noexcept { return x_.front(); }
  double x_max() const noexcept { return x_.back(); }
  bool covers(double x) const noexcept { return x >= x_min() && x <= x_max(); }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> phi() const noexcept { return phi_; }
  std::span<const double> dphi() const noexcept { return dphi_; }
  std::size_t size() const noexcept { return x_.size(); }
  std::size_t accepted_steps() const noexcept { return x_.size() - 1; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

  /// phi and phi' at x. Throws DomainError outside [x_min, x_max].
  PhiPoint at(double x) const;
  /// phi'' at x, reconstructed from the ODE using the interpolated pair.
  double second_derivative(double x) const;

 private:
  friend PhiSolution solve_phi(const ModelParams&, const PhiOptions&);
  explicit PhiSolution(const ModelParams& p) : params_(p) {}

  ModelParams params_;
  double epsilon_ = 0, tol_ = 0, normalization_ = 1;
  bool truncated_ = false;
  std::size_t rejected_ = 0;
  std::vector<double> x_, phi_, dphi_, ddphi_;
};

/// Integrates L f = 0 leftward from x = 1 - epsilon with Cauchy data
/// f = normalization, f' = -alpha/(2 lambda) * normalization, using an
/// embedded Dormand-Prince 5(4) pair.
///
/// Throws IntegrationFailure when the step size collapses or the state stops
/// being finite, and InvariantViolation when the finished table is not
/// positive, strictly decreasing and strictly convex.
PhiSolution solve_phi(const ModelParams& p, const PhiOptions& opts = {});

inline PhiPoint phi_at(const PhiSolution& sol, double x) { return sol.at(x); }

}  // namespace seqtrack
