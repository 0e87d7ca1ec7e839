#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqtrack/model.hpp"
#include "seqtrack/ode.hpp"

namespace seqtrack {

/// The switching threshold B and the multiplier K of phi in
/// V = V_tilde - K phi. Both are absent in the never-switch regime.
///
/// K only has meaning together with the phi version it was computed for;
/// `phi_normalization` records phi(1 - epsilon).
struct FreeBoundary {
  Regime regime = Regime::NeverSwitch;
  std::optional<double> K;
  std::optional<double> B;
  double phi_normalization = 1.0;
};

struct RootOptions {
  /// Width of the final bracket around B.
  double tol = 1e-12;
  /// The search starts at gamma + delta.
  double delta = 1e-6;
};

/// Continuous-fit candidate for K at threshold x:
/// ((beta + c2/2) x - c1 - c2/2) / (phi(-x) - phi(x)).
double h1(const ModelParams& p, const PhiSolution& phi, double x);

/// Smooth-fit candidate for K at threshold x:
/// (beta + c2/2) / (-phi'(-x) - phi'(x)).
/// Throws DegenerateDenominator if the denominator is not positive.
double h2(const ModelParams& p, const PhiSolution& phi, double x);

/// Largest x for which both +x and -x lie inside the phi table.
double symmetric_reach(const PhiSolution& phi);

/// Number of sign changes of h1 - h2 on a uniform scan of
/// (gamma + delta, symmetric_reach) with `samples` points.
int count_root_sign_changes(const ModelParams& p, const PhiSolution& phi, int samples,
                            double delta = 1e-6);

/// Solves K = h1(B) = h2(B) for B in (gamma, 1).
///
/// In the never-switch regime the result carries no K/B. Throws NoRootBracket
/// when h1 - h2 keeps one sign over the search interval.
FreeBoundary solve_free_boundary(const ModelParams& p, const PhiSolution& phi,
                                 const RootOptions& opts = {});

/// The value function V*(x, a) pasted from V = V_tilde - K phi.
class ValueFunction {
 public:
  /// Throws DomainError if `fb` is in the switching regime but its threshold
  /// is not inside the phi table.
  ValueFunction(ModelParams p, PhiSolution phi, FreeBoundary fb);

  const ModelParams& params() const noexcept { return params_; }
  const PhiSolution& phi() const noexcept { return phi_; }
  const FreeBoundary& boundary() const noexcept { return fb_; }

  /// Smallest and largest x accepted by value().
  double lower() const noexcept;
  double upper() const noexcept;

  double value(double x, Side a) const;
  double derivative(double x, Side a) const;
  /// Second derivative off the kink points; phi'' is taken from the ODE.
  double second_derivative(double x, Side a) const;
  /// min(V*(x, +1), V*(x, -1)).
  double optimal(double x) const;

  /// L V(x, +1) + (1 - x)/2, for x in (-1, 1) away from -B.
  double generator_excess(double x) const;

 private:
  double core(double x) const;        // V_tilde - K phi
  double core_prime(double x) const;  // its derivative
  double core_second(double x) const;
  void check(double x) const;

  ModelParams params_;
  PhiSolution phi_;
  FreeBoundary fb_;
};

inline double value_at(const ValueFunction& vf, double x, Side a) { return vf.value(x, a); }

struct FitTolerances {
  double continuous_fit = 1e-6;
  double smooth_fit = 1e-5;
  double ode_residual = 1e-6;
  double sign_margin = 1e-9;
  int grid_points = 1000;
};

struct FitCheck {
  std::string name;
  double value;
  double threshold;
  bool passed;
};

struct FitReport {
  std::vector<FitCheck> checks;
  bool all_passed() const;
  const FitCheck& get(const std::string& name) const;
};

/// Checks the pasted value function: continuous fit, smooth fit,
/// L V = -(1 - x)/2 on (-B, 1), L V > -(1 - x)/2 on (-1, -B), and
/// |V(x, 1) - V(x, -1)| <= c1 + c2/2 (1 + x).
///
/// Check names: "continuous_fit", "smooth_fit", "ode_residual",
/// "switch_region_excess", "switch_cost_bound".
FitReport verify_fit(const ValueFunction& vf, const FitTolerances& tol = {});

}  // namespace seqtrack
