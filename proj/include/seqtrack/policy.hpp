#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "seqtrack/boundary.hpp"
#include "seqtrack/model.hpp"
#include "seqtrack/simulate.hpp"

namespace seqtrack {

/// Switch down when M <= -B, back up when M >= B.
struct ThresholdRule {
  double B;
};
/// Keep A_{0-} forever.
struct NeverSwitchRule {};
/// Follow the sign of the observation increment over a trailing window.
struct FixedLagSignRule {
  double window;
};
/// Switch down when M <= down_at, up when M >= up_at.
struct ThresholdPairRule {
  double down_at;
  double up_at;
};

using PolicyRule = std::variant<ThresholdRule, NeverSwitchRule, FixedLagSignRule, ThresholdPairRule>;

struct Policy {
  PolicyRule rule = NeverSwitchRule{};
  Side a_init = Side::Up;

  static Policy threshold(double B, Side a_init = Side::Up) { return {ThresholdRule{B}, a_init}; }
  static Policy never(Side a_init = Side::Up) { return {NeverSwitchRule{}, a_init}; }
  static Policy fixed_lag_sign(double window, Side a_init = Side::Up) {
    return {FixedLagSignRule{window}, a_init};
  }
  static Policy threshold_pair(double down_at, double up_at, Side a_init = Side::Up) {
    return {ThresholdPairRule{down_at, up_at}, a_init};
  }

  /// Throws ValidationError.
  void validate() const;
  std::string name() const;
};

/// Control produced by `policy` on a simulated path. Decisions are taken at
/// grid points; a switch at step k applies from t_k on.
ControlPath run_policy(const Policy& policy, const PathBundle& bundle);

/// Alternating first-passage control of M across -B and +B. A never-switch
/// boundary produces the constant control.
ControlPath run_threshold_policy(const FreeBoundary& fb, Side a_init, std::span<const double> m);

enum class CostForm : std::uint8_t { ThetaForm, MForm };
std::string_view to_string(CostForm f) noexcept;

/// Discounted cost of one path, truncated at the horizon.
struct CostAccumulator {
  CostForm form = CostForm::ThetaForm;
  double running = 0;
  double switching = 0;
  std::size_t switches = 0;
  /// Upper bound on the running cost beyond the horizon: exp(-alpha T)/alpha.
  double tail_bound = 0;

  double total() const noexcept { return running + switching; }
};

/// int e^{-alpha t} 1{A_t != theta_t} dt + sum e^{-alpha tau}(c1 + c2 1{A_tau != theta_tau}).
/// The integrand is frozen at left grid points; the discount weight of each
/// cell is integrated exactly. Throws MissingPath without a control path.
CostAccumulator cost_theta_form(const ModelParams& p, const PathBundle& bundle);

/// 1/2 int e^{-alpha t}(1 - A_t M_t) dt + sum e^{-alpha tau}(c1 + c2/2 (1 - A_tau M_tau)).
CostAccumulator cost_m_form(const ModelParams& p, const PathBundle& bundle);

}  // namespace seqtrack
