#include "seqtrack/policy.hpp"

#include <cmath>
#include <sstream>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Walks M with a pair of trigger levels; shared by both threshold rules.
ControlPath run_pair(double down_at, double up_at, Side a_init, std::span<const double> m) {
  ControlPath c;
  c.a_init = a_init;
  c.values.resize(m.size());
  Side a = a_init;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if ((a == Side::Up && m[k] <= down_at) || (a == Side::Down && m[k] >= up_at)) {
      a = opposite(a);
      c.switch_steps.push_back(k);
    }
    c.values[k] = static_cast<std::int8_t>(sign(a));
  }
  return c;
}

ControlPath run_constant(Side a_init, std::size_t n) {
  ControlPath c;
  c.a_init = a_init;
  c.values.assign(n, static_cast<std::int8_t>(sign(a_init)));
  return c;
}

ControlPath run_lag_sign(double window, Side a_init, const PathBundle& b) {
  const std::size_t n = b.x_obs.size();
  const auto lag = static_cast<std::size_t>(std::max(1.0, std::round(window / b.dt)));
  ControlPath c;
  c.a_init = a_init;
  c.values.resize(n);
  Side a = a_init;
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= lag) {
      const double d = b.x_obs[k] - b.x_obs[k - lag];
      const Side want = d > 0 ? Side::Up : Side::Down;
      if (d != 0 && want != a) {
        a = want;
        c.switch_steps.push_back(k);
      }
    }
    c.values[k] = static_cast<std::int8_t>(sign(a));
  }
  return c;
}

const ControlPath& require_control(const PathBundle& b, const char* fn) {
  if (!b.control) throw MissingPath(std::string(fn) + ": bundle has no control path");
  if (b.control->values.size() != b.t.size()) {
    throw GridMismatch(std::string(fn) + ": control path length differs from the grid");
  }
  return *b.control;
}

// Shared accumulation; `mismatch(k)` is the running-cost integrand at step k
// and `surcharge(k)` the part of the switch charge on top of c1.
template <class Mismatch, class Surcharge>
CostAccumulator accumulate(const ModelParams& p, const PathBundle& b, const ControlPath& c,
                           CostForm form, Mismatch mismatch, Surcharge surcharge) {
  CostAccumulator acc;
  acc.form = form;
  const std::size_t n = b.steps();
  const double q = std::exp(-p.alpha() * b.dt);
  const double cell = (1.0 - q) / p.alpha();
  double disc = 1.0;
  std::size_t next_switch = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (next_switch < c.switch_steps.size() && c.switch_steps[next_switch] == k) {
      acc.switching += disc * (p.c1() + surcharge(k));
      ++acc.switches;
      ++next_switch;
    }
    if (k < n) acc.running += disc * cell * mismatch(k);
    disc *= q;
  }
  acc.tail_bound = std::exp(-p.alpha() * n * b.dt) / p.alpha();
  return acc;
}

}  // namespace

void Policy::validate() const {
  std::visit(overloaded{
                 [](const ThresholdRule& r) {
                   if (!(r.B > 0 && r.B < 1)) throw ValidationError("B", "B: must lie in (0, 1)");
                 },
                 [](const NeverSwitchRule&) {},
                 [](const FixedLagSignRule& r) {
                   if (!(r.window > 0)) throw ValidationError("window", "window: must be > 0");
                 },
                 [](const ThresholdPairRule& r) {
                   if (!(r.down_at > -1 && r.down_at < r.up_at && r.up_at < 1)) {
                     throw ValidationError("thresholds",
                                           "thresholds: need -1 < down_at < up_at < 1");
                   }
                 },
             },
             rule);
}

std::string Policy::name() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ThresholdRule& r) { os << "threshold(B=" << r.B << ")"; },
                 [&](const NeverSwitchRule&) { os << "never"; },
                 [&](const FixedLagSignRule& r) { os << "sign(window=" << r.window << ")"; },
                 [&](const ThresholdPairRule& r) {
                   os << "pair(down=" << r.down_at << ",up=" << r.up_at << ")";
                 },
             },
             rule);
  return os.str();
}

ControlPath run_policy(const Policy& policy, const PathBundle& bundle) {
  policy.validate();
  return std::visit(
      overloaded{
          [&](const ThresholdRule& r) { return run_pair(-r.B, r.B, policy.a_init, bundle.m); },
          [&](const NeverSwitchRule&) { return run_constant(policy.a_init, bundle.t.size()); },
          [&](const FixedLagSignRule& r) { return run_lag_sign(r.window, policy.a_init, bundle); },
          [&](const ThresholdPairRule& r) {
            return run_pair(r.down_at, r.up_at, policy.a_init, bundle.m);
          },
      },
      policy.rule);
}

ControlPath run_threshold_policy(const FreeBoundary& fb, Side a_init, std::span<const double> m) {
  if (fb.regime == Regime::NeverSwitch || !fb.B) return run_constant(a_init, m.size());
  return run_pair(-*fb.B, *fb.B, a_init, m);
}

std::string_view to_string(CostForm f) noexcept {
  return f == CostForm::ThetaForm ? "theta" : "m";
}

CostAccumulator cost_theta_form(const ModelParams& p, const PathBundle& b) {
  const ControlPath& c = require_control(b, "cost_theta_form");
  if (b.theta.values.size() != b.t.size()) {
    throw MissingPath("cost_theta_form: bundle has no theta path on the grid");
  }
  const auto& a = c.values;
  const auto& th = b.theta.values;
  return accumulate(
      p, b, c, CostForm::ThetaForm, [&](std::size_t k) { return a[k] != th[k] ? 1.0 : 0.0; },
      [&](std::size_t k) { return a[k] != th[k] ? p.c2() : 0.0; });
}

CostAccumulator cost_m_form(const ModelParams& p, const PathBundle& b) {
  const ControlPath& c = require_control(b, "cost_m_form");
  if (b.m.size() != b.t.size()) throw MissingPath("cost_m_form: bundle has no filter path");
  const auto& a = c.values;
  const auto& m = b.m;
  return accumulate(
      p, b, c, CostForm::MForm, [&](std::size_t k) { return 0.5 * (1.0 - a[k] * m[k]); },
      [&](std::size_t k) { return 0.5 * p.c2() * (1.0 - a[k] * m[k]); });
}

}  // namespace seqtrack
