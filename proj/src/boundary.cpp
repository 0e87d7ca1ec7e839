#include "seqtrack/boundary.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

void check_pair(const PhiSolution& phi, double x, const char* fn) {
  if (!(x > 0 && x < 1) || !phi.covers(x) || !phi.covers(-x)) {
    throw DomainError(std::string(fn) + ": x = " + std::to_string(x) +
                      " needs phi at both +x and -x");
  }
}

// Same sign as h1 - h2, without the two positive denominators.
double fit_gap(const ModelParams& p, const PhiSolution& phi, double x) {
  const PhiPoint lo = phi.at(-x), hi = phi.at(x);
  return (x - p.gamma()) * (-lo.slope - hi.slope) - (lo.value - hi.value);
}

}  // namespace

double h1(const ModelParams& p, const PhiSolution& phi, double x) {
  check_pair(phi, x, "h1");
  const double k = p.beta() + 0.5 * p.c2();
  return (k * x - p.c1() - 0.5 * p.c2()) / (phi.at(-x).value - phi.at(x).value);
}

double h2(const ModelParams& p, const PhiSolution& phi, double x) {
  check_pair(phi, x, "h2");
  const double den = -phi.at(-x).slope - phi.at(x).slope;
  if (!(den > 0)) {
    throw DegenerateDenominator("h2: -phi'(-x) - phi'(x) = " + std::to_string(den) +
                                " at x = " + std::to_string(x));
  }
  return (p.beta() + 0.5 * p.c2()) / den;
}

double symmetric_reach(const PhiSolution& phi) { return std::min(phi.x_max(), -phi.x_min()); }

int count_root_sign_changes(const ModelParams& p, const PhiSolution& phi, int samples,
                            double delta) {
  const double lo = p.gamma() + delta, hi = symmetric_reach(phi);
  if (!(lo < hi) || samples < 2) return 0;
  int changes = 0;
  double prev = fit_gap(p, phi, lo);
  for (int i = 1; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    const double g = fit_gap(p, phi, x);
    if ((g > 0) != (prev > 0)) ++changes;
    prev = g;
  }
  return changes;
}

FreeBoundary solve_free_boundary(const ModelParams& p, const PhiSolution& phi,
                                 const RootOptions& opts) {
  FreeBoundary fb;
  fb.phi_normalization = phi.normalization();
  fb.regime = regime(p);
  if (fb.regime == Regime::NeverSwitch) return fb;

  const double lo = p.gamma() + opts.delta;
  const double hi = symmetric_reach(phi);
  if (!(lo < hi)) {
    throw NoRootBracket("solve_free_boundary: empty search interval (" + std::to_string(lo) +
                        ", " + std::to_string(hi) + ")");
  }
  auto g = [&](double x) { return fit_gap(p, phi, x); };
  const double g_lo = g(lo), g_hi = g(hi);
  if (!(g_lo < 0 && g_hi > 0)) {
    throw NoRootBracket("solve_free_boundary: h1 - h2 does not change sign on (" +
                        std::to_string(lo) + ", " + std::to_string(hi) + ")" +
                        (phi.truncated() ? "; phi table was truncated" : ""));
  }
  std::uintmax_t iters = 200;
  const double tol = opts.tol;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, done, iters);
  const double B = 0.5 * (a + b);
  fb.B = B;
  fb.K = h1(p, phi, B);
  return fb;
}

ValueFunction::ValueFunction(ModelParams p, PhiSolution phi, FreeBoundary fb)
    : params_(p), phi_(std::move(phi)), fb_(fb) {
  if (fb_.regime == Regime::Switching) {
    if (!fb_.B || !fb_.K) throw DomainError("ValueFunction: switching regime without K and B");
    if (!phi_.covers(-*fb_.B)) {
      throw DomainError("ValueFunction: phi does not cover -B = " + std::to_string(-*fb_.B));
    }
  }
}

double ValueFunction::lower() const noexcept {
  return fb_.regime == Regime::Switching ? -1.0 + phi_.epsilon() : -1.0;
}
double ValueFunction::upper() const noexcept {
  return fb_.regime == Regime::Switching ? 1.0 - phi_.epsilon() : 1.0;
}

void ValueFunction::check(double x) const {
  if (!(x >= lower() && x <= upper())) {
    throw DomainError("value_at: x = " + std::to_string(x) + " outside [" +
                      std::to_string(lower()) + ", " + std::to_string(upper()) + "]");
  }
}

double ValueFunction::core(double x) const {
  return v_tilde(params_, x) - *fb_.K * phi_.at(x).value;
}
double ValueFunction::core_prime(double x) const {
  return v_tilde_prime(params_) - *fb_.K * phi_.at(x).slope;
}
double ValueFunction::core_second(double x) const { return -*fb_.K * phi_.second_derivative(x); }

double ValueFunction::value(double x, Side a) const {
  check(x);
  if (a == Side::Down) return value(-x, Side::Up);
  if (fb_.regime == Regime::NeverSwitch) return v_tilde(params_, x);
  const double B = *fb_.B;
  if (x >= -B) return core(x);
  return core(-x) + params_.c1() + 0.5 * params_.c2() * (1.0 + x);
}

double ValueFunction::derivative(double x, Side a) const {
  check(x);
  if (a == Side::Down) return -derivative(-x, Side::Up);
  if (fb_.regime == Regime::NeverSwitch) return v_tilde_prime(params_);
  if (x >= -*fb_.B) return core_prime(x);
  return -core_prime(-x) + 0.5 * params_.c2();
}

double ValueFunction::second_derivative(double x, Side a) const {
  check(x);
  if (a == Side::Down) return second_derivative(-x, Side::Up);
  if (fb_.regime == Regime::NeverSwitch) return 0.0;
  if (x >= -*fb_.B) return core_second(x);
  return core_second(-x);
}

double ValueFunction::optimal(double x) const {
  return std::min(value(x, Side::Up), value(x, Side::Down));
}

double ValueFunction::generator_excess(double x) const {
  return l_residual(params_, x, value(x, Side::Up), derivative(x, Side::Up),
                    second_derivative(x, Side::Up)) +
         0.5 * (1.0 - x);
}

bool FitReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const FitCheck& c) { return c.passed; });
}

const FitCheck& FitReport::get(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw DomainError("FitReport: no check named " + name);
}

FitReport verify_fit(const ValueFunction& vf, const FitTolerances& tol) {
  const ModelParams& p = vf.params();
  const int n = std::max(tol.grid_points, 2);
  const double lo = vf.lower(), hi = vf.upper();
  FitReport rep;

  auto interior = [&](double a, double b, auto&& fn) {
    // Cell midpoints keep the scan off the kink and the end points.
    for (int i = 0; i < n; ++i) fn(a + (b - a) * (i + 0.5) / n);
  };

  const bool switching = vf.boundary().regime == Regime::Switching;
  const double B = switching ? *vf.boundary().B : 1.0;

  if (switching) {
    const double cont = std::abs(vf.value(-B, Side::Up) - vf.value(B, Side::Up) - p.c1() -
                                 0.5 * p.c2() * (1.0 - B));
    rep.checks.push_back({"continuous_fit", cont, tol.continuous_fit, cont < tol.continuous_fit});
    const double smooth = std::abs(vf.derivative(-B, Side::Up) + vf.derivative(B, Side::Up) -
                                   0.5 * p.c2());
    rep.checks.push_back({"smooth_fit", smooth, tol.smooth_fit, smooth < tol.smooth_fit});
  }

  double worst = 0;
  interior(switching ? -B : std::max(lo, -1.0 + 1e-9), std::min(hi, 1.0 - 1e-9),
           [&](double x) { worst = std::max(worst, std::abs(vf.generator_excess(x))); });
  rep.checks.push_back({"ode_residual", worst, tol.ode_residual, worst < tol.ode_residual});

  if (switching) {
    double least = std::numeric_limits<double>::infinity();
    interior(lo, -B, [&](double x) { least = std::min(least, vf.generator_excess(x)); });
    rep.checks.push_back({"switch_region_excess", least, tol.sign_margin, least > tol.sign_margin});
  }

  double excess = -std::numeric_limits<double>::infinity();
  interior(lo, hi, [&](double x) {
    const double dv = vf.value(x, Side::Up) - vf.value(x, Side::Down);
    excess = std::max(excess, std::abs(dv) - (p.c1() + 0.5 * p.c2() * (1.0 + x)));
  });
  rep.checks.push_back({"switch_cost_bound", excess, tol.sign_margin, excess <= tol.sign_margin});
  return rep;
}

}  // namespace seqtrack
