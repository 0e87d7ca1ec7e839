#include "seqtrack/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class HomogeneousRhs {
 public:
  explicit HomogeneousRhs(const ModelParams& p)
      : two_lambda_(2.0 * p.lambda()), alpha_(p.alpha()), half_mu2_(0.5 * p.mu() * p.mu()) {}

  State operator()(double x, const State& y) const {
    const double s = one_minus_sq(x);
    return {y[1], (two_lambda_ * x * y[1] + alpha_ * y[0]) / (half_mu2_ * s * s)};
  }

 private:
  double two_lambda_, alpha_, half_mu2_;
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [a, k] : terms) {
    out[0] += h * a * (*k)[0];
    out[1] += h * a * (*k)[1];
  }
  return out;
}

double error_norm(const State& err, const State& y0, const State& y1, double tol) {
  double acc = 0;
  for (int i = 0; i < 2; ++i) {
    const double sc = tol * (1.0 + std::max(std::abs(y0[i]), std::abs(y1[i])));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / 2.0);
}

void validate(const PhiOptions& o) {
  if (!(o.epsilon > 0 && o.epsilon <= 1e-2)) {
    throw ValidationError("epsilon", "epsilon: must lie in (0, 1e-2]");
  }
  if (!(o.tol > 0)) throw ValidationError("ode_tol", "ode_tol: must be > 0");
  if (!(o.normalization > 0)) throw ValidationError("normalization", "normalization: must be > 0");
  if (!(o.overflow_cap > o.normalization)) {
    throw ValidationError("overflow_cap", "overflow_cap: must exceed the normalization");
  }
}

// Initial step guess (Hairer, Norsett & Wanner, II.4).
double initial_step(const HomogeneousRhs& f, double x, const State& y, double tol, double dir) {
  const State f0 = f(x, y);
  auto nrm = [&](const State& v) {
    double acc = 0;
    for (int i = 0; i < 2; ++i) {
      const double r = v[i] / (tol * (1.0 + std::abs(y[i])));
      acc += r * r;
    }
    return std::sqrt(acc / 2.0);
  };
  const double d0 = nrm(y), d1 = nrm(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const State y1 = {y[0] + dir * h0 * f0[0], y[1] + dir * h0 * f0[1]};
  const State f1 = f(x + dir * h0, y1);
  const State df = {f1[0] - f0[0], f1[1] - f0[1]};
  const double d2 = nrm(df) / h0;
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                               : std::pow(0.01 / std::max(d1, d2), 0.2);
  return std::min(100 * h0, h1);
}

// Quintic Hermite basis on t in [0, 1] and its t-derivative.
struct Quintic {
  double v[6];
  double d[6];
  explicit Quintic(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    v[0] = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    v[1] = t - 6 * t3 + 8 * t4 - 3 * t5;
    v[2] = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    v[3] = 10 * t3 - 15 * t4 + 6 * t5;
    v[4] = -4 * t3 + 7 * t4 - 3 * t5;
    v[5] = 0.5 * t3 - t4 + 0.5 * t5;
    d[0] = -30 * t2 + 60 * t3 - 30 * t4;
    d[1] = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    d[2] = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    d[3] = 30 * t2 - 60 * t3 + 30 * t4;
    d[4] = -12 * t2 + 28 * t3 - 15 * t4;
    d[5] = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  }
};

}  // namespace

PhiSolution solve_phi(const ModelParams& p, const PhiOptions& opts) {
  validate(opts);
  const HomogeneousRhs f(p);
  const double x_start = 1.0 - opts.epsilon;
  const double x_end = -1.0 + opts.epsilon;

  std::vector<double> stops;
  for (double s : opts.stops) {
    if (s > x_end && s < x_start) stops.push_back(s);
  }
  std::sort(stops.begin(), stops.end(), std::greater<>());
  stops.push_back(x_end);

  PhiSolution sol(p);
  sol.epsilon_ = opts.epsilon;
  sol.tol_ = opts.tol;
  sol.normalization_ = opts.normalization;

  // Built right-to-left, reversed at the end.
  std::vector<double> xs{x_start};
  std::vector<State> ys{State{opts.normalization, -p.alpha() / (2.0 * p.lambda()) * opts.normalization}};

  double x = x_start;
  State y = ys.back();
  State k1 = f(x, y);
  double h = initial_step(f, x, y, opts.tol, -1.0);
  std::size_t next_stop = 0;
  std::size_t steps = 0;
  bool last_rejected = false;

  while (next_stop < stops.size()) {
    if (++steps > opts.max_steps) {
      throw IntegrationFailure(x, "solve_phi: step budget exhausted at x = " + std::to_string(x));
    }
    const double target = stops[next_stop];
    bool landing = false;
    if (x - h <= target) {
      h = x - target;
      landing = true;
    }
    if (h < opts.min_step * std::max(1.0, std::abs(x))) {
      throw IntegrationFailure(x, "solve_phi: step size underflow at x = " + std::to_string(x));
    }
    const double s = -h;  // signed step

    const State k2 = f(x + c2 * s, axpy(y, s, {{a21, &k1}}));
    const State k3 = f(x + c3 * s, axpy(y, s, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(x + c4 * s, axpy(y, s, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(x + c5 * s, axpy(y, s, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const double x_new = landing ? target : x + s;
    const State k6 =
        f(x_new, axpy(y, s, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, s, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(x_new, y_new);
    State err{};
    for (int i = 0; i < 2; ++i) {
      err[i] = s * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double en = error_norm(err, y, y_new, opts.tol);

    if (!std::isfinite(en) || !std::isfinite(y_new[0]) || !std::isfinite(y_new[1])) {
      if (last_rejected && h < 1e-12) {
        throw IntegrationFailure(x, "solve_phi: non-finite state at x = " + std::to_string(x));
      }
      h *= 0.2;
      last_rejected = true;
      ++sol.rejected_;
      continue;
    }

    if (en <= 1.0) {
      if (y_new[0] > opts.overflow_cap) {
        sol.truncated_ = true;
        break;
      }
      x = x_new;
      y = y_new;
      k1 = k7;
      xs.push_back(x);
      ys.push_back(y);
      if (landing) ++next_stop;
      double fac = en == 0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h *= fac;
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
      ++sol.rejected_;
    }
  }

  const std::size_t n = xs.size();
  sol.x_.resize(n);
  sol.phi_.resize(n);
  sol.dphi_.resize(n);
  sol.ddphi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    sol.x_[i] = xs[j];
    sol.phi_[i] = ys[j][0];
    sol.dphi_[i] = ys[j][1];
    sol.ddphi_[i] = f(xs[j], ys[j])[1];
  }

  if (n < 2) throw InvariantViolation("solve_phi: table has fewer than two nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sol.phi_[i] > 0)) {
      throw InvariantViolation("solve_phi: phi not positive at x = " + std::to_string(sol.x_[i]));
    }
    if (!(sol.dphi_[i] < 0)) {
      throw InvariantViolation("solve_phi: phi' not negative at x = " + std::to_string(sol.x_[i]));
    }
    if (i + 1 < n && !(sol.dphi_[i] < sol.dphi_[i + 1])) {
      throw InvariantViolation("solve_phi: phi' not increasing at x = " + std::to_string(sol.x_[i]));
    }
  }
  return sol;
}

PhiPoint PhiSolution::at(double x) const {
  if (!covers(x)) {
    throw DomainError("phi_at: x = " + std::to_string(x) + " outside [" + std::to_string(x_min()) +
                      ", " + std::to_string(x_max()) + "]");
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) i = x_.size() - 2;
  const double x0 = x_[i], x1 = x_[i + 1];
  if (x == x0) return {phi_[i], dphi_[i]};
  if (x == x1) return {phi_[i + 1], dphi_[i + 1]};

  const double h = x1 - x0;
  const Quintic q((x - x0) / h);
  const double v = q.v[0] * phi_[i] + q.v[1] * h * dphi_[i] + q.v[2] * h * h * ddphi_[i] +
                   q.v[3] * phi_[i + 1] + q.v[4] * h * dphi_[i + 1] + q.v[5] * h * h * ddphi_[i + 1];
  const double d = (q.d[0] * phi_[i] + q.d[3] * phi_[i + 1]) / h + q.d[1] * dphi_[i] +
                   q.d[2] * h * ddphi_[i] + q.d[4] * dphi_[i + 1] + q.d[5] * h * ddphi_[i + 1];
  // Monotone and convex between nodes.
  return {std::clamp(v, phi_[i + 1], phi_[i]), std::clamp(d, dphi_[i], dphi_[i + 1])};
}

double PhiSolution::second_derivative(double x) const {
  const PhiPoint pt = at(x);
  return homogeneous_second_derivative(params_, x, pt.value, pt.slope);
}

}  // namespace seqtrack
