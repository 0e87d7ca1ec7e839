#include "seqtrack/diffusion.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 12;
constexpr double kQuadTol = 1e-13;

// Boost's error estimate carries an absolute floor, so every panel is mapped
// onto [0, 1] before integrating.
template <class F>
double panel(F f, double a, double b, unsigned depth, double tol) {
  const double w = b - a;
  return w * Rule::integrate([&](double t) { return f(a + w * t); }, 0.0, 1.0, depth, tol);
}

// u(2 - u) = 1 - x^2 for u = 1 - x.
double spread(double u) { return u * (2.0 - u); }

}  // namespace

ScaleSpeed::ScaleSpeed(const ModelParams& p, double x_cap)
    : params_(p), k_(2.0 * p.lambda() / (p.mu() * p.mu())), x_cap_(x_cap) {
  if (!(x_cap > 0 && x_cap < 1)) throw ValidationError("x_cap", "x_cap: must lie in (0, 1)");
}

double ScaleSpeed::log_scale_density(double x) const {
  if (!(x > -1 && x < 1)) throw DomainError("scale density: x outside (-1, 1)");
  return k_ / one_minus_sq(x);
}

double ScaleSpeed::scale_density(double x) const { return std::exp(log_scale_density(x)); }

double ScaleSpeed::speed_density(double x) const {
  const double s = one_minus_sq(x);
  const double mu2 = params_.mu() * params_.mu();
  return 2.0 * std::exp(-log_scale_density(x)) / (mu2 * s * s);
}

double ScaleSpeed::relative_scale_integral(double ux) const {
  // int_{ux}^{1} exp(G(u) - G(ux)) du with G(u) = k / (u (2 - u)), written in
  // the offset v = u - ux so the exponent keeps full precision near v = 0.
  // The integrand equals 1 at v = 0 and decays over a length 1/|G'(ux)|.
  const double sx = spread(ux);
  auto integrand = [&](double v) {
    return std::exp(-k_ * v * (2.0 - 2.0 * ux - v) / (spread(ux + v) * sx));
  };
  const double span = 1.0 - ux;
  double step = ux >= 1.0 ? span : sx * sx / (2.0 * k_ * span);
  double total = 0, a = 0;
  while (a < span) {
    if (integrand(a) * (span - a) < 1e-17 * total) break;
    const double b = std::min(span, a + step);
    total += panel(integrand, a, b, kMaxDepth, kQuadTol);
    a = b;
    step *= 4.0;
  }
  return total;
}

double ScaleSpeed::log_scale(double x) const {
  if (!(x > 0 && x < 1)) throw DomainError("log_scale: x outside (0, 1)");
  const double u = 1.0 - x;
  return k_ / spread(u) + std::log(relative_scale_integral(u));
}

double ScaleSpeed::scale(double x) const {
  if (!(x > -1 && x < 1)) throw DomainError("scale: x = " + std::to_string(x) + " outside (-1, 1)");
  if (x == 0) return 0.0;
  const double s = x > 0 ? 1.0 : -1.0;
  if (std::abs(x) > x_cap_) return s * std::numeric_limits<double>::infinity();
  return s * std::exp(log_scale(std::abs(x)));
}

double ScaleSpeed::hopital_ratio(double x) const {
  if (!(x > 0 && x < 1)) throw DomainError("hopital_ratio: x outside (0, 1)");
  const double u = 1.0 - x;
  const double s = spread(u);
  return relative_scale_integral(u) / (s * s);
}

double ScaleSpeed::entrance_integrand(double y) const {
  return 2.0 / (params_.mu() * params_.mu()) * hopital_ratio(y);
}

double ScaleSpeed::entrance_integral_u(double u_lo, double u_hi) const {
  // Integrate in s = log u: the integrand tends to a constant as u -> 0, so
  // equal panels in s cover every decade with the same effort.
  const double c = 2.0 / (params_.mu() * params_.mu());
  auto integrand = [&](double s) {
    const double u = std::exp(s);
    const double w = spread(u);
    return c * relative_scale_integral(u) / (w * w) * u;
  };
  const double s_lo = std::log(u_lo), s_hi = std::log(u_hi);
  const int panels = std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / 0.5)));
  const double h = (s_hi - s_lo) / panels;
  double total = 0;
  for (int j = 0; j < panels; ++j) {
    total += panel(integrand, s_lo + j * h, s_lo + (j + 1) * h, kMaxDepth, 1e-12);
  }
  return total;
}

double ScaleSpeed::entrance_integral(double a, double b) const {
  if (!(a >= 0 && a < b && b < 1)) throw DomainError("entrance_integral: need 0 <= a < b < 1");
  return entrance_integral_u(1.0 - b, 1.0 - a);
}

std::vector<double> default_entrance_caps() {
  std::vector<double> caps;
  for (int j = 1; j <= 8; ++j) caps.push_back(1.0 - std::pow(10.0, -j));
  return caps;
}

EntranceReport entrance_boundary_check(const ModelParams& p, const std::vector<double>& caps,
                                       double tolerance) {
  if (caps.empty()) throw DomainError("entrance_boundary_check: no caps");
  if (!std::is_sorted(caps.begin(), caps.end()) || caps.front() <= 0 || caps.back() >= 1) {
    throw DomainError("entrance_boundary_check: caps must increase inside (0, 1)");
  }
  const ScaleSpeed ss(p);
  EntranceReport rep;
  rep.tolerance = tolerance;
  double prev_cap = 0, acc = 0;
  for (std::size_t j = 0; j < caps.size(); ++j) {
    const double piece = caps[j] > prev_cap ? ss.entrance_integral(prev_cap, caps[j]) : 0.0;
    acc += piece;
    rep.rows.push_back({caps[j], acc, j == 0 ? std::numeric_limits<double>::quiet_NaN() : piece});
    prev_cap = caps[j];
  }
  rep.converged = rep.rows.size() >= 2 && rep.rows.back().increment < tolerance;
  return rep;
}

}  // namespace seqtrack
