#include "seqtrack/model.hpp"

#include <cmath>
#include <string>

#include "seqtrack/errors.hpp"

namespace seqtrack {

namespace {

void require(bool ok, const char* key, const std::string& msg) {
  if (!ok) throw ValidationError(key, std::string(key) + ": " + msg);
}

void check_interior(double x, const char* what) {
  if (!(x > -1.0 && x < 1.0)) {
    throw DomainError(std::string(what) + ": x = " + std::to_string(x) + " outside (-1, 1)");
  }
}

}  // namespace

ModelParams::ModelParams(double lambda, double mu, double alpha, double c1, double c2)
    : lambda_(lambda), mu_(mu), alpha_(alpha), c1_(c1), c2_(c2) {
  require(std::isfinite(lambda) && lambda > 0, "lambda", "must be finite and > 0");
  require(std::isfinite(mu) && mu > 0, "mu", "must be finite and > 0");
  require(std::isfinite(alpha) && alpha > 0, "alpha", "must be finite and > 0");
  require(std::isfinite(c1) && c1 >= 0, "c1", "must be finite and >= 0");
  require(std::isfinite(c2) && c2 >= 0, "c2", "must be finite and >= 0");
  require(c1 + c2 > 0, "c1", "c1 + c2 must be > 0");
  beta_ = 1.0 / (2.0 * lambda + alpha);
  gamma_ = (c1 + 0.5 * c2) / (beta_ + 0.5 * c2);
}

ModelParams ModelParams::reference() { return {0.25, 1.0, 0.25, 0.25, 0.0}; }

std::string_view to_string(Regime r) noexcept {
  return r == Regime::Switching ? "switching" : "never_switch";
}

Side side_from_int(int v) {
  if (v == 1) return Side::Up;
  if (v == -1) return Side::Down;
  throw DomainError("control value must be -1 or +1, got " + std::to_string(v));
}

Regime regime(const ModelParams& p) noexcept {
  return p.c1() < p.beta() ? Regime::Switching : Regime::NeverSwitch;
}

double v_tilde(const ModelParams& p, double x) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw DomainError("v_tilde: x = " + std::to_string(x) + " outside [-1, 1]");
  }
  return 0.5 / p.alpha() - 0.5 * p.beta() * x;
}

double v_tilde_prime(const ModelParams& p) noexcept { return -0.5 * p.beta(); }

double l_residual(const ModelParams& p, double x, double f, double f1, double f2) {
  check_interior(x, "l_residual");
  const double s = one_minus_sq(x);
  return 0.5 * p.mu() * p.mu() * s * s * f2 - 2.0 * p.lambda() * x * f1 - p.alpha() * f;
}

double homogeneous_second_derivative(const ModelParams& p, double x, double f, double f1) {
  check_interior(x, "homogeneous_second_derivative");
  const double s = one_minus_sq(x);
  return 2.0 * (2.0 * p.lambda() * x * f1 + p.alpha() * f) / (p.mu() * p.mu() * s * s);
}

}  // namespace seqtrack
