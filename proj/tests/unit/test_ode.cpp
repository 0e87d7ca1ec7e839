#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles/phi_odeint.hpp"
#include "seqtrack/errors.hpp"
#include "seqtrack/ode.hpp"

using namespace seqtrack;

namespace {

const PhiSolution& reference_phi() {
  static const PhiSolution sol = solve_phi(ModelParams::reference());
  return sol;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("Cauchy data at 1 - epsilon") {
  const auto& s = reference_phi();
  CHECK(s.x_max() == doctest::Approx(0.9999).epsilon(1e-15));
  const PhiPoint pt = s.at(0.9999);
  CHECK(pt.value == 1.0);
  CHECK(pt.slope == -0.5);
}

TEST_CASE("table invariants") {
  const auto& s = reference_phi();
  REQUIRE(s.size() > 10);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.phi()[i] > 0);
    CHECK(s.dphi()[i] < 0);
    if (i + 1 < s.size()) {
      CHECK(s.x()[i] < s.x()[i + 1]);
      CHECK(s.phi()[i] > s.phi()[i + 1]);
      CHECK(s.dphi()[i] < s.dphi()[i + 1]);
    }
  }
  // Blow-up towards -1: either the table reaches -1 + eps with a huge value
  // or it was cut at the overflow cap.
  CHECK(s.phi().front() > 1e6 * s.phi().back());
  if (s.truncated()) {
    CHECK(s.phi().front() <= 1e12);
    CHECK(s.phi().front() >= 1e9);
  } else {
    CHECK(s.x_min() == doctest::Approx(-0.9999));
  }
  // phi'/phi is strongly negative at the left end and mild at the right end.
  CHECK(s.dphi().front() / s.phi().front() < -100.0);
  CHECK(s.dphi().back() / s.phi().back() == doctest::Approx(-0.5));
}

TEST_CASE("agrees with an independent Fehlberg 7(8) integration") {
  const auto& s = reference_phi();
  for (double x : {0.9, 0.5, 0.0, -0.5, -0.639, -0.9}) {
    const auto o = oracle::phi_odeint(0.25, 1.0, 0.25, 1e-4, x);
    const PhiPoint pt = s.at(x);
    CHECK(std::abs(pt.value / o.value - 1.0) < 1e-8);
    CHECK(std::abs(pt.slope / o.slope - 1.0) < 1e-8);
  }
  // Another parameter set.
  const ModelParams q(0.7, 1.6, 0.1, 0.05, 0.3);
  const PhiSolution sq = solve_phi(q);
  for (double x : {0.8, 0.0, -0.7}) {
    const auto o = oracle::phi_odeint(0.7, 1.6, 0.1, 1e-4, x);
    CHECK(std::abs(sq.at(x).value / o.value - 1.0) < 1e-8);
  }
}

TEST_CASE("reflection psi(x) = phi(-x) also solves L f = 0") {
  const auto& s = reference_phi();
  const auto& p = s.params();
  for (double x = -0.95; x <= 0.95; x += 0.05) {
    const PhiPoint a = s.at(-x);
    const double psi = a.value, dpsi = -a.slope;
    const double ddpsi = s.second_derivative(-x);
    CHECK(std::abs(l_residual(p, x, psi, dpsi, ddpsi)) <= 1e-9 * std::max(1.0, psi));
  }
}

TEST_CASE("ODE residual between nodes with phi'' from finite differences") {
  const auto& s = reference_phi();
  const auto& p = s.params();
  for (std::size_t i = 0; i + 1 < s.size(); i += 7) {
    const double x = 0.5 * (s.x()[i] + s.x()[i + 1]);
    if (std::abs(x) > 0.99) continue;
    // phi''/phi' varies on a length of order (1 - x^2)^2, so the stencil shrinks with it.
    const double h = 1e-3 * one_minus_sq(x) * one_minus_sq(x);
    const PhiPoint pt = s.at(x);
    const double f2 = (s.at(x + h).slope - s.at(x - h).slope) / (2 * h);
    const double diff = 0.5 * p.mu() * p.mu() * one_minus_sq(x) * one_minus_sq(x) * std::abs(f2);
    const double scale = diff + std::abs(p.alpha() * pt.value) + std::abs(2 * p.lambda() * x * pt.slope);
    CHECK(std::abs(l_residual(p, x, pt.value, pt.slope, f2)) < 1e-6 * scale);
  }
}

TEST_CASE("interpolation contract") {
  const auto& s = reference_phi();
  for (std::size_t i = 0; i < s.size(); i += 13) {
    const PhiPoint pt = s.at(s.x()[i]);
    CHECK(pt.value == s.phi()[i]);
    CHECK(pt.slope == s.dphi()[i]);
  }
  for (std::size_t i = 0; i + 1 < s.size(); i += 11) {
    for (double t : {0.1, 0.5, 0.9}) {
      const double x = s.x()[i] + t * (s.x()[i + 1] - s.x()[i]);
      const PhiPoint pt = s.at(x);
      CHECK(pt.value <= s.phi()[i]);
      CHECK(pt.value >= s.phi()[i + 1]);
      CHECK(pt.slope >= s.dphi()[i]);
      CHECK(pt.slope <= s.dphi()[i + 1]);
    }
  }
  CHECK_THROWS_AS(s.at(0.99995), DomainError);
  CHECK_THROWS_AS(s.at(s.x_min() - 1e-9), DomainError);
}

TEST_CASE("midpoint agrees with a re-integration that lands on it") {
  const auto& s = reference_phi();
  PhiOptions opts;
  for (std::size_t i : {std::size_t{5}, s.size() / 3, s.size() / 2, s.size() - 20}) {
    opts.stops.push_back(0.5 * (s.x()[i] + s.x()[i + 1]));
  }
  const PhiSolution forced = solve_phi(s.params(), opts);
  for (double x : opts.stops) {
    const auto it = std::find(forced.x().begin(), forced.x().end(), x);
    REQUIRE(it != forced.x().end());
    const std::size_t j = static_cast<std::size_t>(it - forced.x().begin());
    CHECK(rel(s.at(x).value, forced.phi()[j]) <= 100 * s.tol());
    CHECK(rel(s.at(x).slope, forced.dphi()[j]) <= 100 * s.tol());
  }
}

TEST_CASE("scale invariance under renormalisation") {
  const auto& s = reference_phi();
  PhiOptions opts;
  opts.normalization = 3.5;
  opts.overflow_cap = 3.5e12;
  const PhiSolution t = solve_phi(s.params(), opts);
  for (double x : {0.9, 0.2, -0.4, -0.8}) {
    CHECK(t.at(x).value == doctest::Approx(3.5 * s.at(x).value).epsilon(1e-9));
    CHECK(t.at(x).slope == doctest::Approx(3.5 * s.at(x).slope).epsilon(1e-8));
  }
}

TEST_CASE("overflow cap truncates and records it") {
  PhiOptions opts;
  opts.overflow_cap = 1e3;
  const PhiSolution s = solve_phi(ModelParams::reference(), opts);
  CHECK(s.truncated());
  CHECK(s.x_min() > -0.9999);
  CHECK(s.phi().front() <= 1e3);
  CHECK(s.phi().front() >= 1e2);
}

TEST_CASE("option validation and failure reporting") {
  const auto p = ModelParams::reference();
  PhiOptions bad;
  bad.epsilon = 0.05;
  CHECK_THROWS_AS(solve_phi(p, bad), ValidationError);
  bad = {};
  bad.tol = 0;
  CHECK_THROWS_AS(solve_phi(p, bad), ValidationError);

  PhiOptions tiny;
  tiny.max_steps = 20;
  try {
    solve_phi(p, tiny);
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.reached_x() < 0.9999);
    CHECK(e.reached_x() > -1.0);
  }
}

TEST_CASE("epsilon knob") {
  PhiOptions opts;
  opts.epsilon = 1e-3;
  const PhiSolution s = solve_phi(ModelParams::reference(), opts);
  CHECK(s.x_max() == doctest::Approx(0.999));
  CHECK(s.at(0.999).slope == -0.5);
}
