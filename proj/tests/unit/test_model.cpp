#include <doctest.h>

#include <cmath>

#include "oracles/closed_forms.hpp"
#include "seqtrack/errors.hpp"
#include "seqtrack/model.hpp"

using namespace seqtrack;

TEST_CASE("reference parameters and derived constants") {
  const auto p = ModelParams::reference();
  CHECK(p.beta() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(p.gamma() == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(regime(p) == Regime::Switching);
}

TEST_CASE("gamma < 1 exactly when c1 < beta") {
  for (double c2 : {0.0, 0.3, 2.0}) {
    for (double c1 : {0.0, 0.5, 1.3, 4.0 / 3.0, 1.5}) {
      if (c1 + c2 == 0) continue;
      const ModelParams p(0.25, 1.0, 0.25, c1, c2);
      CHECK((p.gamma() < 1) == (c1 < p.beta()));
      CHECK(p.gamma() > 0);
    }
  }
}

TEST_CASE("validation names the offending key") {
  auto key_of = [](auto make) -> std::string {
    try {
      make();
    } catch (const ValidationError& e) {
      return e.key();
    }
    return "";
  };
  CHECK(key_of([] { ModelParams(0.0, 1, 1, 1, 0); }) == "lambda");
  CHECK(key_of([] { ModelParams(1, -1, 1, 1, 0); }) == "mu");
  CHECK(key_of([] { ModelParams(1, 1, 0, 1, 0); }) == "alpha");
  CHECK(key_of([] { ModelParams(1, 1, 1, -1, 0); }) == "c1");
  CHECK(key_of([] { ModelParams(1, 1, 1, 1, -1); }) == "c2");
  CHECK(key_of([] { ModelParams(1, 1, 1, 0, 0); }) == "c1");
  CHECK(key_of([] { ModelParams(NAN, 1, 1, 1, 0); }) == "lambda");
}

TEST_CASE("regime boundary case belongs to never-switch") {
  const auto p = ModelParams::reference();
  CHECK(regime(p.with_c1(2.0)) == Regime::NeverSwitch);
  CHECK(regime(p.with_c1(p.beta())) == Regime::NeverSwitch);
  CHECK(regime(p.with_c1(std::nextafter(p.beta(), 0.0))) == Regime::Switching);
  CHECK(to_string(Regime::NeverSwitch) == "never_switch");
  CHECK(to_string(Regime::Switching) == "switching");
}

TEST_CASE("regime is monotone in c1") {
  const auto p = ModelParams::reference();
  bool seen_never = false;
  for (int i = 1; i <= 200; ++i) {
    const auto r = regime(p.with_c1(0.01 * i));
    if (seen_never) CHECK(r == Regime::NeverSwitch);
    seen_never = seen_never || r == Regime::NeverSwitch;
  }
  CHECK(seen_never);
}

TEST_CASE("v_tilde values and symmetry") {
  const auto p = ModelParams::reference();
  CHECK(v_tilde(p, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v_tilde(p, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(v_tilde(p, -1.0) - v_tilde(p, 1.0) == doctest::Approx(p.beta()).epsilon(1e-14));
  for (double x = -1.0; x <= 1.0; x += 0.125) {
    CHECK(v_tilde(p, x) + v_tilde(p, -x) == doctest::Approx(1.0 / p.alpha()).epsilon(1e-14));
    CHECK(v_tilde(p, x) == doctest::Approx(oracle::v_tilde(0.25, 0.25, x)).epsilon(1e-15));
  }
  CHECK(v_tilde_prime(p) == doctest::Approx(-p.beta() / 2));
  CHECK_THROWS_AS(v_tilde(p, 1.0 + 1e-12), DomainError);
  CHECK_THROWS_AS(v_tilde(p, -1.5), DomainError);
}

TEST_CASE("l_residual") {
  const ModelParams p(0.4, 1.3, 0.2, 0.1, 0.2);
  for (double x : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
    CHECK(l_residual(p, x, v_tilde(p, x), v_tilde_prime(p), 0.0) ==
          doctest::Approx(-0.5 * (1 - x)).epsilon(1e-13));
    CHECK(l_residual(p, x, 0, 0, 0) == 0.0);
    // Linearity in (f, f1, f2).
    const double a = l_residual(p, x, 1.0, 2.0, 3.0), b = l_residual(p, x, -0.5, 0.25, 4.0);
    CHECK(l_residual(p, x, 2.0 * 1.0 - 0.5, 2.0 * 2.0 + 0.25, 2.0 * 3.0 + 4.0) ==
          doctest::Approx(2 * a + b).epsilon(1e-13));
    const double f2 = homogeneous_second_derivative(p, x, 1.7, -0.4);
    CHECK(std::abs(l_residual(p, x, 1.7, -0.4, f2)) < 1e-12);
  }
  CHECK_THROWS_AS(l_residual(p, 1.0, 0, 0, 0), DomainError);
  CHECK_THROWS_AS(l_residual(p, -1.0, 0, 0, 0), DomainError);
}

TEST_CASE("side helpers") {
  CHECK(sign(Side::Up) == 1);
  CHECK(opposite(Side::Down) == Side::Up);
  CHECK(side_from_int(-1) == Side::Down);
  CHECK_THROWS_AS(side_from_int(0), DomainError);
}
