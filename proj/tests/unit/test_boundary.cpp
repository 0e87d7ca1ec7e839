#include <doctest.h>

#include <cmath>

#include "oracles/closed_forms.hpp"
#include "oracles/phi_odeint.hpp"
#include "seqtrack/boundary.hpp"
#include "seqtrack/errors.hpp"

using namespace seqtrack;

namespace {

struct Solved {
  PhiSolution phi;
  FreeBoundary fb;
  ValueFunction vf;
};

Solved solve_all(const ModelParams& p, PhiOptions opts = {}) {
  PhiSolution phi = solve_phi(p, opts);
  FreeBoundary fb = solve_free_boundary(p, phi);
  ValueFunction vf(p, phi, fb);
  return {std::move(phi), fb, std::move(vf)};
}

const Solved& reference() {
  static const Solved s = solve_all(ModelParams::reference());
  return s;
}

}  // namespace

TEST_CASE("h1 sign structure") {
  const auto& s = reference();
  const auto& p = s.vf.params();
  CHECK(std::abs(h1(p, s.phi, p.gamma())) < 1e-15);
  CHECK(h1(p, s.phi, p.gamma() + 1e-6) > 0);
  CHECK(h1(p, s.phi, p.gamma() + 1e-6) < 1e-5);
  for (double x = 0.01; x < p.gamma() - 1e-3; x += 0.01) CHECK(h1(p, s.phi, x) < 0);
  for (double x = p.gamma() + 1e-3; x < symmetric_reach(s.phi); x += 0.01) CHECK(h1(p, s.phi, x) > 0);
}

TEST_CASE("h1 and h2 at the reported threshold") {
  const auto& s = reference();
  const auto& p = s.vf.params();
  CHECK(h1(p, s.phi, 0.639) == doctest::Approx(0.378).epsilon(0.0005 / 0.378));
  CHECK(h2(p, s.phi, 0.639) == doctest::Approx(0.378).epsilon(0.0005 / 0.378));
}

TEST_CASE("h2 is positive and matches the independent phi'") {
  const auto& s = reference();
  const auto& p = s.vf.params();
  for (int i = 1; i <= 100; ++i) CHECK(h2(p, s.phi, 0.9999 * i / 101.0) > 0);
  const auto a = oracle::phi_odeint(0.25, 1.0, 0.25, 1e-4, 0.5);
  const auto b = oracle::phi_odeint(0.25, 1.0, 0.25, 1e-4, -0.5);
  const double expected = p.beta() / (-b.slope - a.slope);
  CHECK(h2(p, s.phi, 0.5) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("h1/h2 domain errors") {
  const auto& s = reference();
  const auto& p = s.vf.params();
  CHECK_THROWS_AS(h1(p, s.phi, 0.99995), DomainError);
  CHECK_THROWS_AS(h2(p, s.phi, 1.2), DomainError);
  CHECK_THROWS_AS(h1(p, s.phi, -0.1), DomainError);
}

TEST_CASE("reference free boundary") {
  const auto& fb = reference().fb;
  REQUIRE(fb.regime == Regime::Switching);
  REQUIRE(fb.B.has_value());
  CHECK(std::abs(*fb.B - 0.639) <= 0.0005);
  CHECK(std::abs(*fb.K - 0.378) <= 0.0005);
  CHECK(fb.phi_normalization == 1.0);
  const auto& p = reference().vf.params();
  CHECK(*fb.B > p.gamma());
  CHECK(*fb.K == doctest::Approx(h2(p, reference().phi, *fb.B)).epsilon(1e-9));
}

TEST_CASE("exactly one sign change of h1 - h2") {
  const auto& s = reference();
  CHECK(count_root_sign_changes(s.vf.params(), s.phi, 5000) == 1);
  const ModelParams q(0.5, 0.7, 0.3, 0.1, 0.4);
  CHECK(count_root_sign_changes(q, solve_phi(q), 5000) == 1);
}

TEST_CASE("rescaling phi scales K and leaves B") {
  PhiOptions opts;
  opts.normalization = 2.0;
  opts.overflow_cap = 2e12;
  const auto s2 = solve_all(ModelParams::reference(), opts);
  const auto& s1 = reference();
  CHECK(*s2.fb.B == doctest::Approx(*s1.fb.B).epsilon(1e-9));
  CHECK(*s2.fb.K == doctest::Approx(*s1.fb.K / 2).epsilon(1e-9));
  CHECK(s2.fb.phi_normalization == 2.0);
  CHECK(s2.vf.value(0.1, Side::Up) == doctest::Approx(s1.vf.value(0.1, Side::Up)).epsilon(1e-9));
}

TEST_CASE("B rises to 1 and K falls to 0 as c1 approaches beta") {
  const auto base = ModelParams::reference();
  double lastB = 0, lastK = 1e9;
  for (double c1 : {0.2, 0.5, 0.8, 1.0, 1.2, 1.3}) {
    const auto s = solve_all(base.with_c1(c1));
    CHECK(*s.fb.B > lastB);
    CHECK(*s.fb.K < lastK);
    lastB = *s.fb.B;
    lastK = *s.fb.K;
  }
  CHECK(lastB > 0.95);
  CHECK(lastK < 0.05);
}

TEST_CASE("never-switch regime") {
  const ModelParams p = ModelParams::reference().with_c1(2.0);
  const auto s = solve_all(p);
  CHECK(s.fb.regime == Regime::NeverSwitch);
  CHECK_FALSE(s.fb.K.has_value());
  CHECK_FALSE(s.fb.B.has_value());
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    CHECK(s.vf.value(x, Side::Up) == v_tilde(p, x));
    CHECK(s.vf.value(x, Side::Down) == v_tilde(p, -x));
  }
  const FitReport rep = verify_fit(s.vf);
  CHECK(rep.all_passed());
}

TEST_CASE("no root bracket when phi is truncated too early") {
  const auto p = ModelParams::reference();
  PhiOptions opts;
  opts.overflow_cap = solve_phi(p).at(-0.5).value;
  const PhiSolution phi = solve_phi(p, opts);
  REQUIRE(symmetric_reach(phi) < 0.639);
  CHECK_THROWS_AS(solve_free_boundary(p, phi), NoRootBracket);
}

TEST_CASE("value function pasting") {
  const auto& s = reference();
  const auto& vf = s.vf;
  const auto& p = vf.params();
  const double B = *s.fb.B;
  CHECK(vf.value(-B, Side::Up) - vf.value(B, Side::Up) ==
        doctest::Approx(p.c1() + p.c2() / 2 * (1 - B)).epsilon(1e-9));
  CHECK(vf.value(0.3, Side::Down) == vf.value(-0.3, Side::Up));
  for (double x = vf.lower(); x <= vf.upper(); x += 0.01) {
    CHECK(vf.value(x, Side::Up) <= v_tilde(p, x));
    CHECK(vf.optimal(x) == std::min(vf.value(x, Side::Up), vf.value(x, Side::Down)));
    CHECK(std::abs(vf.value(x, Side::Up) - vf.value(x, Side::Down)) <=
          p.c1() + p.c2() / 2 * (1 + x) + 1e-12);
  }
  // Continuity and C1 at -B.
  const double h = 1e-7;
  CHECK(vf.value(-B - h, Side::Up) == doctest::Approx(vf.value(-B + h, Side::Up)).epsilon(1e-6));
  CHECK(vf.derivative(-B - h, Side::Up) ==
        doctest::Approx(vf.derivative(-B + h, Side::Up)).epsilon(1e-5));
  CHECK_THROWS_AS(vf.value(0.99995, Side::Up), DomainError);
}

TEST_CASE("g(x) = V(x) - V(-x) decreases on [-B, B] with flat ends") {
  const auto& s = reference();
  const double B = *s.fb.B;
  auto g = [&](double x) { return s.vf.value(x, Side::Up) - s.vf.value(-x, Side::Up); };
  for (double x = -B; x < B - 1e-3; x += 1e-3) CHECK(g(x + 1e-3) < g(x));
  auto dg = [&](double x) {
    return s.vf.derivative(x, Side::Up) + s.vf.derivative(-x, Side::Up);
  };
  CHECK(std::abs(dg(B)) < 1e-8);
  CHECK(std::abs(dg(-B)) < 1e-8);
}

TEST_CASE("generator excess matches the closed form in the switch region") {
  const auto& s = reference();
  const double B = *s.fb.B;
  for (double x = -0.9999 + 1e-3; x < -B - 1e-3; x += 0.01) {
    CHECK(s.vf.generator_excess(x) ==
          doctest::Approx(oracle::switch_region_excess(0.25, 0.25, 0.25, 0.0, x)).epsilon(1e-7));
    CHECK(s.vf.generator_excess(x) > 0);
  }
  for (double x = -B + 1e-3; x < 0.999; x += 0.01) CHECK(std::abs(s.vf.generator_excess(x)) < 1e-7);
}

TEST_CASE("verify_fit on the reference solution") {
  const FitReport rep = verify_fit(reference().vf);
  CHECK(rep.all_passed());
  CHECK(rep.get("continuous_fit").value < 1e-6);
  CHECK(rep.get("smooth_fit").value < 1e-5);
  CHECK(rep.get("ode_residual").value < 1e-6);
  CHECK(rep.get("switch_region_excess").value > 0);
  // |V(x,+1) - V(x,-1)| meets c1 + c2/2 (1+x) with equality inside the switch region.
  CHECK(rep.get("switch_cost_bound").value <= 1e-12);
  CHECK(rep.checks.size() == 5);
  CHECK_THROWS(rep.get("nope"));
}

TEST_CASE("verify_fit flags a perturbed threshold") {
  const auto& s = reference();
  const auto& p = s.vf.params();
  FreeBoundary bad = s.fb;
  bad.B = *s.fb.B + 0.05;
  bad.K = h1(p, s.phi, *bad.B);
  const FitReport rep = verify_fit(ValueFunction(p, s.phi, bad));
  CHECK(rep.get("smooth_fit").value >= 1e-3);
  CHECK_FALSE(rep.get("smooth_fit").passed);
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("fits with a wrong-time switching cost") {
  const ModelParams p(0.25, 1.0, 0.25, 0.1, 0.4);
  const auto s = solve_all(p);
  REQUIRE(s.fb.regime == Regime::Switching);
  CHECK(*s.fb.B > p.gamma());
  CHECK(verify_fit(s.vf).all_passed());
  for (double x = -0.99; x < -*s.fb.B - 1e-3; x += 0.01) {
    CHECK(s.vf.generator_excess(x) ==
          doctest::Approx(oracle::switch_region_excess(0.25, 0.25, 0.1, 0.4, x)).epsilon(1e-7));
  }
}
