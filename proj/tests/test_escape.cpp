#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fastesc/escape.hpp"

using namespace fastesc;

namespace {

const double kPi = std::numbers::pi;

double d(const Magnitude& m) { return m.to_double().value(); }

const EntireFunction& cosh_sq() {
  static const EntireFunction f = make_builtin("cosh_sq");
  return f;
}

const ThresholdLadder& cosh_ladder() {
  static const ThresholdLadder l = build_ladder(cosh_sq(), 1.0, 16);
  return l;
}

}  // namespace

TEST_CASE("compute_orbit examples") {
  const OrbitRecord a = compute_orbit(cosh_sq(), 0.5, 3);
  REQUIRE(a.moduli.size() == 4);
  CHECK(d(a.moduli[1].modulus) == doctest::Approx(1.27154031741).epsilon(1e-10));
  CHECK(d(a.moduli[2].modulus) == doctest::Approx(3.69935411264).epsilon(1e-10));
  CHECK(d(a.moduli[3].modulus) == doctest::Approx(408.968270776).epsilon(1e-10));
  CHECK_FALSE(a.overflow_step.has_value());

  const OrbitRecord b = compute_orbit(make_builtin("exp"), 0.0, 3);
  CHECK(d(b.moduli[0].modulus) == 0.0);
  CHECK(d(b.moduli[1].modulus) == 1.0);
  CHECK(d(b.moduli[2].modulus) == doctest::Approx(std::exp(1.0)));
  CHECK(d(b.moduli[3].modulus) == doctest::Approx(15.1542622414793));

  const OrbitRecord c = compute_orbit(cosh_sq(), Complex(0.0, 2.0), 2);
  CHECK(d(c.moduli[0].modulus) == doctest::Approx(2.0));
  CHECK(d(c.moduli[1].modulus) == doctest::Approx(0.173178189568).epsilon(1e-10));
  CHECK(d(c.moduli[2].modulus) == doctest::Approx(1.03029170053).epsilon(1e-10));
}

TEST_CASE("orbit moduli agree with values and overflow is tracked") {
  const OrbitRecord o = compute_orbit(cosh_sq(), Complex(1.3, 0.4), 6);
  for (std::size_t n = 0; n < o.values.size(); ++n) {
    CHECK(d(o.moduli[n].modulus) == doctest::Approx(std::abs(o.values[n])).epsilon(1e-12));
  }
  REQUIRE(o.overflow_step.has_value());
  for (int n = *o.overflow_step; n <= 6; ++n) {
    CHECK(o.moduli[static_cast<std::size_t>(n)].kind != ModulusKind::missing);
    CHECK(o.moduli[static_cast<std::size_t>(n)].modulus.depth() >= 1);
  }
  CHECK(o.moduli[static_cast<std::size_t>(*o.overflow_step) + 1].kind == ModulusKind::upper_estimate);

  // Without a closed form beyond double range the record truncates.
  CoefficientRule rule{[](Index n) { return Coefficient::from_log(-std::lgamma(n + 1.0), n % 2 == 0 ? 1 : -1); }, {}};
  const OrbitRecord s = compute_orbit(make_series(rule, false), Complex(-800.0, 0.0), 4);
  REQUIRE(s.overflow_step.has_value());
  CHECK(*s.overflow_step == 1);
  CHECK(s.moduli.back().kind == ModulusKind::missing);
  CHECK(s.moduli.size() == 5);
}

TEST_CASE("level_membership examples") {
  const Complex z(2.0, kPi);
  const Membership a = level_membership(cosh_sq(), cosh_ladder(), 0, z, 6);
  CHECK(a.member);
  CHECK_FALSE(level_membership(cosh_sq(), cosh_ladder(), 1, z, 2).member);
  CHECK(level_membership(cosh_sq(), cosh_ladder(), -2, Complex(0.0, 2.0), 6).member);
  CHECK_FALSE(level_membership(cosh_sq(), cosh_ladder(), -1, Complex(0.0, 2.0), 6).member);
  const ThresholdLadder shortl = build_ladder(cosh_sq(), 1.0, 3);
  CHECK_THROWS_AS(level_membership(cosh_sq(), shortl, 2, z, 6), GrowthError);
}

TEST_CASE("the positive axis meets the ladder exactly at R") {
  // |f^n(1)| = M^n(1): equality must count as membership at level 0.
  const Membership m = level_membership(cosh_sq(), cosh_ladder(), 0, 1.0, 12);
  CHECK(m.member);
}

TEST_CASE("max_level examples") {
  const LevelVerdict a = max_level(cosh_sq(), cosh_ladder(), Complex(0.0, 2.0), 6, -4, 4);
  REQUIRE(a.level.has_value());
  CHECK(*a.level == -2);
  CHECK(a.depth == 6);
  CHECK(a.ladder_R == 1.0);

  const LevelVerdict b = max_level(cosh_sq(), cosh_ladder(), 0.5, 6);
  REQUIRE(b.level.has_value());
  CHECK(*b.level == -1);

  const LevelVerdict c = max_level(cosh_sq(), cosh_ladder(), Complex(2.0, kPi), 6);
  REQUIRE(c.level.has_value());
  CHECK(*c.level == 0);

  // A point near a zero of cosh fails every level in [0, 4].
  const LevelVerdict none = max_level(cosh_sq(), cosh_ladder(), Complex(0.0, kPi / 2), 6, 0, 4);
  CHECK_FALSE(none.level.has_value());
  CHECK_THROWS_AS(max_level(cosh_sq(), cosh_ladder(), 0.5, 6, 3, 2), GrowthError);
}

TEST_CASE("max_level agrees with a linear scan") {
  for (double x : {-2.7, -1.1, -0.4, 0.2, 0.9, 1.6, 2.9}) {
    for (double y : {-3.0, -1.2, 0.0, 0.7, 2.2}) {
      const Complex z(x, y);
      const OrbitRecord o = compute_orbit(cosh_sq(), z, 8);
      const LevelVerdict v = max_level(o, cosh_ladder(), 8, -8, 8);
      std::optional<int> scan;
      for (int L = -8; L <= 8; ++L) {
        if (level_membership(o, cosh_ladder(), L, 8).member) scan = L;
      }
      CHECK(v.level == scan);
    }
  }
}

TEST_CASE("mu_criterion") {
  const EntireFunction s = make_builtin("sinh_plus_sq");
  CHECK(mu_criterion(s, -10.0, 0.5, 5.0, 0, 1));
  CHECK(mu_criterion(make_builtin("exp"), 10.0, 0.5, 2.0, 0, 3));
  CHECK_FALSE(mu_criterion(cosh_sq(), Complex(0.0, 2.0), 0.5, 1.0, 0, 1));
  CHECK_THROWS_AS(mu_criterion(s, -10.0, 1.5, 5.0, 0, 2), GrowthError);
  CHECK_THROWS_AS(mu_criterion(make_builtin("quarter_order"), 1.0, 0.5, 100.0, 0, 2), GrowthError);
}

TEST_CASE("half maximum modulus on the negative axis for sinh z + z^2") {
  const EntireFunction s = make_builtin("sinh_plus_sq");
  const Evaluation e = s.evaluate(-10.0);
  CHECK(std::abs(e.value()) == doctest::Approx(10913.2328747).epsilon(1e-10));
  CHECK(0.5 * d(max_modulus(s, 10.0).value) == doctest::Approx(5556.61643735).epsilon(1e-10));
}
