#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fastesc/entire_function.hpp"

using namespace fastesc;

namespace {

Complex value(const EntireFunction& f, Complex z) {
  const Evaluation e = f.evaluate(z);
  REQUIRE_FALSE(e.overflowed());
  return e.value();
}

std::string sign_string(std::uint64_t seed) {
  std::string s;
  for (Index n = 0; n < 64; ++n) s += random_sign(seed, n) > 0 ? '+' : '-';
  return s;
}

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("builtin values") {
  CHECK(value(make_builtin("exp"), 0.0) == Complex(1.0, 0.0));
  CHECK(std::abs(value(make_builtin("cosh_sq"), Complex(0.0, std::numbers::pi / 2))) < 1e-15);
  CHECK(value(make_builtin("cosh_sq"), 1.0).real() == doctest::Approx(2.38109784554182).epsilon(1e-13));
  CHECK(value(make_builtin("quarter_order"), 1.0).real() == doctest::Approx(1.04169147034169).epsilon(1e-13));
  const EntireFunction pg = make_builtin("power_gap", {{"p", "1"}, {"q", "2"}});
  CHECK(value(pg, 4.0).real() == doctest::Approx(3.76219569108363).epsilon(1e-12));
}

TEST_CASE("cosh_sq on the lines y = n pi is cosh^2 x") {
  const EntireFunction f = make_builtin("cosh_sq");
  for (double x : {-2.5, -0.3, 0.0, 1.7, 3.0}) {
    const Complex v = value(f, Complex(x, std::numbers::pi));
    CHECK(v.real() == doctest::Approx(std::cosh(x) * std::cosh(x)).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-12 * std::max(1.0, v.real()));
  }
}

TEST_CASE("coefficients") {
  CHECK(make_builtin("exp").coefficient(3).real() == doctest::Approx(1.0 / 6.0));
  CHECK(make_builtin("quarter_order").coefficient(1).real() == doctest::Approx(1.0 / 24.0));
  const EntireFunction g = make_builtin("gap_series", {{"c", "1"}});
  CHECK(g.coefficient(1).real() == doctest::Approx(1.0));
  CHECK(g.coefficient(4).real() == doctest::Approx(1.0 / 24.0));
  CHECK(g.coefficient(5).real() == 0.0);
  CHECK(g.next_nonzero(5) == 9);
  CHECK(make_builtin("sinh_plus_sq").coefficient(2).real() == doctest::Approx(1.0));
  const EntireFunction it = iterate_function(make_builtin("exp"), 2);
  CHECK_THROWS_WITH_AS(it.coefficient(0), "coefficients unavailable", FunctionError);
}

TEST_CASE("positivity flags") {
  for (const char* name : {"exp", "quarter_order"}) CHECK(make_builtin(name).positive_coefficients());
  CHECK(make_builtin("gap_series", {{"c", "2"}}).positive_coefficients());
  CHECK(make_builtin("power_gap", {{"p", "3"}, {"q", "2"}}).positive_coefficients());
  CHECK(make_builtin("cosh_sq").positive_coefficients());
  CHECK(make_builtin("sinh_plus_sq").positive_coefficients());
  CHECK_FALSE(make_random_signs(make_builtin("exp"), 3).positive_coefficients());
}

TEST_CASE("builtin parameter errors") {
  CHECK_THROWS_AS(make_builtin("nope"), FunctionError);
  CHECK_THROWS_AS(make_builtin("gap_series", {{"c", "0"}}), FunctionError);
  CHECK_THROWS_AS(make_builtin("gap_series", {{"c", "-1"}}), FunctionError);
  CHECK_THROWS_AS(make_builtin("power_gap", {{"p", "0"}, {"q", "2"}}), FunctionError);
  CHECK_THROWS_AS(make_builtin("power_gap", {{"p", "1"}}), FunctionError);
  CHECK_THROWS_AS(make_builtin("exp", {{"c", "1"}}), FunctionError);
}

TEST_CASE("series and evaluator agree on |z| = 1 and |z| = 10") {
  const std::vector<EntireFunction> fs = {
      make_builtin("exp"),
      make_builtin("cosh_sq"),
      make_builtin("quarter_order"),
      make_builtin("sinh_plus_sq"),
      make_builtin("gap_series", {{"c", "1"}}),
      make_builtin("power_gap", {{"p", "1"}, {"q", "2"}}),
      make_builtin("power_gap", {{"p", "3"}, {"q", "2"}}),
  };
  for (const EntireFunction& f : fs) {
    if (!f.has_coefficients()) continue;
    CoefficientRule rule{[&f](Index n) { return f.coefficient_term(n); },
                         [&f](Index n) { return f.next_nonzero(n); }};
    for (double r : {1.0, 10.0}) {
      for (int k = 0; k < 16; ++k) {
        const Complex z = std::polar(r, 2.0 * std::numbers::pi * (k + 0.37) / 16);
        const Complex direct = value(f, z);
        const Evaluation s = evaluate_series(rule, z);
        REQUIRE_FALSE(s.overflowed());
        INFO(f.describe(), " at ", z);
        // Error is measured against the term scale sum |a_n| r^n = f(r).
        const double scale = std::abs(value(f, r));
        CHECK(std::abs(s.value() - direct) / scale < 1e-9);
      }
    }
  }
}

TEST_CASE("positive builtins are real, positive and increasing on the axis") {
  const std::vector<EntireFunction> fs = {
      make_builtin("exp"),
      make_builtin("quarter_order"),
      make_builtin("gap_series", {{"c", "1"}}),
      make_builtin("power_gap", {{"p", "1"}, {"q", "2"}}),
  };
  for (const EntireFunction& f : fs) {
    double prev = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double r = std::pow(10.0, -1.0 + 3.0 * k / 49.0);
      const Complex v = value(f, r);
      INFO(f.describe(), " at r = ", r);
      CHECK(std::fabs(v.imag()) <= 1e-12 * v.real());
      CHECK(v.real() > 0.0);
      CHECK(v.real() > prev);
      prev = v.real();
    }
  }
}

TEST_CASE("quarter_order is the same for all four fourth roots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const EntireFunction f = make_builtin("quarter_order");
  for (int i = 0; i < 20; ++i) {
    const Complex z(u(rng), u(rng));
    const Complex w = std::pow(z, 0.25);
    const Complex fz = value(f, z);
    for (int k = 0; k < 4; ++k) {
      const Complex wk = w * std::pow(Complex(0.0, 1.0), k);
      const Complex closed = 0.5 * (std::cos(wk) + std::cosh(wk));
      CHECK(rel_err(closed, fz) < 1e-12);
    }
  }
}

TEST_CASE("make_series") {
  CoefficientRule exp_rule{[](Index n) { return Coefficient::from_log(-std::lgamma(n + 1.0)); }, {}};
  const EntireFunction e = make_series(exp_rule, true);
  CHECK(value(e, 1.0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(e.transcendental());

  CoefficientRule one{[](Index n) { return n == 0 ? Coefficient::from_value(1.0) : Coefficient::zero(); }, {}};
  const EntireFunction c = make_series(one, true);
  CHECK_FALSE(c.transcendental());
  CHECK(value(c, Complex(3.0, -4.0)) == Complex(1.0, 0.0));

  CoefficientRule neg{[](Index n) { return Coefficient::from_value(n == 3 ? -1.0 : 1.0 / std::tgamma(n + 1.0)); }, {}};
  CHECK_THROWS_AS(make_series(neg, true), FunctionError);

  CoefficientRule geometric{[](Index) { return Coefficient::from_value(1.0); }, {}};
  const EntireFunction g = make_series(geometric, true);
  CHECK_THROWS_AS(g.evaluate(2.0), SeriesDivergence);
}

TEST_CASE("random signs") {
  CHECK(sign_string(0) == "+-++-+++-+-+-----+-+----+--++---+++-+++++-+++--++++--++--+----++");
  CHECK(sign_string(1) == "+---++---+-+-+-++----++++++--+---+++-------+---++--+++-++-+---+-");
  CHECK(sign_string(42) == "--++++-+-+-++---++++--+--++---------+++-+-++--+++--+++++----++--");

  const EntireFunction base = make_builtin("exp");
  const EntireFunction a = make_random_signs(base, 42);
  const EntireFunction b = make_random_signs(base, 42);
  for (Index n = 0; n <= 1000; ++n) {
    CHECK(a.coefficient_term(n).sign == b.coefficient_term(n).sign);
    CHECK(a.coefficient_term(n).log_abs == base.coefficient_term(n).log_abs);
  }
  for (Index n = 0; n <= 1000000; n += 997) CHECK(random_sign(5, n) == random_sign(5, n));
  CHECK(sign_string(5) != sign_string(6));
  CHECK_FALSE(a.positive_coefficients());
  CHECK_THROWS_AS(make_random_signs(iterate_function(base, 2), 1), FunctionError);
}

TEST_CASE("iterates") {
  const EntireFunction e2 = iterate_function(make_builtin("exp"), 2);
  CHECK(value(e2, 0.0).real() == doctest::Approx(std::exp(1.0)));
  CHECK(e2.iterate_power() == 2);
  CHECK_FALSE(e2.has_coefficients());

  const EntireFunction c2 = iterate_function(make_builtin("cosh_sq"), 2);
  CHECK(value(c2, 1.0).real() == doctest::Approx(29.7527730839339).epsilon(1e-12));

  const EntireFunction f = make_builtin("sinh_plus_sq");
  const EntireFunction f1 = iterate_function(f, 1);
  for (int k = 0; k < 10; ++k) {
    const Complex z = std::polar(0.3 * (k + 1), 0.7 * k);
    CHECK(value(f1, z) == value(f, z));
  }
  CHECK(iterate_function(iterate_function(f, 2), 3).iterate_power() == 6);
  CHECK_THROWS_AS(iterate_function(f, 0), FunctionError);

  const Evaluation big = e2.evaluate(800.0);
  CHECK(big.overflowed());
}

TEST_CASE("overflow carries log modulus when derivable") {
  const Evaluation e = make_builtin("exp").evaluate(Complex(1000.0, 2.0));
  REQUIRE(e.overflowed());
  REQUIRE(e.log_modulus().has_value());
  CHECK(*e.log_modulus() == doctest::Approx(1000.0));
  const Evaluation c = make_builtin("cosh_sq").evaluate(Complex(400.0, 0.0));
  REQUIRE(c.overflowed());
  CHECK(*c.log_modulus() == doctest::Approx(800.0 - 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("function spec text and series tables") {
  const EntireFunction g = parse_function_spec("# zoo member\ngap_series\nparam.c = 2\n");
  CHECK(g.describe() == "gap_series(c=2)");
  CHECK_THROWS_AS(parse_function_spec("param.c = 2\n"), FunctionError);
  CHECK_THROWS_AS(parse_function_spec("gap_series\nc = 2\n"), FunctionError);

  const CoefficientRule t = read_series_table("0 1\n2 0.5\n4 exp(-3.17805383034795)\n");
  CHECK(t.at(2).value() == 0.5);
  CHECK(t.at(4).value() == doctest::Approx(1.0 / 24.0));
  CHECK(t.next_nonzero(1) == 2);
  CHECK(t.next_nonzero(5) == -1);
  CHECK_THROWS_AS(read_series_table("1\n"), FunctionError);
  CHECK_THROWS_AS(read_series_table("1.5 2\n"), FunctionError);
  CHECK_THROWS_AS(read_series_table("1 abc\n"), FunctionError);
}

TEST_CASE("make_function generic keys") {
  const EntireFunction f = make_function("exp", {{"seed", "3"}, {"iterate", "2"}});
  CHECK(f.iterate_power() == 2);
  CHECK_THROWS_AS(make_function("exp", {{"seed", "-1"}}), FunctionError);
  CHECK_THROWS_AS(make_function("exp", {{"iterate", "0"}}), FunctionError);
  CHECK_THROWS_AS(make_function("series", {}), FunctionError);
}
