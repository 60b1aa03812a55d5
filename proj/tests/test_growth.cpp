#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "fastesc/growth.hpp"

using namespace fastesc;

namespace {

double d(const Magnitude& m) { return m.to_double().value(); }

// e^{-z} as a signed series: no closed form, so M is sampled.
EntireFunction exp_minus() {
  CoefficientRule rule{[](Index n) { return Coefficient::from_log(-std::lgamma(n + 1.0), n % 2 == 0 ? 1 : -1); }, {}};
  return make_series(rule, false, "exp_minus");
}

}  // namespace

TEST_CASE("max_modulus") {
  CHECK(d(max_modulus(make_builtin("exp"), 1.0).value) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  const ModulusEstimate c = max_modulus(make_builtin("cosh_sq"), 1.0);
  CHECK_FALSE(c.sampled);
  CHECK(d(c.value) == doctest::Approx(2.38109784554182).epsilon(1e-13));
  CHECK(d(max_modulus(make_builtin("quarter_order"), 1.0).value) == doctest::Approx(1.04169147034169).epsilon(1e-13));

  const ModulusEstimate sp = max_modulus(make_builtin("sinh_plus_sq"), 10.0);
  CHECK_FALSE(sp.sampled);
  CHECK(d(sp.value) == doctest::Approx(std::sinh(10.0) + 100.0).epsilon(1e-12));

  // Sampled: the maximum of |e^{-z}| on |z| = 10 is at z = -10.
  const ModulusEstimate s = max_modulus(exp_minus(), 10.0);
  CHECK(s.sampled);
  CHECK(d(s.value) == doctest::Approx(std::exp(10.0)).epsilon(1e-10));
  CHECK(std::cos(s.angle) == doctest::Approx(-1.0).epsilon(1e-9));

  const ModulusEstimate big = max_modulus(make_builtin("exp"), 1000.0);
  CHECK(big.value.depth() == 1);
  CHECK(big.value.mantissa() == doctest::Approx(1000.0));

  CHECK_THROWS_AS(max_modulus(make_builtin("exp"), 0.0), GrowthError);
  CHECK_THROWS_AS(max_modulus(make_builtin("exp"), -1.0), GrowthError);
  CHECK_THROWS_AS(max_modulus(exp_minus(), 2.0, 8), GrowthError);
}

TEST_CASE("min_modulus") {
  const ModulusEstimate e = min_modulus(make_builtin("exp"), 2.0);
  CHECK(e.sampled);
  CHECK(d(e.value) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  CHECK(d(min_modulus(make_builtin("cosh_sq"), std::numbers::pi / 2).value) < 1e-9);
  CHECK(d(min_modulus(make_builtin("cosh_sq"), 2.0).value) <= 1.0);
  CHECK_THROWS_AS(min_modulus(make_builtin("exp"), 0.0), GrowthError);
}

TEST_CASE("max_modulus_at on towers") {
  const EntireFunction e = make_builtin("exp");
  const auto m = max_modulus_at(e, Magnitude::from_log(1000.0));
  REQUIRE(m.has_value());
  CHECK(m->depth() == 2);
  CHECK(m->mantissa() == doctest::Approx(1000.0));
  CHECK(max_modulus_at(make_builtin("sinh_plus_sq"), Magnitude::from_log(1000.0)).has_value());
  CHECK_FALSE(max_modulus_at(exp_minus(), Magnitude::from_log(1000.0)).has_value());
}

TEST_CASE("series_sup_term") {
  const SupTerm a = series_sup_term(make_builtin("exp"), 1.0);
  CHECK(d(a.mu) == doctest::Approx(1.0));
  CHECK(a.central_index == 1);
  const SupTerm b = series_sup_term(make_builtin("exp"), 10.0);
  CHECK(d(b.mu) == doctest::Approx(2755.73192239859).epsilon(1e-12));
  CHECK(b.central_index == 10);
  const SupTerm g = series_sup_term(make_builtin("gap_series", {{"c", "1"}}), 2.0);
  CHECK(d(g.mu) == doctest::Approx(2.0));
  CHECK(g.central_index == 1);
  CHECK_THROWS_AS(series_sup_term(iterate_function(make_builtin("exp"), 2), 2.0), FunctionError);
}

TEST_CASE("build_ladder examples") {
  const ThresholdLadder e = build_ladder(make_builtin("exp"), 1.0, 3);
  REQUIRE(e.size() == 4);
  CHECK(d(e.rungs[0]) == 1.0);
  CHECK(d(e.rungs[1]) == doctest::Approx(2.71828182845905).epsilon(1e-13));
  CHECK(d(e.rungs[2]) == doctest::Approx(15.1542622414793).epsilon(1e-13));
  CHECK(d(e.rungs[3]) == doctest::Approx(3814279.10476022).epsilon(1e-12));

  const ThresholdLadder c = build_ladder(make_builtin("cosh_sq"), 1.0, 2);
  CHECK(d(c.rungs[1]) == doctest::Approx(2.38109784554182).epsilon(1e-13));
  CHECK(d(c.rungs[2]) == doctest::Approx(29.7527730839339).epsilon(1e-12));

  const ThresholdLadder h = build_ladder(make_builtin("exp"), 0.5, 1);
  CHECK(d(h.rungs[1]) == doctest::Approx(1.64872127070013).epsilon(1e-13));

  CHECK_THROWS_AS(build_ladder(make_builtin("quarter_order"), 100.0, 2), GrowthError);
  CHECK_THROWS_AS(build_ladder(make_builtin("exp"), 0.0, 2), GrowthError);
}

TEST_CASE("ladders enter the tower and truncate when M is unknown there") {
  const ThresholdLadder e = build_ladder(make_builtin("exp"), 1.0, 8);
  CHECK(e.size() == 9);
  CHECK_FALSE(e.truncated_at.has_value());
  CHECK(e.rungs[4].depth() == 1);
  CHECK(e.rungs[4].mantissa() == doctest::Approx(3814279.10476022).epsilon(1e-12));
  for (int n = 0; n < 8; ++n) CHECK(e.rungs[n] < e.rungs[n + 1]);

  const ThresholdLadder s = build_ladder(exp_minus(), 1.0, 8);
  REQUIRE(s.truncated_at.has_value());
  CHECK(*s.truncated_at == 4);
  CHECK(d(s.rungs[3]) == doctest::Approx(3814279.10476022).epsilon(1e-9));
  CHECK(s.size() == *s.truncated_at);
  CHECK_FALSE(s.rung(*s.truncated_at).has_value());
  CHECK(s.rung(0).has_value());
}

TEST_CASE("find_min_R") {
  CHECK(find_min_R(make_builtin("exp")) == 1.0);
  CHECK(find_min_R(make_builtin("cosh_sq")) == 1.0);
  // Smallest 1.05^k above the crossing r = 14456.6179 of M(r) = r.
  const double q = find_min_R(make_builtin("quarter_order"));
  CHECK(q == doctest::Approx(14937.981483779402).epsilon(1e-12));
  CHECK(q >= 1.2e4);
  CHECK(q <= 2e4);
  CHECK_THROWS_WITH_AS(find_min_R(make_builtin("quarter_order"), 1e3), "no valid R found below search_max", GrowthError);
}

TEST_CASE("order estimates") {
  const auto t0 = std::chrono::steady_clock::now();
  const OrderEstimate q = order_estimate(make_builtin("quarter_order"), 2000);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
  CHECK(q.order == doctest::Approx(0.25).epsilon(0.03 / 0.25));
  CHECK(q.window_lo == 1000);
  CHECK(q.window_hi == 2000);
  CHECK(q.lower_order >= 0.0);
  CHECK(q.lower_order <= q.order);

  CHECK(order_estimate(make_builtin("exp"), 2000).order == doctest::Approx(1.0).epsilon(0.02));
  CHECK(order_estimate(make_builtin("power_gap", {{"p", "1"}, {"q", "2"}}), 2000).order ==
        doctest::Approx(0.5).epsilon(0.05));
  const OrderEstimate g2 = order_estimate(make_builtin("gap_series", {{"c", "2"}}), 4000);
  CHECK(std::abs(g2.order - 4.0) <= 0.25);
  CHECK(std::abs(g2.lower_order - 4.0) <= 0.25);

  CHECK_THROWS_AS(order_estimate(make_builtin("exp"), 50), GrowthError);
  CHECK_THROWS_AS(order_estimate(iterate_function(make_builtin("exp"), 2), 2000), FunctionError);
}

TEST_CASE("coefficient and maximum-modulus orders agree") {
  for (const char* name : {"exp", "cosh_sq", "quarter_order"}) {
    const EntireFunction f = make_builtin(name);
    const auto mm = max_modulus_order(f);
    REQUIRE(mm.has_value());
    INFO(name);
    CHECK(std::abs(order_estimate(f, 2000).order - *mm) <= 0.05);
  }
}

TEST_CASE("gap analysis") {
  const GapAnalysis g = gap_analysis(make_builtin("gap_series", {{"c", "1"}}), 200, 2.5);
  CHECK(g.fabry == Verdict::holds_empirically);
  CHECK(g.exponents[3] == 9);
  CHECK(g.ratio_trace.back() == doctest::Approx(200.0));
  CHECK(gap_analysis(make_builtin("exp"), 200, 2.5).fabry == Verdict::fails);
  CHECK(gap_analysis(make_builtin("power_gap", {{"p", "1"}, {"q", "2"}}), 200, 2.5).fabry == Verdict::fails);
  CHECK_THROWS_AS(gap_analysis(make_builtin("exp"), 200, 2.0), GrowthError);
}

TEST_CASE("growth inequality scans") {
  const EntireFunction e = make_builtin("exp");
  const ScanResult c = growth_inequality_scan(e, ScanTest::convexity, 2.0, 2.0, 50.0, 32);
  CHECK(c.verdict == Verdict::holds_empirically);
  CHECK(c.violations.empty());
  const ScanResult a = growth_inequality_scan(e, ScanTest::ahr, 0.5, 2.0, 20.0, 32);
  CHECK(a.verdict == Verdict::holds_empirically);
  const ScanResult m =
      growth_inequality_scan(make_builtin("quarter_order"), ScanTest::min_condition, 3.0, 1e4, 1e6, 16);
  CHECK(m.verdict == Verdict::holds_empirically);
  CHECK(m.best.size() == 16);
  // exp is bounded on the negative axis, so m(rho) >= M(r) never holds.
  const ScanResult me = growth_inequality_scan(e, ScanTest::min_condition, 2.0, 2.0, 20.0, 16);
  CHECK(me.verdict == Verdict::fails);
  CHECK_FALSE(me.violations.empty());
  CHECK_THROWS_AS(growth_inequality_scan(e, ScanTest::convexity, 2.0, 2.0, 50.0, 8), GrowthError);
  CHECK_THROWS_AS(growth_inequality_scan(e, ScanTest::convexity, 1.0, 2.0, 50.0, 32), GrowthError);
}

TEST_CASE("regular sequences") {
  const EntireFunction e = make_builtin("exp");
  const RegularSequence s = find_regular_sequence(e, build_ladder(e, 1.0, 4), 2.0, 2);
  REQUIRE(s.ok);
  REQUIRE(s.r.size() == 3);
  const ThresholdLadder ladder = build_ladder(e, 1.0, 4);
  for (int n = 0; n < 3; ++n) CHECK(s.r[n] > d(ladder.rungs[n]));
  for (int n = 0; n < 2; ++n) CHECK(std::exp(s.r[n]) >= s.r[n + 1] * s.r[n + 1]);

  const EntireFunction g = make_builtin("gap_series", {{"c", "1"}});
  const double R = find_min_R(g);
  CHECK(find_regular_sequence(g, build_ladder(g, R, 4), 2.0, 2).ok);

  CoefficientRule poly{[](Index n) { return n <= 2 ? Coefficient::from_value(1.0) : Coefficient::zero(); }, {}};
  const EntireFunction p = make_series(poly, true);
  CHECK_THROWS_WITH_AS(find_regular_sequence(p, build_ladder(p, 2.0, 3), 2.0, 2), doctest::Contains("non-transcendental"),
                       GrowthError);
}

TEST_CASE("analyze_growth report") {
  GrowthOptions o;
  const GrowthReport r = analyze_growth(make_builtin("gap_series", {{"c", "1"}}), o);
  CHECK(r.order.order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r.order.lower_order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(r.gaps.fabry == Verdict::holds_empirically);
  CHECK(r.min_R.has_value());
  // For exp-like growth the inequality starts near r = c^{1/(c-1)}; at r = 1 it is false.
  for (const ScanWitness& w : r.convexity.violations) CHECK(w.r < 3.0);
}
