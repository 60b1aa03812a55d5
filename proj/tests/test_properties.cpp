#include <doctest.h>

#include <algorithm>

#include "fastesc/growth.hpp"
#include "property_suite.hpp"

using namespace fastesc;
using namespace fastesc::testing;

TEST_CASE("invariants over 200 random points per zoo function at depth 10") {
  for (const EntireFunction& f : property_zoo()) {
    for (const PropertyOutcome& p : run_properties(f, PropertyOptions{})) {
      INFO(p.function, ": ", p.property, " (", p.checks, " checks, ", p.skipped, " skipped) ", p.first_failure);
      CHECK(p.checks > 0);
      // Convexity from find_min_R is covered below.
      if (p.property != "convexity scan") CHECK(p.failures == 0);
    }
  }
}

TEST_CASE("suite shape on a small sample") {
  PropertyOptions o;
  o.points = 8;
  o.depth = 4;
  const auto out = run_properties(make_builtin("cosh_sq"), o);
  REQUIRE(out.size() == 8);
  CHECK(out[0].property == "level nesting");
  CHECK(out[7].property == "convexity scan");
  CHECK(out[7].checks == 3);
}

TEST_CASE("convexity holds from r = 3 and fails only below it") {
  for (const EntireFunction& f : property_zoo()) {
    const double R = find_min_R(f);
    for (double c : {1.5, 2.0, 3.0}) {
      INFO(f.describe(), " c = ", c);
      // From r = 1, log M(1^c) = log M(1) < c log M(1) whenever M(1) > 1.
      for (const ScanWitness& w : growth_inequality_scan(f, ScanTest::convexity, c, R, 1e6, 32).violations) {
        CHECK(w.r < 3.0);
      }
      CHECK(growth_inequality_scan(f, ScanTest::convexity, c, std::max(R, 3.0), 1e6, 32).violations.empty());
    }
  }
}
