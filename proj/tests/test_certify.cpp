#include <doctest.h>

#include <cmath>

#include "fastesc/certify.hpp"

using namespace fastesc;

namespace {

const WebCertificate& quarter_cert() {
  static const WebCertificate c = [] {
    const EntireFunction f = make_builtin("quarter_order");
    return certify_disc_sequence(f, find_min_R(f), 6);
  }();
  return c;
}

}  // namespace

TEST_CASE("disc certificate for the order-1/4 function") {
  const WebCertificate& c = quarter_cert();
  REQUIRE(c.status == CertificateStatus::certified);
  CHECK(c.depth() >= 3);
  CHECK(c.method == "disc_sequence");
  for (int n = 0; n < c.depth(); ++n) {
    CHECK(c.rho[n] < c.rho[n + 1]);
    CHECK(Magnitude::from_double(c.rho[n]) > c.thresholds[n]);
    CHECK(c.m_values[n] >= Magnitude::from_double(c.rho[n + 1]).scaled(1.0 + c.delta));
  }
  CHECK(verify_certificate(c, 8));
}

TEST_CASE("verification rejects tampered certificates") {
  WebCertificate bad = quarter_cert();
  std::swap(bad.rho[0], bad.rho[1]);
  CHECK_FALSE(verify_certificate(bad, 2));

  WebCertificate inflated = quarter_cert();
  inflated.rho[1] = inflated.rho[1] * 1e6;
  inflated.rho[2] = inflated.rho[1] * 2.0;
  CHECK_FALSE(verify_certificate(inflated, 2));

  WebCertificate below = quarter_cert();
  below.rho[0] = 2.0;
  CHECK_FALSE(verify_certificate(below, 2));

  WebCertificate failed = quarter_cert();
  failed.status = CertificateStatus::failed;
  CHECK_FALSE(verify_certificate(failed, 2));
}

TEST_CASE("disc certificate negatives are deterministic") {
  for (const char* name : {"exp", "cosh_sq"}) {
    const EntireFunction f = make_builtin(name);
    const WebCertificate first = certify_disc_sequence(f, 1.0, 4);
    INFO(name);
    CHECK(first.status == CertificateStatus::failed);
    CHECK(first.reason == "min-modulus ceiling");
    REQUIRE(first.failed_at.has_value());
    CHECK(*first.failed_at == 0);
    const WebCertificate again = certify_disc_sequence(f, 1.0, 4);
    CHECK(again.reason == first.reason);
    CHECK(again.failed_at == first.failed_at);
    CHECK_FALSE(verify_certificate(first, 1));
  }
}

TEST_CASE("regular growth certificate for the c = 1 gap series") {
  const EntireFunction g = make_builtin("gap_series", {{"c", "1"}});
  const WebCertificate c = certify_regular_growth(g, find_min_R(g), 2.0, 2);
  REQUIRE(c.status == CertificateStatus::certified);
  CHECK(c.depth() >= 2);
  CHECK(c.regular_r.size() == 3);
  for (int n = 0; n < 2; ++n) {
    const Magnitude Mr = c.regular_M[n];
    CHECK(Mr >= Magnitude::from_double(c.regular_r[n + 1]).pow(2.0));
    CHECK(c.rho[n] > c.regular_r[n]);
    CHECK(c.m_values[n] >= Mr);
  }
  CHECK(verify_certificate(c, 8));
}

TEST_CASE("regular growth fails clause (a) for exp") {
  const WebCertificate c = certify_regular_growth(make_builtin("exp"), 1.0, 2.0, 2);
  CHECK(c.status == CertificateStatus::failed);
  CHECK(c.reason.rfind("clause (a)", 0) == 0);
}

TEST_CASE("certifiers refuse bad input") {
  CoefficientRule poly{[](Index n) { return n <= 3 ? Coefficient::from_value(1.0) : Coefficient::zero(); }, {}};
  const EntireFunction p = make_series(poly, true);
  CHECK_THROWS_WITH_AS(certify_disc_sequence(p, 2.0, 3), doctest::Contains("non-transcendental"), GrowthError);
  CHECK_THROWS_AS(certify_regular_growth(p, 2.0, 2.0, 3), GrowthError);
  CHECK_THROWS_AS(certify_disc_sequence(make_builtin("exp"), 1.0, 0), GrowthError);
  CHECK_THROWS_AS(certify_regular_growth(make_builtin("exp"), 1.0, 1.0, 2), GrowthError);
}

TEST_CASE("status names") {
  CHECK(to_string(CertificateStatus::certified) == "certified");
  CHECK(to_string(CertificateStatus::failed) == "failed");
  CHECK(to_string(CertificateStatus::truncated) == "truncated");
}
