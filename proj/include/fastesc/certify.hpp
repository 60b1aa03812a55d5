#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fastesc/entire_function.hpp"
#include "fastesc/growth.hpp"
#include "fastesc/magnitude.hpp"

namespace fastesc {

inline constexpr int kDiscGridPoints = 128;
inline constexpr int kMinSearchPoints = 64;
inline constexpr double kDiscWindowPower = 4.0;  // search window (r, r^4)

enum class CertificateStatus { certified, failed, truncated };
std::string to_string(CertificateStatus s);

/// rho_0..rho_d with m(rho_n) >= rho_{n+1}(1+delta), or a structured failure.
/// Certificates are numerical evidence: m(rho_n) is a sampled upper estimate
/// of the minimum modulus.
struct WebCertificate {
  std::string method;  // "disc_sequence" or "regular_growth"
  std::string function;
  double R = 0.0;
  int requested_depth = 0;
  std::vector<double> rho;
  std::vector<Magnitude> m_values;     // sampled m(rho_n)
  std::vector<Magnitude> thresholds;   // M^n(R)
  int samples = 0;
  double delta = 0.0;
  CertificateStatus status = CertificateStatus::failed;
  std::string reason;
  std::optional<int> failed_at;
  std::optional<int> truncated_at;     // first level whose search window left depth-0 range

  // Regular-growth route only.
  double m_exponent = 0.0;
  std::vector<double> regular_r;
  std::vector<Magnitude> regular_M;

  std::shared_ptr<const EntireFunction> f;

  int depth() const { return rho.empty() ? 0 : static_cast<int>(rho.size()) - 1; }
};

WebCertificate certify_disc_sequence(const EntireFunction& f, double R, int depth,
                                     int samples = kDefaultCircleSamples, double delta = kDefaultDelta);

WebCertificate certify_regular_growth(const EntireFunction& f, double R, double m, int depth,
                                      int samples = kDefaultCircleSamples, double delta = kDefaultDelta);

/// Re-checks a certified certificate with oversample x the circle samples.
bool verify_certificate(const WebCertificate& cert, int oversample);

}  // namespace fastesc
