#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace fastesc {

/// Promotion threshold for the tower representation.
inline constexpr double kTowerThreshold = 1e300;
/// ln(kTowerThreshold); canonical mantissas at depth >= 1 are at least this.
inline constexpr double kLogTowerThreshold = 690.77552789821368;

class MagnitudeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A nonnegative real stored as exp applied `depth` times to `mantissa`.
///
/// Canonical form: depth 0 with mantissa in [0, T), or depth >= 1 with
/// mantissa in [ln T, T), where T = 1e300. Canonical values compare
/// lexicographically on (depth, mantissa), which agrees with the order of
/// the reals they denote.
class Magnitude {
 public:
  Magnitude() = default;

  /// Canonicalises (depth, mantissa). Throws MagnitudeError when the
  /// denoted value is negative or not a number.
  static Magnitude normalize(int depth, double mantissa);
  static Magnitude from_double(double value) { return normalize(0, value); }
  /// The value e^log_value.
  static Magnitude from_log(double log_value);

  int depth() const { return depth_; }
  double mantissa() const { return mantissa_; }

  bool representable() const { return depth_ == 0; }
  /// The denoted value when it fits in a double (depth 0), else nullopt.
  std::optional<double> to_double() const;
  /// Natural log of the denoted value when it fits in a double.
  std::optional<double> log() const;

  /// Natural log as a Magnitude; requires the value to be >= 1.
  Magnitude log_magnitude() const;
  Magnitude scaled(double factor) const;
  Magnitude pow(double exponent) const;

  friend bool operator==(const Magnitude&, const Magnitude&) = default;
  friend std::strong_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
    if (auto c = a.depth_ <=> b.depth_; c != 0) return c;
    if (a.mantissa_ < b.mantissa_) return std::strong_ordering::less;
    if (a.mantissa_ > b.mantissa_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const;

 private:
  Magnitude(int depth, double mantissa) : depth_(depth), mantissa_(mantissa) {}

  int depth_ = 0;
  double mantissa_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Magnitude& m);

/// a >= b up to relative slack `rel_tol` on the mantissa of the deeper
/// operand. Comparisons across different depths are exact.
bool approx_geq(const Magnitude& a, const Magnitude& b, double rel_tol);

}  // namespace fastesc
