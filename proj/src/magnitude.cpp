#include "fastesc/magnitude.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace fastesc {

Magnitude Magnitude::normalize(int depth, double mantissa) {
  if (std::isnan(mantissa)) throw MagnitudeError("magnitude: mantissa is NaN");
  if (depth < 0) throw MagnitudeError("magnitude: negative tower depth");
  if (depth == 0 && mantissa < 0.0) throw MagnitudeError("magnitude: negative denoted value");
  if (std::isinf(mantissa)) {
    if (mantissa < 0.0) return Magnitude(0, 0.0);  // exp(-inf) == 0 at depth >= 1
    throw MagnitudeError("magnitude: infinite mantissa");
  }
  // Lower: exp while the mantissa is too small for its depth.
  while (depth > 0 && mantissa < kLogTowerThreshold) {
    mantissa = std::exp(mantissa);
    --depth;
  }
  // Raise: log while the mantissa is too large.
  while (mantissa >= kTowerThreshold) {
    mantissa = std::log(mantissa);
    ++depth;
  }
  return Magnitude(depth, mantissa);
}

Magnitude Magnitude::from_log(double log_value) {
  if (std::isnan(log_value)) throw MagnitudeError("magnitude: log value is NaN");
  if (log_value == -INFINITY) return Magnitude(0, 0.0);
  return normalize(1, log_value);
}

std::optional<double> Magnitude::to_double() const {
  if (depth_ == 0) return mantissa_;
  return std::nullopt;
}

std::optional<double> Magnitude::log() const {
  if (depth_ == 0) return std::log(mantissa_);
  if (depth_ == 1) return mantissa_;
  return std::nullopt;
}

Magnitude Magnitude::log_magnitude() const {
  if (depth_ == 0) {
    if (mantissa_ < 1.0) throw MagnitudeError("magnitude: log of a value below 1");
    return Magnitude(0, std::log(mantissa_));
  }
  return normalize(depth_ - 1, mantissa_);
}

Magnitude Magnitude::scaled(double factor) const {
  if (!(factor >= 0.0) || std::isinf(factor)) throw MagnitudeError("magnitude: invalid scale factor");
  if (factor == 0.0 || mantissa_ == 0.0) return Magnitude(0, 0.0);
  if (depth_ == 0) {
    const double v = mantissa_ * factor;
    if (std::isfinite(v) && v < kTowerThreshold) return Magnitude(0, v);
    return from_log(std::log(mantissa_) + std::log(factor));
  }
  if (depth_ == 1) return from_log(mantissa_ + std::log(factor));
  // log(factor) is below double resolution relative to exp(mantissa).
  return *this;
}

Magnitude Magnitude::pow(double exponent) const {
  if (!(exponent > 0.0)) throw MagnitudeError("magnitude: pow needs a positive exponent");
  if (mantissa_ == 0.0 && depth_ == 0) return Magnitude(0, 0.0);
  if (depth_ == 0) return from_log(exponent * std::log(mantissa_));
  if (depth_ == 1) return from_log(exponent * mantissa_);
  if (depth_ == 2) return normalize(2, mantissa_ + std::log(exponent));
  return *this;
}

std::string Magnitude::to_string() const {
  char buf[64];
  if (depth_ == 0) {
    std::snprintf(buf, sizeof buf, "%.9g", mantissa_);
  } else {
    std::snprintf(buf, sizeof buf, "exp^%d(%.9g)", depth_, mantissa_);
  }
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Magnitude& m) { return os << m.to_string(); }

bool approx_geq(const Magnitude& a, const Magnitude& b, double rel_tol) {
  if (a.depth() != b.depth()) {
    // A depth-0 value within tolerance of the threshold may sit just below a
    // depth-1 value at ln T; compare those via logs with the same relative
    // tolerance on the values.
    if (a.depth() + b.depth() == 1) {
      return *a.log() >= *b.log() + std::log1p(-rel_tol) || a > b;
    }
    return a > b;
  }
  return a.mantissa() >= b.mantissa() * (1.0 - rel_tol);
}

}  // namespace fastesc
