#pragma once

#include <optional>
#include <vector>

#include "fastesc/entire_function.hpp"
#include "fastesc/growth.hpp"
#include "fastesc/magnitude.hpp"

namespace fastesc {

/// Relative slack for orbit-versus-rung comparisons; absorbs rounding at
/// boundary cases such as |f^n(z)| = M^n(R) on the positive axis.
inline constexpr double kLevelTolerance = 1e-10;

enum class ModulusKind {
  exact,           // |f^n(z)| from the value or from the evaluator's log modulus
  upper_estimate,  // propagated through M once the orbit left double range
  missing,         // unknown
};

struct OrbitEntry {
  Magnitude modulus;
  ModulusKind kind = ModulusKind::exact;
};

struct OrbitRecord {
  Complex start;
  std::vector<Complex> values;      // f^n(z) while representable
  std::vector<OrbitEntry> moduli;   // length N+1
  std::optional<int> overflow_step;
};

OrbitRecord compute_orbit(const EntireFunction& f, Complex z, int N);

struct Membership {
  bool member = false;
  bool indeterminate = false;
};

/// Depth-N test of |f^n(z)| >= M^{n+L}(R) for 0 <= n <= N with n + L >= 0.
Membership level_membership(const OrbitRecord& orbit, const ThresholdLadder& ladder, int L, int N);
Membership level_membership(const EntireFunction& f, const ThresholdLadder& ladder, int L, Complex z, int N);

struct LevelVerdict {
  std::optional<int> level;
  int depth = 0;
  bool indeterminate = false;
  double ladder_R = 0.0;
};

inline constexpr int kDefaultLevelMin = -8;
inline constexpr int kDefaultLevelMax = 8;

LevelVerdict max_level(const OrbitRecord& orbit, const ThresholdLadder& ladder, int N, int L_min, int L_max);
LevelVerdict max_level(const EntireFunction& f, const ThresholdLadder& ladder, Complex z, int N,
                       int L_min = kDefaultLevelMin, int L_max = kDefaultLevelMax);

/// |f^{n+L}(z)| >= mu^n(R) for 0 <= n <= N - L with mu(r) = eps M(r).
bool mu_criterion(const EntireFunction& f, Complex z, double eps, double R, int L, int N);

}  // namespace fastesc
