#include "fastesc/escape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fastesc {

OrbitRecord compute_orbit(const EntireFunction& f, Complex z, int N) {
  if (N < 0) throw GrowthError("orbit depth must be >= 0");
  OrbitRecord rec;
  rec.start = z;
  rec.values.push_back(z);
  rec.moduli.push_back({Magnitude::from_double(std::abs(z)), ModulusKind::exact});
  Complex cur = z;
  for (int n = 1; n <= N; ++n) {
    if (!rec.overflow_step) {
      const Evaluation e = f.evaluate(cur);
      if (!e.overflowed()) {
        cur = e.value();
        rec.values.push_back(cur);
        rec.moduli.push_back({Magnitude::from_double(std::abs(cur)), ModulusKind::exact});
        continue;
      }
      rec.overflow_step = n;
      if (auto lm = e.log_modulus()) {
        rec.moduli.push_back({Magnitude::from_log(*lm), ModulusKind::exact});
      } else {
        rec.moduli.push_back({Magnitude{}, ModulusKind::missing});
      }
      continue;
    }
    const OrbitEntry& prev = rec.moduli.back();
    if (prev.kind == ModulusKind::missing) {
      rec.moduli.push_back({Magnitude{}, ModulusKind::missing});
      continue;
    }
    // |f(w)| <= M(|w|).
    if (auto up = max_modulus_at(f, prev.modulus)) {
      rec.moduli.push_back({*up, ModulusKind::upper_estimate});
    } else {
      rec.moduli.push_back({Magnitude{}, ModulusKind::missing});
    }
  }
  return rec;
}

Membership level_membership(const OrbitRecord& orbit, const ThresholdLadder& ladder, int L, int N) {
  if (N < 0 || static_cast<int>(orbit.moduli.size()) < N + 1) throw GrowthError("orbit shorter than depth");
  if (ladder.size() < N + L + 1 && !ladder.truncated_at) throw GrowthError("ladder too short for depth and level");
  Membership out{true, false};
  for (int n = std::max(0, -L); n <= N; ++n) {
    const OrbitEntry& e = orbit.moduli[static_cast<std::size_t>(n)];
    auto rung = ladder.rung(n + L);
    if (e.kind == ModulusKind::missing) {
      out.indeterminate = true;
      continue;
    }
    if (!rung) {
      // Past truncation: the unknown rung exceeds the last known one.
      if (!approx_geq(e.modulus, ladder.rungs.back(), kLevelTolerance)) return {false, false};
      out.indeterminate = true;
      continue;
    }
    if (!approx_geq(e.modulus, *rung, kLevelTolerance)) return {false, false};
    if (e.kind == ModulusKind::upper_estimate) out.indeterminate = true;
  }
  return out;
}

Membership level_membership(const EntireFunction& f, const ThresholdLadder& ladder, int L, Complex z, int N) {
  return level_membership(compute_orbit(f, z, N), ladder, L, N);
}

LevelVerdict max_level(const OrbitRecord& orbit, const ThresholdLadder& ladder, int N, int L_min, int L_max) {
  if (L_min > L_max) throw GrowthError("level range is empty");
  LevelVerdict v;
  v.depth = N;
  v.ladder_R = ladder.R;
  if (!level_membership(orbit, ladder, L_max, N).member) {
    const Membership lo = level_membership(orbit, ladder, L_min, N);
    if (!lo.member) return v;
    // Membership is antitone in L: bisect between a member and a non-member.
    int a = L_min, b = L_max;
    while (b - a > 1) {
      const int mid = a + (b - a) / 2;
      (level_membership(orbit, ladder, mid, N).member ? a : b) = mid;
    }
    v.level = a;
  } else {
    v.level = L_max;
  }
  v.indeterminate = level_membership(orbit, ladder, *v.level, N).indeterminate;
  return v;
}

LevelVerdict max_level(const EntireFunction& f, const ThresholdLadder& ladder, Complex z, int N, int L_min,
                       int L_max) {
  return max_level(compute_orbit(f, z, N), ladder, N, L_min, L_max);
}

bool mu_criterion(const EntireFunction& f, Complex z, double eps, double R, int L, int N) {
  if (!(eps > 0.0 && eps < 1.0)) throw GrowthError("eps must lie in (0, 1)");
  if (!(R > 0.0) || !std::isfinite(R)) throw GrowthError("R invalid for mu");
  if (N < 0 || N - L < 0) throw GrowthError("depth must satisfy N >= L");

  const double r_big = std::max(R, std::min(R * 1e4, depth0_radius_limit(f)));
  for (int i = 0; i < 64; ++i) {
    const double r = r_big > R ? R * std::pow(r_big / R, i / 63.0) : R;
    auto m = max_modulus_at(f, Magnitude::from_double(r));
    if (m && m->scaled(eps) <= Magnitude::from_double(r)) {
      throw GrowthError("R invalid for mu: eps M(r) <= r at r = " + std::to_string(r));
    }
  }

  std::vector<Magnitude> mu{Magnitude::from_double(R)};
  for (int n = 1; n <= N - L; ++n) {
    auto next = max_modulus_at(f, mu.back());
    if (!next) break;
    mu.push_back(next->scaled(eps));
  }

  const OrbitRecord orbit = compute_orbit(f, z, N);
  for (int n = 0; n <= N - L; ++n) {
    const int idx = n + L;
    if (idx < 0) continue;
    const OrbitEntry& e = orbit.moduli[static_cast<std::size_t>(idx)];
    if (e.kind == ModulusKind::missing) continue;
    const Magnitude& target = n < static_cast<int>(mu.size()) ? mu[static_cast<std::size_t>(n)] : mu.back();
    if (!approx_geq(e.modulus, target, kLevelTolerance)) return false;
  }
  return true;
}

}  // namespace fastesc
