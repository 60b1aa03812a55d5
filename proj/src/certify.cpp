#include "fastesc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastesc {

namespace {

constexpr double kE = std::numbers::e;

std::vector<double> window_grid(double lo, double hi, int points, bool include_lo) {
  std::vector<double> out;
  const double a = std::log(lo), b = std::log(hi);
  for (int j = include_lo ? 0 : 1; j <= (include_lo ? points - 1 : points); ++j) {
    const double t = include_lo ? static_cast<double>(j) / (points - 1) : static_cast<double>(j) / (points + 1);
    out.push_back(std::exp(a + (b - a) * t));
  }
  return out;
}

WebCertificate blank(const EntireFunction& f, const std::string& method, double R, int depth, int samples,
                     double delta) {
  if (!f.transcendental()) throw GrowthError("non-transcendental: " + f.describe());
  if (depth < 1) throw GrowthError("certificate depth must be >= 1");
  if (!(delta >= 0.0)) throw GrowthError("delta must be >= 0");
  WebCertificate c;
  c.method = method;
  c.function = f.describe();
  c.R = R;
  c.requested_depth = depth;
  c.samples = samples;
  c.delta = delta;
  c.f = std::make_shared<const EntireFunction>(f);
  return c;
}

WebCertificate& fail(WebCertificate& c, int level, std::string reason) {
  c.status = CertificateStatus::failed;
  c.failed_at = level;
  c.reason = std::move(reason);
  return c;
}

}  // namespace

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::certified: return "certified";
    case CertificateStatus::failed: return "failed";
    case CertificateStatus::truncated: return "truncated";
  }
  return "failed";
}

WebCertificate certify_disc_sequence(const EntireFunction& f, double R, int depth, int samples, double delta) {
  WebCertificate cert = blank(f, "disc_sequence", R, depth, samples, delta);
  const ThresholdLadder ladder = build_ladder(f, R, depth + 1, samples);
  const double limit = depth0_radius_limit(f);

  struct Window {
    double lo, hi;
    std::vector<double> grid;
    std::vector<Magnitude> m;
  };
  auto window_at = [&](int n) -> std::optional<Window> {
    auto rung = ladder.rung(n);
    if (!rung || rung->depth() != 0) return std::nullopt;
    const double base = rung->mantissa();
    Window w;
    w.lo = base * (1.0 + delta);
    w.hi = std::min(std::pow(std::max(base, kE), kDiscWindowPower), limit);
    if (!(w.lo < w.hi)) return std::nullopt;
    w.grid = window_grid(w.lo, w.hi, kDiscGridPoints, true);
    for (double rho : w.grid) w.m.push_back(min_modulus(f, rho, samples).value);
    return w;
  };

  // Forward pass: every level must admit some rho with m(rho) above the
  // next threshold.
  std::vector<Window> windows;
  int n = 0;
  for (; n <= depth; ++n) {
    auto w = window_at(n);
    if (!w) {
      cert.truncated_at = n;
      break;
    }
    windows.push_back(std::move(*w));
    if (n == depth) break;
    const Magnitude best = *std::max_element(windows.back().m.begin(), windows.back().m.end());
    auto next = ladder.rung(n + 1);
    if (!next) {
      cert.truncated_at = n + 1;
      break;
    }
    if (best <= next->scaled(1.0 + delta)) {
      for (int k = 0; k <= n + 1 && k < ladder.size(); ++k) cert.thresholds.push_back(ladder.rungs[static_cast<std::size_t>(k)]);
      return fail(cert, n, "min-modulus ceiling");
    }
  }
  const int d = static_cast<int>(windows.size()) - 1;
  for (int k = 0; k <= std::max(d, 0) && k < ladder.size(); ++k) cert.thresholds.push_back(ladder.rungs[static_cast<std::size_t>(k)]);
  if (d < 0) {
    cert.status = CertificateStatus::truncated;
    cert.reason = "no search window within depth-0 range";
    return cert;
  }

  // Backward pass: the minimal chain, rho_d first.
  std::vector<double> rho(static_cast<std::size_t>(d + 1));
  std::vector<Magnitude> mv(static_cast<std::size_t>(d + 1));
  rho[static_cast<std::size_t>(d)] = windows[static_cast<std::size_t>(d)].grid.front();
  mv[static_cast<std::size_t>(d)] = windows[static_cast<std::size_t>(d)].m.front();
  for (int k = d - 1; k >= 0; --k) {
    const Window& w = windows[static_cast<std::size_t>(k)];
    const double next = rho[static_cast<std::size_t>(k + 1)];
    const Magnitude need = Magnitude::from_double(next).scaled(1.0 + delta);
    bool found = false;
    for (std::size_t j = 0; j < w.grid.size() && w.grid[j] < next; ++j) {
      if (w.m[j] >= need) {
        rho[static_cast<std::size_t>(k)] = w.grid[j];
        mv[static_cast<std::size_t>(k)] = w.m[j];
        found = true;
        break;
      }
    }
    if (!found) return fail(cert, k, "min-modulus ceiling");
  }
  cert.rho = std::move(rho);
  cert.m_values = std::move(mv);
  if (d >= std::min(depth, 2)) {
    cert.status = CertificateStatus::certified;
  } else {
    cert.status = CertificateStatus::truncated;
    cert.reason = "chain shorter than 2 within depth-0 range";
  }
  return cert;
}

WebCertificate certify_regular_growth(const EntireFunction& f, double R, double m, int depth, int samples,
                                      double delta) {
  WebCertificate cert = blank(f, "regular_growth", R, depth, samples, delta);
  if (!(m > 1.0)) throw GrowthError("regular growth needs m > 1");
  cert.m_exponent = m;
  const ThresholdLadder ladder = build_ladder(f, R, depth, samples);
  if (ladder.size() < depth + 1) {
    cert.status = CertificateStatus::truncated;
    cert.truncated_at = ladder.truncated_at;
    cert.reason = "ladder truncated before depth";
    return cert;
  }
  for (const Magnitude& g : ladder.rungs) cert.thresholds.push_back(g);
  const double limit = depth0_radius_limit(f);

  std::vector<double> floors(static_cast<std::size_t>(depth + 1), 0.0);
  std::vector<int> bumps(static_cast<std::size_t>(depth + 1), 0);
  int clause_a_level = -1;
  for (int attempt = 0; attempt < 2000; ++attempt) {
    const RegularSequence seq = find_regular_sequence(f, ladder, m, depth, delta, floors);
    if (!seq.ok) {
      if (clause_a_level >= 0) {
        return fail(cert, clause_a_level, "clause (a): no rho in (r_n, r_n^m) with m(rho) >= M(r_n) within depth-0 range");
      }
      return fail(cert, seq.failed_level.value_or(0), "clause (b): " + seq.reason);
    }
    // Forward assembly: rho_n in (max(r_n, rho_{n-1}), r_n^m/(1+delta)),
    // with m(rho_n) >= M(r_n) for n < depth.
    std::vector<double> rho;
    std::vector<Magnitude> mv;
    int bad = -1;
    for (int n = 0; n <= depth; ++n) {
      const double rn = seq.r[static_cast<std::size_t>(n)];
      const double lo = rho.empty() ? rn : std::max(rn, rho.back());
      const double hi = std::min(std::pow(rn, m) / (1.0 + delta), limit);
      if (!(lo < hi)) {
        bad = n;
        break;
      }
      bool found = false;
      for (double p : window_grid(lo, hi, kMinSearchPoints, false)) {
        const Magnitude mm = min_modulus(f, p, samples).value;
        if (n == depth || mm >= seq.max_values[static_cast<std::size_t>(n)]) {
          rho.push_back(p);
          mv.push_back(mm);
          found = true;
          break;
        }
      }
      if (!found) {
        bad = n;
        break;
      }
    }
    if (bad < 0) {
      cert.rho = std::move(rho);
      cert.m_values = std::move(mv);
      cert.regular_r = seq.r;
      cert.regular_M = seq.max_values;
      cert.status = CertificateStatus::certified;
      return cert;
    }
    // Clause (a) failed at r_bad: push that level's floor upwards and retry.
    clause_a_level = bad;
    const std::size_t b = static_cast<std::size_t>(bad);
    floors[b] = seq.r[b] * std::pow(1.02, 1 << std::min(bumps[b], 20));
    ++bumps[b];
  }
  return fail(cert, std::max(clause_a_level, 0), "clause (a): retry limit reached");
}

bool verify_certificate(const WebCertificate& cert, int oversample) {
  if (cert.status != CertificateStatus::certified || !cert.f || oversample < 1) return false;
  const std::size_t d = cert.rho.size();
  if (d < 2 || cert.thresholds.size() < d) return false;
  try {
    const int samples = cert.samples * oversample;
    std::vector<Magnitude> m;
    for (std::size_t n = 0; n < d; ++n) {
      if (n > 0 && !(cert.rho[n] > cert.rho[n - 1])) return false;
      if (!(Magnitude::from_double(cert.rho[n]) > cert.thresholds[n])) return false;
    }
    for (std::size_t n = 0; n + 1 < d; ++n) {
      const Magnitude mm = min_modulus(*cert.f, cert.rho[n], samples).value;
      if (!(mm >= Magnitude::from_double(cert.rho[n + 1]).scaled(1.0 + cert.delta))) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace fastesc
