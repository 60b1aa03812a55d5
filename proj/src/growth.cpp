#include "fastesc/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fastesc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;
constexpr double kAngleTol = 1e-10;
constexpr double kCompareTol = 1e-9;

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw GrowthError("radius must be positive and finite");
}

void check_samples(int samples) {
  if (samples < 16) throw GrowthError("circle samples must be >= 16");
}

/// log|f(r e^{i theta})|; +inf when the evaluator overflows without a log.
double log_abs_on_circle(const EntireFunction& f, double r, double theta) {
  const Evaluation e = f.evaluate(std::polar(r, theta));
  if (auto lm = e.log_modulus()) return *lm;
  return INFINITY;
}

struct Extremum {
  double log_value;
  double angle;
};

/// Sampled extremum of g(theta) = log|f(r e^{i theta})| refined by golden
/// section around the best sample. sign = +1 maximises, -1 minimises.
Extremum circle_extremum(const EntireFunction& f, double r, int samples, double sign) {
  const double step = kTwoPi / samples;
  int best = 0;
  double best_val = -INFINITY;
  for (int j = 0; j < samples; ++j) {
    const double v = sign * log_abs_on_circle(f, r, step * j);
    if (v > best_val || j == 0) {
      best_val = v;
      best = j;
    }
  }
  Extremum out{sign * best_val, step * best};
  if (!std::isfinite(best_val)) return out;

  auto g = [&](double t) { return sign * log_abs_on_circle(f, r, t); };
  double a = step * (best - 1), b = step * (best + 1);
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > kAngleTol) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = g(d);
    }
  }
  const double t = 0.5 * (a + b);
  const double gt = g(t);
  if (gt > best_val) {
    double angle = std::fmod(t, kTwoPi);
    if (angle < 0.0) angle += kTwoPi;
    out = {sign * gt, angle};
  }
  return out;
}

Magnitude magnitude_from_log(double lm) {
  if (lm == -INFINITY) return Magnitude::from_double(0.0);
  if (lm < std::log(kTowerThreshold)) return Magnitude::from_double(std::exp(lm));
  return Magnitude::from_log(lm);
}

bool iterate_of_known(const EntireFunction& f) {
  return f.base() != nullptr && f.iterate_power() > 1 &&
         (f.base()->has_max_modulus_rule() || f.base()->positive_coefficients());
}

/// log log M(e^x) when derivable.
std::optional<double> log_log_max_modulus(const EntireFunction& f, double x) {
  if (const MaxModulusRule* rule = f.max_modulus_rule(); rule && rule->log_log_max_modulus) {
    return rule->log_log_max_modulus(x);
  }
  const double r = std::exp(x);
  if (std::isfinite(r)) {
    if (auto lm = log_max_modulus(f, r); lm && *lm > 0.0) return std::log(*lm);
    if (iterate_of_known(f)) {
      auto m = max_modulus_at(f, Magnitude::from_double(r));
      if (m && m->depth() >= 2) return m->depth() == 2 ? std::optional<double>(m->mantissa()) : std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = points == 1 ? lo : std::exp(a + (b - a) * i / (points - 1));
  }
  return out;
}

/// Least-squares slope of y on x.
std::optional<double> slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

Verdict scan_verdict(const std::vector<bool>& violated) {
  const std::size_t n = violated.size();
  if (std::none_of(violated.begin(), violated.end(), [](bool v) { return v; })) return Verdict::holds_empirically;
  bool upper_all = true;
  for (std::size_t i = n / 2; i < n; ++i) upper_all = upper_all && violated[i];
  return upper_all ? Verdict::fails : Verdict::inconclusive;
}

void require_transcendental(const EntireFunction& f) {
  if (!f.transcendental()) throw GrowthError("non-transcendental: " + f.describe());
}

}  // namespace

// --- modulus ---------------------------------------------------------------

ModulusEstimate max_modulus(const EntireFunction& f, double r, int samples) {
  check_radius(r);
  check_samples(samples);
  if (const MaxModulusRule* rule = f.max_modulus_rule()) {
    return {magnitude_from_log(rule->log_max_modulus(r)), false, 0.0};
  }
  if (iterate_of_known(f)) {
    auto m = max_modulus_at(f, Magnitude::from_double(r), samples);
    if (!m) throw GrowthError("unrepresentable radius");
    return {*m, false, 0.0};
  }
  if (f.positive_coefficients()) {
    const Evaluation e = f.evaluate({r, 0.0});
    if (!e.overflowed()) return {Magnitude::from_double(std::abs(e.value())), false, 0.0};
    if (auto lm = e.log_modulus()) return {Magnitude::from_log(*lm), false, 0.0};
    throw GrowthError("unrepresentable radius");
  }
  const Extremum ex = circle_extremum(f, r, samples, 1.0);
  if (!std::isfinite(ex.log_value)) throw GrowthError("unrepresentable radius");
  return {magnitude_from_log(ex.log_value), true, ex.angle};
}

ModulusEstimate min_modulus(const EntireFunction& f, double r, int samples) {
  check_radius(r);
  check_samples(samples);
  const Extremum ex = circle_extremum(f, r, samples, -1.0);
  if (ex.log_value == INFINITY) throw GrowthError("unrepresentable radius");
  return {magnitude_from_log(ex.log_value), true, ex.angle};
}

std::optional<Magnitude> max_modulus_at(const EntireFunction& f, const Magnitude& r, int samples) {
  if (iterate_of_known(f)) {
    // M(r, f^m) = M^m(r, f) for a base with nonnegative coefficients.
    std::optional<Magnitude> v = r;
    for (int i = 0; i < f.iterate_power() && v; ++i) v = max_modulus_at(*f.base(), *v, samples);
    return v;
  }
  if (r.depth() == 0) {
    if (r.mantissa() == 0.0) {
      const Evaluation e = f.evaluate({0.0, 0.0});
      if (e.overflowed()) return std::nullopt;
      return Magnitude::from_double(std::abs(e.value()));
    }
    try {
      return max_modulus(f, r.mantissa(), samples).value;
    } catch (const GrowthError&) {
      return std::nullopt;
    }
  }
  const MaxModulusRule* rule = f.max_modulus_rule();
  if (!rule) return std::nullopt;
  if (r.depth() == 1) {
    if (!rule->log_log_max_modulus) return std::nullopt;
    return Magnitude::normalize(2, rule->log_log_max_modulus(r.mantissa()));
  }
  if (!(rule->tower_order > 0.0)) return std::nullopt;
  // log log M(r) ~ rho log r; deeper than depth 2 the factor rho is below
  // double resolution.
  if (r.depth() == 2) return Magnitude::normalize(3, r.mantissa() + std::log(rule->tower_order));
  return Magnitude::normalize(r.depth() + 1, r.mantissa());
}

std::optional<double> log_max_modulus(const EntireFunction& f, double r, int samples) {
  check_radius(r);
  if (const MaxModulusRule* rule = f.max_modulus_rule()) return rule->log_max_modulus(r);
  std::optional<Magnitude> m;
  try {
    m = max_modulus(f, r, samples).value;
  } catch (const GrowthError&) {
    return std::nullopt;
  }
  return m->log();
}

double depth0_radius_limit(const EntireFunction& f) {
  auto ok = [&](double x) {
    const double r = std::exp(x);
    try {
      auto lm = log_max_modulus(f, r);
      return lm.has_value() && *lm < kLogTowerThreshold;
    } catch (const std::exception&) {
      return false;
    }
  };
  const double x_cap = std::log(1e299);
  double lo = -10.0;
  if (!ok(lo)) return std::exp(lo);
  // Walk up in log r first: probes far past the limit are the costly ones.
  double hi = 1.0;
  while (ok(hi)) {
    lo = hi;
    if (hi >= x_cap) return 1e299;
    hi = std::min(2.0 * hi, x_cap);
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return std::exp(lo);
}

SupTerm series_sup_term(const EntireFunction& f, double r) {
  check_radius(r);
  if (!f.has_coefficients()) throw FunctionError("coefficients unavailable");
  const double log_r = std::log(r);
  double best = -INFINITY;
  Index best_n = 0;
  int since_max = 0;
  Index scanned = 0;
  for (Index n = f.next_nonzero(0); n >= 0; n = f.next_nonzero(n + 1)) {
    const Coefficient a = f.coefficient_term(n);
    if (a.is_zero()) continue;
    const double lt = a.log_abs + static_cast<double>(n) * log_r;
    if (lt >= best - 1e-13 * std::max(1.0, std::fabs(best))) {
      if (lt > best) best = lt;
      best_n = n;
      since_max = 0;
    } else if (++since_max >= 50) {
      break;
    }
    if (++scanned > (Index{1} << 24)) throw SeriesDivergence("series not entire at working precision");
  }
  return {magnitude_from_log(best), best_n};
}

// --- ladder ----------------------------------------------------------------

std::optional<Magnitude> ThresholdLadder::rung(int n) const {
  if (n < 0 || n >= size()) return std::nullopt;
  return rungs[static_cast<std::size_t>(n)];
}

ThresholdLadder build_ladder(const EntireFunction& f, double R, int N, int samples) {
  if (!(R > 0.0) || !std::isfinite(R)) throw GrowthError("R invalid: must be positive");
  if (N < 0) throw GrowthError("ladder length must be >= 0");
  check_samples(samples);

  ThresholdLadder ladder;
  ladder.R = R;
  ladder.function = f.describe();
  ladder.samples_used = samples;

  const double limit = depth0_radius_limit(f);
  const double r_big = std::max(R, std::min(R * 1e4, limit));
  for (double r : log_spaced(R, r_big, r_big > R ? 64 : 1)) {
    auto m = max_modulus_at(f, Magnitude::from_double(r), samples);
    if (m && *m <= Magnitude::from_double(r)) {
      throw GrowthError("R invalid: M(r) <= r at r = " + std::to_string(r));
    }
    if (r * r <= limit) {
      auto a = log_max_modulus(f, r * r, samples);
      auto b = log_max_modulus(f, r, samples);
      if (a && b && *a < 2.0 * *b - kCompareTol * std::fabs(*b)) ++ladder.convexity_violations;
    }
  }

  ladder.rungs.push_back(Magnitude::from_double(R));
  // Without a log-space rule, the rung that leaves depth-0 range is unknown.
  const bool sampled_only = !f.max_modulus_rule() && !iterate_of_known(f);
  for (int n = 1; n <= N; ++n) {
    const Magnitude& last = ladder.rungs.back();
    if (sampled_only && (last.depth() > 0 || last.mantissa() > limit)) {
      ladder.truncated_at = n;
      break;
    }
    auto next = max_modulus_at(f, last, samples);
    if (!next) {
      ladder.truncated_at = n;
      break;
    }
    if (*next <= ladder.rungs.back()) throw GrowthError("R invalid: ladder stopped increasing at n = " + std::to_string(n));
    ladder.rungs.push_back(*next);
  }
  return ladder;
}

double find_min_R(const EntireFunction& f, double search_max) {
  if (!(search_max > 1.0)) throw GrowthError("search_max must be > 1");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double r = std::pow(1.05, k);
    if (r > search_max) break;
    grid.push_back(r);
  }
  int last_fail = -1;
  for (int k = 0; k < static_cast<int>(grid.size()); ++k) {
    auto m = max_modulus_at(f, Magnitude::from_double(grid[static_cast<std::size_t>(k)]));
    if (m && *m <= Magnitude::from_double(grid[static_cast<std::size_t>(k)])) last_fail = k;
  }
  if (last_fail + 1 >= static_cast<int>(grid.size())) throw GrowthError("no valid R found below search_max");
  return grid[static_cast<std::size_t>(last_fail + 1)];
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_empirically: return "holds-empirically";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

// --- order -------------------------------------------------------------------

OrderEstimate order_estimate(const EntireFunction& f, Index n_max) {
  if (n_max < 100) throw GrowthError("n_max must be >= 100");
  if (!f.has_coefficients()) throw FunctionError("coefficients unavailable");

  std::vector<Index> ns;
  std::vector<double> ls;  // log 1/|a_n|
  for (Index n = f.next_nonzero(0); n >= 0 && n <= n_max; n = f.next_nonzero(n + 1)) {
    const Coefficient a = f.coefficient_term(n);
    if (a.is_zero()) continue;
    ns.push_back(n);
    ls.push_back(-a.log_abs);
  }
  if (ns.size() < 10) throw GrowthError("fewer than 10 nonzero coefficients below n_max");

  OrderEstimate out;
  out.window_lo = n_max / 2;
  out.window_hi = n_max;

  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] >= out.window_lo && ns[i] >= 2 && ls[i] > 0.0) window.push_back(i);
  }
  if (window.size() < 3) {
    window.clear();
    for (std::size_t i = ns.size(); i-- > 0 && window.size() < 3;) {
      if (ns[i] >= 2 && ls[i] > 0.0) window.insert(window.begin(), i);
    }
  }
  std::vector<double> x, y;
  for (std::size_t i : window) {
    const double n = static_cast<double>(ns[i]);
    out.order_raw = std::max(out.order_raw, n * std::log(n) / ls[i]);
    x.push_back(std::log(n));
    y.push_back(ls[i] / n);
  }
  const auto s = slope(x, y);
  out.order = (s && *s > 0.0) ? 1.0 / *s : INFINITY;

  // Lower convex hull of (n, log 1/|a_n|).
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (static_cast<double>(ns[b] - ns[a])) * (ls[i] - ls[a]) -
                           (ls[b] - ls[a]) * static_cast<double>(ns[i] - ns[a]);
      if (cross <= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  out.hull_vertices = static_cast<int>(hull.size());

  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (previous vertex, vertex)
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const std::size_t prev = hull[k - 1], cur = hull[k];
    if (ns[prev] >= 2 && ls[cur] > 0.0 && ns[cur] >= out.window_lo) pairs.emplace_back(prev, cur);
  }
  if (pairs.size() < 3) {
    pairs.clear();
    for (std::size_t k = hull.size(); k-- > 1 && pairs.size() < 3;) {
      const std::size_t prev = hull[k - 1], cur = hull[k];
      if (ns[prev] >= 2 && ls[cur] > 0.0) pairs.insert(pairs.begin(), {prev, cur});
    }
  }
  x.clear();
  y.clear();
  out.lower_order_raw = INFINITY;
  for (auto [prev, cur] : pairs) {
    const double n = static_cast<double>(ns[cur]);
    const double lp = std::log(static_cast<double>(ns[prev]));
    out.lower_order_raw = std::min(out.lower_order_raw, n * lp / ls[cur]);
    x.push_back(lp);
    y.push_back(ls[cur] / n);
  }
  const auto ls_slope = slope(x, y);
  out.lower_order = (ls_slope && *ls_slope > 0.0) ? 1.0 / *ls_slope : out.order;
  out.lower_order = std::clamp(out.lower_order, 0.0, out.order);
  if (!std::isfinite(out.lower_order_raw)) out.lower_order_raw = out.order_raw;
  out.lower_order_raw = std::clamp(out.lower_order_raw, 0.0, out.order_raw);
  return out;
}

std::optional<double> max_modulus_order(const EntireFunction& f) {
  std::vector<double> x, y;
  for (int k = 16; k <= 30; ++k) {
    const double lr = k * std::numbers::ln2;
    if (auto v = log_log_max_modulus(f, lr)) {
      x.push_back(lr);
      y.push_back(*v);
    }
  }
  return slope(x, y);
}

// --- gaps ----------------------------------------------------------------------

GapAnalysis gap_analysis(const EntireFunction& f, int k_max, double alpha) {
  if (!f.has_coefficients()) throw FunctionError("coefficients unavailable");
  if (!(alpha > 2.0)) throw GrowthError("Hayman check needs alpha > 2");
  if (k_max < 2) throw GrowthError("k_max must be >= 2");
  GapAnalysis out;
  out.alpha = alpha;
  for (Index n = f.next_nonzero(0); n >= 0 && static_cast<int>(out.exponents.size()) <= k_max;
       n = f.next_nonzero(n + 1)) {
    if (!f.coefficient_term(n).is_zero()) out.exponents.push_back(n);
  }
  for (std::size_t k = 1; k < out.exponents.size(); ++k) {
    out.ratio_trace.push_back(static_cast<double>(out.exponents[k]) / static_cast<double>(k));
  }
  const std::size_t t = out.ratio_trace.size();
  if (t >= 4) {
    bool increasing = true;
    for (std::size_t i = t / 2 + 1; i < t; ++i) increasing = increasing && out.ratio_trace[i] >= out.ratio_trace[i - 1];
    const double last = out.ratio_trace.back();
    const double mid = out.ratio_trace[t / 2];
    if (increasing && last > 10.0) out.fabry = Verdict::holds_empirically;
    else if (last <= 10.0 && last < 1.25 * mid) out.fabry = Verdict::fails;
  }

  const std::size_t k0 = 10;
  if (out.exponents.size() > k0 + 1) {
    std::vector<bool> holds;
    for (std::size_t k = k0; k < out.exponents.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double bound = kk * std::log(kk) * std::pow(std::log(std::log(kk)), alpha);
      holds.push_back(static_cast<double>(out.exponents[k]) > bound);
    }
    const bool all = std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
    bool tail_none = true;
    for (std::size_t i = holds.size() / 2; i < holds.size(); ++i) tail_none = tail_none && !holds[i];
    out.hayman = all ? Verdict::holds_empirically : (tail_none ? Verdict::fails : Verdict::inconclusive);
  }
  return out;
}

// --- inequality scans ------------------------------------------------------------

std::string to_string(ScanTest t) {
  switch (t) {
    case ScanTest::convexity: return "convexity";
    case ScanTest::ahr: return "ahr";
    case ScanTest::small_growth: return "small_growth";
    case ScanTest::min_condition: return "min_condition";
  }
  return "convexity";
}

ScanResult growth_inequality_scan(const EntireFunction& f, ScanTest test, double parameter, double lo, double hi,
                                  int points, int samples) {
  if (points < 16) throw GrowthError("scan needs >= 16 points");
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw GrowthError("scan range must satisfy 0 < lo < hi");
  ScanResult out;
  out.test = test;
  out.parameter = parameter;
  out.lo = lo;
  out.hi = hi;
  out.points = points;
  std::vector<bool> violated;

  switch (test) {
    case ScanTest::convexity: {
      if (!(parameter > 1.0)) throw GrowthError("convexity needs c > 1");
      for (double r : log_spaced(lo, hi, points)) {
        const double rc = std::pow(r, parameter);
        std::optional<double> lhs, rhs;
        bool bad = false;
        if (rc < kTowerThreshold) {
          lhs = log_max_modulus(f, rc, samples);
          rhs = log_max_modulus(f, r, samples);
          if (!lhs || !rhs) throw GrowthError("convexity scan radius outside depth-0 range");
          *rhs *= parameter;
          bad = *lhs < *rhs - kCompareTol * std::fabs(*rhs);
        } else {
          // Compare log of both sides.
          lhs = log_log_max_modulus(f, parameter * std::log(r));
          auto base = log_log_max_modulus(f, std::log(r));
          if (!lhs || !base) throw GrowthError("convexity scan radius outside depth-0 range");
          rhs = std::log(parameter) + *base;
          bad = *lhs < *rhs - kCompareTol * std::fabs(*rhs);
        }
        violated.push_back(bad);
        if (bad) out.violations.push_back({r, {{"lhs", *lhs}, {"rhs", *rhs}}});
      }
      break;
    }
    case ScanTest::ahr: {
      constexpr double h = 1e-3;
      for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        auto a = log_log_max_modulus(f, x + h);
        auto b = log_log_max_modulus(f, x - h);
        if (!a || !b) throw GrowthError("ahr scan point outside the computable range");
        const double ratio = (*a - *b) / (2.0 * h);  // phi'/phi = (log phi)'
        const double bound = (1.0 + parameter) / x;
        const bool bad = ratio < bound;
        violated.push_back(bad);
        if (bad) out.violations.push_back({std::exp(x), {{"x", x}, {"phi_ratio", ratio}, {"bound", bound}}});
      }
      break;
    }
    case ScanTest::small_growth: {
      const int m = static_cast<int>(std::lround(parameter));
      if (m < 1) throw GrowthError("small_growth needs m >= 1");
      for (double r : log_spaced(lo, hi, points)) {
        double lm = std::log(r);
        bool defined = true;
        for (int i = 0; i < m; ++i) {
          if (!(lm > 0.0)) {
            defined = false;
            break;
          }
          if (i + 1 < m) lm = std::log(lm);
        }
        // lm is now log^m r (m-fold iterated log).
        auto llm = log_log_max_modulus(f, std::log(r));
        if (!llm) throw GrowthError("small_growth scan radius outside the computable range");
        const double bound = defined && lm > 0.0 ? std::log(r) / lm : INFINITY;
        const bool bad = !(*llm < bound);
        violated.push_back(bad);
        if (bad) out.violations.push_back({r, {{"log_log_M", *llm}, {"bound", bound}}});
      }
      break;
    }
    case ScanTest::min_condition: {
      if (!(parameter > 1.0)) throw GrowthError("min_condition needs m > 1");
      const double limit = depth0_radius_limit(f);
      for (double r : log_spaced(lo, hi, points)) {
        const Magnitude big = max_modulus(f, r, samples).value;
        const double top = std::min(std::pow(r, parameter), limit);
        std::optional<Magnitude> best;
        double best_rho = 0.0;
        if (top > r) {
          const double a = std::log(r), b = std::log(top);
          for (int j = 1; j <= 64; ++j) {
            const double rho = std::exp(a + (b - a) * j / 65.0);
            const Magnitude mm = min_modulus(f, rho, samples).value;
            if (!best || mm > *best) {
              best = mm;
              best_rho = rho;
            }
          }
        }
        const bool bad = !best || !approx_geq(*best, big, kCompareTol);
        violated.push_back(bad);
        ScanWitness w{r, {{"rho", best_rho},
                          {"log_m_rho", best ? best->log().value_or(INFINITY) : -INFINITY},
                          {"log_M_r", big.log().value_or(INFINITY)}}};
        out.best.push_back(w);
        if (bad) out.violations.push_back(w);
      }
      break;
    }
  }
  out.verdict = scan_verdict(violated);
  return out;
}

// --- regular growth ------------------------------------------------------------

RegularSequence find_regular_sequence(const EntireFunction& f, const ThresholdLadder& ladder, double m, int depth,
                                      double delta, const std::vector<double>& floors) {
  require_transcendental(f);
  if (!(m > 1.0)) throw GrowthError("regular growth needs m > 1");
  if (depth < 1) throw GrowthError("depth must be >= 1");
  if (ladder.size() < depth + 1) throw GrowthError("ladder truncated before depth");

  constexpr double ratio = 1.02;
  const double limit = depth0_radius_limit(f);
  RegularSequence out;
  out.r.assign(static_cast<std::size_t>(depth + 1), 0.0);
  out.max_values.assign(static_cast<std::size_t>(depth + 1), Magnitude{});

  auto lower_at = [&](int n) -> std::optional<double> {
    const Magnitude& rung = ladder.rungs[static_cast<std::size_t>(n)];
    if (rung.depth() != 0) return std::nullopt;
    double lo = rung.mantissa() * (1.0 + delta);
    if (static_cast<std::size_t>(n) < floors.size()) lo = std::max(lo, floors[static_cast<std::size_t>(n)]);
    if (lo > limit) return std::nullopt;
    return lo;
  };
  auto fail = [&](int n, std::string why) {
    out.ok = false;
    out.failed_level = n;
    out.reason = std::move(why);
    return out;
  };

  auto top = lower_at(depth);
  if (!top) return fail(depth, "no radius within depth-0 range above M^n(R)");
  out.r[static_cast<std::size_t>(depth)] = *top;
  out.max_values[static_cast<std::size_t>(depth)] = max_modulus(f, *top).value;

  for (int n = depth - 1; n >= 0; --n) {
    auto lo = lower_at(n);
    if (!lo) return fail(n, "no radius within depth-0 range above M^n(R)");
    const Magnitude target = Magnitude::from_double(out.r[static_cast<std::size_t>(n + 1)]).pow(m);
    auto meets = [&](long j) { return max_modulus(f, *lo * std::pow(ratio, static_cast<double>(j))).value >= target; };
    const long j_max = static_cast<long>(std::floor(std::log(limit / *lo) / std::log(ratio)));
    if (j_max < 0 || !meets(j_max)) return fail(n, "no radius within depth-0 range with M(r_n) >= r_{n+1}^m");
    long a = -1, b = j_max;  // meets(b) holds
    while (b - a > 1) {
      const long mid = (a + b) / 2;
      (meets(mid) ? b : a) = mid;
    }
    const double r = *lo * std::pow(ratio, static_cast<double>(b));
    out.r[static_cast<std::size_t>(n)] = r;
    out.max_values[static_cast<std::size_t>(n)] = max_modulus(f, r).value;
  }
  out.ok = true;
  return out;
}

// --- report --------------------------------------------------------------------

GrowthReport analyze_growth(const EntireFunction& f, const GrowthOptions& options) {
  GrowthReport rep;
  rep.function = f.describe();
  rep.n_max = options.n_max;
  rep.notes.push_back("verdicts are empirical over finite windows; exceptional sets of finite logarithmic measure are not detectable");
  if (!f.transcendental()) rep.notes.push_back("function is flagged non-transcendental");

  if (f.has_coefficients()) {
    try {
      rep.order = order_estimate(f, options.n_max);
    } catch (const std::exception& e) {
      rep.notes.push_back(std::string("order: ") + e.what());
    }
    try {
      rep.gaps = gap_analysis(f, options.k_max, options.alpha);
    } catch (const std::exception& e) {
      rep.notes.push_back(std::string("gaps: ") + e.what());
    }
  } else {
    rep.notes.push_back("coefficients unavailable: order and gap analysis skipped");
  }
  rep.max_modulus_order = max_modulus_order(f);

  try {
    rep.min_R = find_min_R(f, options.search_max);
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("min_R: ") + e.what());
  }
  try {
    rep.ahr = growth_inequality_scan(f, ScanTest::ahr, options.ahr_c, options.ahr_lo, options.ahr_hi, options.points);
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("ahr: ") + e.what());
  }
  try {
    rep.small_growth = growth_inequality_scan(f, ScanTest::small_growth, options.small_m, 1e2, 1e8, options.points);
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("small_growth: ") + e.what());
  }
  try {
    const double lo = rep.min_R.value_or(1.0);
    rep.convexity = growth_inequality_scan(f, ScanTest::convexity, options.convexity_c, lo, std::max(lo * 10.0, 1e6),
                                           options.points);
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("convexity: ") + e.what());
  }
  return rep;
}

}  // namespace fastesc
