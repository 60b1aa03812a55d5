#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fastesc/entire_function.hpp"
#include "fastesc/magnitude.hpp"

namespace fastesc {

/// Invalid radii, invalid R and refused (non-transcendental) inputs.
class GrowthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kDefaultCircleSamples = 256;
inline constexpr double kDefaultDelta = 0.01;

struct ModulusEstimate {
  Magnitude value;
  bool sampled = false;  // lower bound for M, upper bound for m
  double angle = 0.0;    // argument of the extremal point when sampled
};

/// M(r). Exact for closed forms and positive series, else sampled.
ModulusEstimate max_modulus(const EntireFunction& f, double r, int samples = kDefaultCircleSamples);
/// m(r) by circle sampling with golden-section refinement.
ModulusEstimate min_modulus(const EntireFunction& f, double r, int samples = kDefaultCircleSamples);

/// M applied to a Magnitude radius. Beyond depth 0 this needs log log M in
/// closed form or a tower order; returns nullopt when neither is known.
std::optional<Magnitude> max_modulus_at(const EntireFunction& f, const Magnitude& r,
                                        int samples = kDefaultCircleSamples);

/// log M(r) as a double when it is representable.
std::optional<double> log_max_modulus(const EntireFunction& f, double r, int samples = kDefaultCircleSamples);

/// Largest radius whose M(r) is still below kTowerThreshold.
double depth0_radius_limit(const EntireFunction& f);

struct SupTerm {
  Magnitude mu;
  Index central_index = 0;
};

/// mu(r) = sup |a_n| r^n and the largest index attaining it.
SupTerm series_sup_term(const EntireFunction& f, double r);

struct ThresholdLadder {
  double R = 0.0;
  std::vector<Magnitude> rungs;        // rungs[n] = M^n(R)
  std::optional<int> truncated_at;     // first n whose rung is unknown
  std::string function;
  int samples_used = 0;
  int convexity_violations = 0;        // log M(r^2) < 2 log M(r) among the spot-check radii

  int size() const { return static_cast<int>(rungs.size()); }
  /// Rung n, or nullopt past truncation.
  std::optional<Magnitude> rung(int n) const;
};

ThresholdLadder build_ladder(const EntireFunction& f, double R, int N, int samples = kDefaultCircleSamples);

/// Smallest R on the grid 1.05^k in [1, search_max] with M(r) > r at every
/// grid point from R onwards.
double find_min_R(const EntireFunction& f, double search_max = 1e8);

enum class Verdict { holds_empirically, fails, inconclusive };
std::string to_string(Verdict v);

struct OrderEstimate {
  double order = 0.0;          // regression estimate
  double lower_order = 0.0;    // regression along principal indices, clamped to [0, order]
  double order_raw = 0.0;      // max of n log n / log(1/|a_n|) over the window
  double lower_order_raw = 0.0;
  Index window_lo = 0;
  Index window_hi = 0;
  int hull_vertices = 0;
};

OrderEstimate order_estimate(const EntireFunction& f, Index n_max);

/// Slope of log log M(r) against log r over the dyadic radii 2^16..2^30.
std::optional<double> max_modulus_order(const EntireFunction& f);

struct GapAnalysis {
  Verdict fabry = Verdict::inconclusive;
  Verdict hayman = Verdict::inconclusive;
  double alpha = 0.0;
  std::vector<Index> exponents;       // n_k, k = 0..k_max
  std::vector<double> ratio_trace;    // n_k / k for k >= 1
};

GapAnalysis gap_analysis(const EntireFunction& f, int k_max, double alpha);

enum class ScanTest { convexity, ahr, small_growth, min_condition };
std::string to_string(ScanTest t);

struct ScanWitness {
  double r = 0.0;
  std::vector<std::pair<std::string, double>> values;
};

struct ScanResult {
  ScanTest test = ScanTest::convexity;
  double parameter = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<ScanWitness> violations;
  std::vector<ScanWitness> best;  // min_condition: best (rho, m(rho), M(r)) per radius
};

/// For ahr the range is in x = log r; for the other tests it is in r.
ScanResult growth_inequality_scan(const EntireFunction& f, ScanTest test, double parameter, double lo, double hi,
                                  int points, int samples = kDefaultCircleSamples);

struct RegularSequence {
  bool ok = false;
  std::vector<double> r;
  std::vector<Magnitude> max_values;  // M(r_n)
  std::optional<int> failed_level;
  std::string reason;
};

/// Backward greedy search for r_n > M^n(R)(1+delta) with M(r_n) >= r_{n+1}^m on
/// a geometric grid of ratio 1.02. floors[n], when given, raises the
/// lower end of the search at level n.
RegularSequence find_regular_sequence(const EntireFunction& f, const ThresholdLadder& ladder, double m, int depth,
                                      double delta = kDefaultDelta, const std::vector<double>& floors = {});

struct GrowthReport {
  std::string function;
  Index n_max = 0;
  OrderEstimate order;
  std::optional<double> max_modulus_order;
  GapAnalysis gaps;
  ScanResult ahr;
  ScanResult small_growth;
  ScanResult convexity;
  std::optional<double> min_R;
  std::vector<std::string> notes;
};

struct GrowthOptions {
  Index n_max = 2000;
  int k_max = 200;
  double alpha = 2.5;
  double ahr_c = 0.5;
  double ahr_lo = 2.0;
  double ahr_hi = 20.0;
  double small_m = 2.0;
  double convexity_c = 2.0;
  int points = 32;
  double search_max = 1e8;
};

GrowthReport analyze_growth(const EntireFunction& f, const GrowthOptions& options);

}  // namespace fastesc
