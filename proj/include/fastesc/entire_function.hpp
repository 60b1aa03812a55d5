#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace fastesc {

using Complex = std::complex<double>;
using Index = std::int64_t;

class FunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a user series stops decaying before the index cap.
class SeriesDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result of evaluating f(z): either a finite value below kTowerThreshold in
/// modulus, or an overflow tag carrying log|f(z)| when the evaluator can
/// derive it.
class Evaluation {
 public:
  static Evaluation finite(Complex v) { return Evaluation(v, false, std::nullopt); }
  static Evaluation overflow(std::optional<double> log_modulus) {
    return Evaluation(Complex{}, true, log_modulus);
  }

  bool overflowed() const { return overflow_; }
  /// Only meaningful when !overflowed().
  Complex value() const { return value_; }
  /// log|f(z)|: exact for finite values, the tagged value (if any) on overflow.
  std::optional<double> log_modulus() const;

 private:
  Evaluation(Complex v, bool of, std::optional<double> lm) : value_(v), overflow_(of), log_mod_(lm) {}

  Complex value_;
  bool overflow_ = false;
  std::optional<double> log_mod_;
};

/// A real Taylor coefficient in sign/log-modulus form, so that tiny values
/// such as 1/(4000)! stay usable.
struct Coefficient {
  double log_abs = -INFINITY;  // -inf encodes a zero coefficient
  int sign = 0;

  bool is_zero() const { return sign == 0; }
  double value() const;
  static Coefficient zero() { return {}; }
  static Coefficient from_log(double log_abs, int sign = 1) { return {log_abs, sign}; }
  static Coefficient from_value(double v);
};

struct CoefficientRule {
  std::function<Coefficient(Index)> at;
  /// Smallest index >= n with a nonzero coefficient, or -1 when none exists.
  std::function<Index(Index)> next_nonzero;
};

/// Closed-form access to log M(r) for functions where it is known.
struct MaxModulusRule {
  /// log M(r) for representable r > 0.
  std::function<double(double)> log_max_modulus;
  /// log log M(e^x) for x = log r up to kTowerThreshold; empty when unknown.
  std::function<double(double)> log_log_max_modulus;
  /// log log M(r) ~ tower_order * log r as r -> infinity (0 when unknown).
  double tower_order = 0.0;
};

/// An entire function together with whatever structural information is
/// available about it. Values are immutable and cheap to copy.
class EntireFunction {
 public:
  struct Parts {
    std::string name;
    std::map<std::string, std::string> params;
    std::function<Evaluation(Complex)> evaluate;
    std::optional<CoefficientRule> coefficients;
    bool positive_coefficients = false;
    bool transcendental = true;
    std::optional<MaxModulusRule> max_modulus;
    int iterate_power = 1;
    std::shared_ptr<const EntireFunction> base;  // set for iterates
  };

  explicit EntireFunction(Parts parts);

  const std::string& name() const { return parts_->name; }
  const std::map<std::string, std::string>& params() const { return parts_->params; }
  bool has_coefficients() const { return parts_->coefficients.has_value(); }
  bool positive_coefficients() const { return parts_->positive_coefficients; }
  bool transcendental() const { return parts_->transcendental; }
  bool has_max_modulus_rule() const { return parts_->max_modulus.has_value(); }
  const MaxModulusRule* max_modulus_rule() const {
    return parts_->max_modulus ? &*parts_->max_modulus : nullptr;
  }
  int iterate_power() const { return parts_->iterate_power; }
  /// The function this one iterates (nullptr for a base function).
  const EntireFunction* base() const { return parts_->base.get(); }

  Evaluation evaluate(Complex z) const { return parts_->evaluate(z); }

  /// a_n as stored; throws FunctionError("coefficients unavailable") for
  /// opaque evaluators.
  Coefficient coefficient_term(Index n) const;
  Complex coefficient(Index n) const { return {coefficient_term(n).value(), 0.0}; }
  Index next_nonzero(Index n) const;

  /// Human-readable spec, e.g. "gap_series(c=1)".
  std::string describe() const;

 private:
  std::shared_ptr<const Parts> parts_;
};

/// Adaptive truncated power-series evaluation with overflow tagging.
Evaluation evaluate_series(const CoefficientRule& rule, Complex z);

/// Parameters for make_builtin, as text (the function spec format) or numbers.
using ParamRecord = std::map<std::string, std::string>;

/// Builtins: exp, cosh_sq, quarter_order, sinh_plus_sq, gap_series(c),
/// power_gap(p, q).
EntireFunction make_builtin(const std::string& name, const ParamRecord& params = {});

/// A user series. Polynomials (finitely many nonzero terms) are accepted but
/// flagged non-transcendental.
EntireFunction make_series(CoefficientRule rule, bool positive, std::string name = "series");

/// Sign for index n from the splitmix64 finaliser keyed by seed.
int random_sign(std::uint64_t seed, Index n);

/// Coefficients eps_n a_n with eps_n = random_sign(seed, n).
EntireFunction make_random_signs(const EntireFunction& base, std::uint64_t seed);

/// The m-fold composition of f.
EntireFunction iterate_function(const EntireFunction& f, int m);

/// make_builtin plus the generic keys: `seed` (random signs), `iterate`
/// (composition power) and, for name `series`, `file` (a series table).
EntireFunction make_function(const std::string& name, ParamRecord params);

/// Parses the function spec text format: a `name` line followed by
/// `param.<key> = <value>` lines; `#` starts a comment.
EntireFunction parse_function_spec(const std::string& text);

/// Reads `<n> <a_n>` lines into a coefficient rule; a_n may be written as
/// `exp(x)` or `-exp(x)` for coefficients below double range.
CoefficientRule read_series_table(const std::string& text);

}  // namespace fastesc
