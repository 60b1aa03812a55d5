#include "fastesc/entire_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fastesc/magnitude.hpp"
#include "text_util.hpp"

namespace fastesc {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;
// Nonzero terms summed before a user series is declared divergent.
constexpr Index kSeriesTermCap = Index{1} << 22;
// Consecutive zero coefficients past the peak that end a summation.
constexpr Index kZeroRunCap = 4096;
// Indices probed when deciding whether a user rule is a polynomial.
constexpr Index kPolynomialProbe = Index{1} << 14;

/// sum_i exp(w_i) in scaled form: returns (S, P) with sum = e^S * P.
struct ScaledSum {
  double scale = -INFINITY;
  Complex partial{0.0, 0.0};

  double log_modulus() const { return scale + std::log(std::abs(partial)); }
};

ScaledSum exp_sum(std::initializer_list<Complex> exponents) {
  ScaledSum s;
  for (const Complex& w : exponents) s.scale = std::max(s.scale, w.real());
  for (const Complex& w : exponents) s.partial += std::exp(w - s.scale);
  return s;
}

Evaluation from_scaled(const ScaledSum& s) {
  const double lm = s.log_modulus();
  if (lm < kLogTowerThreshold) {
    if (s.partial == Complex{}) return Evaluation::finite({0.0, 0.0});
    return Evaluation::finite(std::polar(std::exp(lm), std::arg(s.partial)));
  }
  return Evaluation::overflow(lm);
}

Evaluation checked(Complex v) {
  if (std::isfinite(v.real()) && std::isfinite(v.imag()) && std::abs(v) < kTowerThreshold) {
    return Evaluation::finite(v);
  }
  return Evaluation::overflow(std::nullopt);
}

double log_gamma_int(Index n) { return std::lgamma(static_cast<double>(n) + 1.0); }

CoefficientRule dense_rule(std::function<Coefficient(Index)> at) {
  return {std::move(at), [](Index n) { return n; }};
}

double parse_param(const ParamRecord& params, const std::string& key, double fallback, bool required) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (required) throw FunctionError("missing parameter '" + key + "'");
    return fallback;
  }
  auto v = detail::parse_double(it->second);
  if (!v) throw FunctionError("parameter '" + key + "' is not a number: " + it->second);
  return *v;
}

void reject_unknown(const ParamRecord& params, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw FunctionError("unknown parameter '" + k + "'");
  }
}

// --- exp ---------------------------------------------------------------

EntireFunction make_exp() {
  EntireFunction::Parts p;
  p.name = "exp";
  p.evaluate = [](Complex z) {
    if (z.real() < kLogTowerThreshold) return Evaluation::finite(std::exp(z));
    return Evaluation::overflow(z.real());
  };
  p.coefficients = dense_rule([](Index n) { return Coefficient::from_log(-log_gamma_int(n)); });
  p.positive_coefficients = true;
  p.max_modulus = MaxModulusRule{
      [](double r) { return r; },
      [](double x) { return x; },
      1.0,
  };
  return EntireFunction(std::move(p));
}

// --- cosh^2 --------------------------------------------------------------

double log_cosh_real(double r) {
  r = std::fabs(r);
  return r - kLn2 + std::log1p(std::exp(-2.0 * r));
}

EntireFunction make_cosh_sq() {
  EntireFunction::Parts p;
  p.name = "cosh_sq";
  p.evaluate = [](Complex z) {
    if (std::fabs(z.real()) < 340.0) {
      const Complex c = std::cosh(z);
      return Evaluation::finite(c * c);
    }
    // cosh^2 z = (e^{2z} + 2 + e^{-2z}) / 4
    return from_scaled(exp_sum({2.0 * z - 2.0 * kLn2, Complex{-kLn2, 0.0}, -2.0 * z - 2.0 * kLn2}));
  };
  p.coefficients = CoefficientRule{
      [](Index n) {
        if (n == 0) return Coefficient::from_log(0.0);
        if (n % 2 != 0) return Coefficient::zero();
        return Coefficient::from_log(static_cast<double>(n - 1) * kLn2 - log_gamma_int(n));
      },
      [](Index n) { return n <= 0 ? 0 : n + (n % 2); },
  };
  p.positive_coefficients = true;
  p.max_modulus = MaxModulusRule{
      [](double r) { return 2.0 * log_cosh_real(r); },
      [](double x) {
        if (x < 700.0) return std::log(2.0 * log_cosh_real(std::exp(x)));
        return x + kLn2;
      },
      1.0,
  };
  return EntireFunction(std::move(p));
}

// --- sinh z + z^2 ----------------------------------------------------------

EntireFunction make_sinh_plus_sq() {
  EntireFunction::Parts p;
  p.name = "sinh_plus_sq";
  p.evaluate = [](Complex z) {
    if (std::fabs(z.real()) < 680.0 && std::abs(z) < 1e100) return checked(std::sinh(z) + z * z);
    if (z == Complex{}) return Evaluation::finite({});
    // sinh z + z^2 = e^{z}/2 - e^{-z}/2 + e^{2 log z}
    return from_scaled(exp_sum({z - kLn2, -z - kLn2 + Complex{0.0, kPi}, 2.0 * std::log(z)}));
  };
  p.coefficients = CoefficientRule{
      [](Index n) {
        if (n == 1 || n == 2) return Coefficient::from_log(0.0);
        if (n < 3 || n % 2 == 0) return Coefficient::zero();
        return Coefficient::from_log(-log_gamma_int(n));
      },
      [](Index n) {
        if (n <= 1) return Index{1};
        if (n == 2) return Index{2};
        return n + (1 - n % 2);
      },
  };
  p.positive_coefficients = true;
  auto log_m = [](double r) {
    if (r < 700.0) return std::log(std::sinh(r) + r * r);
    return r - kLn2 + std::log1p(2.0 * r * r * std::exp(-r) - std::exp(-2.0 * r));
  };
  p.max_modulus = MaxModulusRule{
      log_m,
      [log_m](double x) {
        if (x < 6.0) return std::log(log_m(std::exp(x)));
        return x + std::log1p(-kLn2 * std::exp(-x));
      },
      1.0,
  };
  return EntireFunction(std::move(p));
}

// --- power_gap(p, q) and quarter_order -----------------------------------

CoefficientRule power_gap_rule(Index pp, Index qq) {
  return CoefficientRule{
      [pp, qq](Index m) {
        if (m < 0 || m % pp != 0) return Coefficient::zero();
        return Coefficient::from_log(-log_gamma_int(qq * (m / pp)));
      },
      [pp](Index m) { return m <= 0 ? 0 : ((m + pp - 1) / pp) * pp; },
  };
}

/// g(x) = sum_n x^{qn}/(qn)! = (1/q) sum_j exp(w^j x), w = e^{2 pi i/q}.
ScaledSum root_of_unity_sum(Complex x, Index q) {
  ScaledSum s;
  std::vector<Complex> ex(static_cast<std::size_t>(q));
  for (Index j = 0; j < q; ++j) {
    ex[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(q)) * x;
    s.scale = std::max(s.scale, ex[static_cast<std::size_t>(j)].real());
  }
  for (const Complex& w : ex) s.partial += std::exp(w - s.scale);
  s.partial /= static_cast<double>(q);
  return s;
}

constexpr Index kMaxClosedFormQ = 64;

MaxModulusRule power_gap_max_modulus(Index pp, Index qq, CoefficientRule rule) {
  const double ratio = static_cast<double>(pp) / static_cast<double>(qq);
  auto log_m = [pp, qq, ratio, rule](double r) {
    if (qq <= kMaxClosedFormQ) {
      const double x = std::pow(r, ratio);
      const ScaledSum s = root_of_unity_sum({x, 0.0}, qq);
      return s.scale + std::log(std::fabs(s.partial.real()));
    }
    return *evaluate_series(rule, {r, 0.0}).log_modulus();
  };
  auto log_log_m = [qq, ratio, log_m](double v) {
    const double ex = ratio * v;
    if (ex < 6.0) return std::log(log_m(std::exp(v)));
    // log M(r) = x - log q + O(e^{-cx}) with x = r^{p/q}
    return ex + std::log1p(-std::log(static_cast<double>(qq)) * std::exp(-ex));
  };
  return MaxModulusRule{log_m, log_log_m, ratio};
}

EntireFunction make_power_gap(Index pp, Index qq, std::string name, ParamRecord params) {
  EntireFunction::Parts p;
  p.name = std::move(name);
  p.params = std::move(params);
  CoefficientRule rule = power_gap_rule(pp, qq);
  const double ratio = static_cast<double>(pp) / static_cast<double>(qq);
  p.evaluate = [rule, pp, qq, ratio](Complex z) {
    if (std::abs(z) < 1.0 || qq > kMaxClosedFormQ) return evaluate_series(rule, z);
    // Any branch of z^{p/q} gives the same value of g.
    const Complex x = std::exp(ratio * std::log(z));
    return from_scaled(root_of_unity_sum(x, qq));
  };
  p.coefficients = rule;
  p.positive_coefficients = true;
  p.max_modulus = power_gap_max_modulus(pp, qq, rule);
  return EntireFunction(std::move(p));
}

EntireFunction make_quarter_order() {
  EntireFunction::Parts p;
  p.name = "quarter_order";
  CoefficientRule rule = power_gap_rule(1, 4);
  p.evaluate = [rule](Complex z) {
    if (std::abs(z) < 1.0) return evaluate_series(rule, z);
    const Complex w = std::sqrt(std::sqrt(z));  // principal fourth root
    if (std::max(std::fabs(w.real()), std::fabs(w.imag())) < 680.0) {
      return checked(0.5 * (std::cos(w) + std::cosh(w)));
    }
    const Complex iw{-w.imag(), w.real()};
    const double l4 = 2.0 * kLn2;
    return from_scaled(exp_sum({iw - l4, -iw - l4, w - l4, -w - l4}));
  };
  p.coefficients = rule;
  p.positive_coefficients = true;
  auto log_m = [](double r) {
    const double w = std::pow(r, 0.25);
    if (w < 680.0) return std::log(0.5 * (std::cos(w) + std::cosh(w)));
    return w - 2.0 * kLn2 + std::log1p(2.0 * std::cos(w) * std::exp(-w) + std::exp(-2.0 * w));
  };
  p.max_modulus = MaxModulusRule{
      log_m,
      [log_m](double x) {
        if (x < 24.0) return std::log(log_m(std::exp(x)));
        return 0.25 * x + std::log1p(-2.0 * kLn2 * std::exp(-0.25 * x));
      },
      0.25,
  };
  return EntireFunction(std::move(p));
}

// --- gap_series(c): sum_k z^{[ck]^2} / (k^2)! --------------------------------

Index gap_base(double c, Index k) { return static_cast<Index>(std::floor(c * static_cast<double>(k))); }

EntireFunction make_gap_series(double c, ParamRecord params) {
  EntireFunction::Parts p;
  p.name = "gap_series";
  p.params = std::move(params);
  CoefficientRule rule{
      [c](Index n) {
        if (n < 0) return Coefficient::zero();
        const auto s = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
        if (s * s != n) return Coefficient::zero();
        // Collect every k with floor(ck) = s (several when c < 1).
        double acc = -INFINITY;
        for (Index k = std::max<Index>(0, static_cast<Index>(static_cast<double>(s) / c) - 2);; ++k) {
          const Index b = gap_base(c, k);
          if (b > s) break;
          if (b == s) {
            const double t = -log_gamma_int(k * k);
            acc = std::max(acc, t) + std::log1p(std::exp(-std::fabs(acc - t)));
          }
        }
        if (acc == -INFINITY) return Coefficient::zero();
        return Coefficient::from_log(acc);
      },
      [c](Index n) {
        if (n <= 0) return Index{0};
        const auto s = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
        for (Index k = std::max<Index>(0, static_cast<Index>(static_cast<double>(s - 1) / c) - 2);; ++k) {
          const Index b = gap_base(c, k);
          if (b * b >= n) return b * b;
        }
      },
  };
  p.evaluate = [rule](Complex z) { return evaluate_series(rule, z); };
  p.coefficients = rule;
  p.positive_coefficients = true;
  const double c2 = c * c;
  auto log_m = [rule, c2](double r) {
    const double central = std::pow(r, c2);
    if (central <= 1e7) return *evaluate_series(rule, {r, 0.0}).log_modulus();
    // Asymptotic log M(r) = n - (1/2) log(2 pi n) + O(1) with n = r^{c^2}.
    return central - 0.5 * std::log(2.0 * kPi * central);
  };
  p.max_modulus = MaxModulusRule{
      log_m,
      [log_m, c2](double x) {
        if (c2 * x < 16.0) return std::log(log_m(std::exp(x)));
        const double central_log = c2 * x;
        return central_log + std::log1p(-0.5 * (std::log(2.0 * kPi) + central_log) * std::exp(-central_log));
      },
      c2,
  };
  return EntireFunction(std::move(p));
}

Index parse_positive_int(const ParamRecord& params, const std::string& key) {
  const double v = parse_param(params, key, 0.0, true);
  if (v < 1.0 || v != std::floor(v) || v > 1e6) {
    throw FunctionError("parameter '" + key + "' must be an integer >= 1");
  }
  return static_cast<Index>(v);
}

bool probe_polynomial(const CoefficientRule& rule, Index& last_nonzero) {
  last_nonzero = -1;
  for (Index n = rule.next_nonzero(0); n >= 0 && n <= kPolynomialProbe; n = rule.next_nonzero(n + 1)) {
    if (!rule.at(n).is_zero()) last_nonzero = n;
  }
  return last_nonzero < kPolynomialProbe / 2;
}

}  // namespace

// --- Evaluation / Coefficient ------------------------------------------------

std::optional<double> Evaluation::log_modulus() const {
  if (overflow_) return log_mod_;
  return std::log(std::abs(value_));
}

double Coefficient::value() const {
  if (sign == 0) return 0.0;
  return static_cast<double>(sign) * std::exp(log_abs);
}

Coefficient Coefficient::from_value(double v) {
  if (v == 0.0) return zero();
  return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
}

// --- EntireFunction ------------------------------------------------------

EntireFunction::EntireFunction(Parts parts) : parts_(std::make_shared<const Parts>(std::move(parts))) {
  if (!parts_->evaluate) throw FunctionError("entire function needs an evaluator");
  if (parts_->iterate_power < 1) throw FunctionError("iterate power must be >= 1");
}

Coefficient EntireFunction::coefficient_term(Index n) const {
  if (!parts_->coefficients) throw FunctionError("coefficients unavailable");
  if (n < 0) throw FunctionError("coefficient index must be >= 0");
  return parts_->coefficients->at(n);
}

Index EntireFunction::next_nonzero(Index n) const {
  if (!parts_->coefficients) throw FunctionError("coefficients unavailable");
  return parts_->coefficients->next_nonzero(n);
}

std::string EntireFunction::describe() const {
  std::string s = parts_->name;
  if (!parts_->params.empty()) {
    s += "(";
    bool first = true;
    for (const auto& [k, v] : parts_->params) {
      if (!first) s += ",";
      s += k + "=" + v;
      first = false;
    }
    s += ")";
  }
  return s;
}

// --- series evaluation --------------------------------------------------

Evaluation evaluate_series(const CoefficientRule& rule, Complex z) {
  const double r = std::abs(z);
  if (r == 0.0) {
    const Index first = rule.next_nonzero(0);
    if (first != 0) return Evaluation::finite({0.0, 0.0});
    return Evaluation::finite({rule.at(0).value(), 0.0});
  }
  const double log_r = std::log(r);
  const double theta = std::arg(z);
  const double log_cutoff = std::log(1e-18);

  ScaledSum acc;
  double peak = -INFINITY;
  double previous = -INFINITY;
  int small_run = 0;
  Index terms = 0;
  Index last_index = -1;

  for (Index n = rule.next_nonzero(0); n >= 0; n = rule.next_nonzero(n + 1)) {
    const Coefficient a = rule.at(n);
    if (a.is_zero()) {
      if (last_index >= 0 && previous < peak && n - last_index > kZeroRunCap) break;
      continue;
    }
    const double lt = a.log_abs + static_cast<double>(n) * log_r;
    if (!std::isfinite(lt)) throw SeriesDivergence("series not entire at working precision");
    if (lt > acc.scale) {
      acc.partial *= std::exp(acc.scale - lt);
      acc.scale = lt;
    }
    const double phase = std::fmod(static_cast<double>(n) * theta, 2.0 * kPi);
    acc.partial += static_cast<double>(a.sign) * std::polar(std::exp(lt - acc.scale), phase);

    const bool past_peak = lt < peak && lt < previous;
    peak = std::max(peak, lt);
    const double reference = std::max(acc.log_modulus(), peak - 700.0);
    if (past_peak && lt < reference + log_cutoff) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
    previous = lt;
    last_index = n;
    if (++terms > kSeriesTermCap) throw SeriesDivergence("series not entire at working precision");
  }
  return from_scaled(acc);
}

// --- constructors -------------------------------------------------------

EntireFunction make_builtin(const std::string& name, const ParamRecord& params) {
  if (name == "exp") {
    reject_unknown(params, {});
    return make_exp();
  }
  if (name == "cosh_sq") {
    reject_unknown(params, {});
    return make_cosh_sq();
  }
  if (name == "quarter_order") {
    reject_unknown(params, {});
    return make_quarter_order();
  }
  if (name == "sinh_plus_sq") {
    reject_unknown(params, {});
    return make_sinh_plus_sq();
  }
  if (name == "gap_series") {
    reject_unknown(params, {"c"});
    const double c = parse_param(params, "c", 1.0, true);
    if (!(c > 0.0) || !std::isfinite(c)) throw FunctionError("gap_series needs c > 0");
    return make_gap_series(c, {{"c", detail::format_g9(c)}});
  }
  if (name == "power_gap") {
    reject_unknown(params, {"p", "q"});
    const Index pp = parse_positive_int(params, "p");
    const Index qq = parse_positive_int(params, "q");
    return make_power_gap(pp, qq, "power_gap", {{"p", std::to_string(pp)}, {"q", std::to_string(qq)}});
  }
  throw FunctionError("unknown function '" + name + "'");
}

EntireFunction make_series(CoefficientRule rule, bool positive, std::string name) {
  if (!rule.at) throw FunctionError("series rule needs a coefficient map");
  if (!rule.next_nonzero) rule.next_nonzero = [](Index n) { return n; };

  Index last = -1;
  const bool polynomial = probe_polynomial(rule, last);
  if (polynomial) {
    // Stop the summation after the last probed nonzero term.
    auto inner = rule.next_nonzero;
    rule.next_nonzero = [inner, last](Index n) -> Index {
      if (n > last) return -1;
      const Index m = inner(n);
      return (m < 0 || m > last) ? -1 : m;
    };
  }
  if (positive) {
    for (Index n = rule.next_nonzero(0); n >= 0 && n <= kPolynomialProbe; n = rule.next_nonzero(n + 1)) {
      if (rule.at(n).sign < 0) throw FunctionError("series flagged positive has a negative coefficient at n=" + std::to_string(n));
    }
  }
  EntireFunction::Parts p;
  p.name = std::move(name);
  p.evaluate = [rule](Complex z) { return evaluate_series(rule, z); };
  p.coefficients = rule;
  p.positive_coefficients = positive;
  p.transcendental = !polynomial;
  if (positive && !polynomial) {
    auto log_m = [rule](double r) { return *evaluate_series(rule, {r, 0.0}).log_modulus(); };
    p.max_modulus = MaxModulusRule{log_m, {}, 0.0};
  }
  return EntireFunction(std::move(p));
}

int random_sign(std::uint64_t seed, Index n) {
  std::uint64_t z = seed + static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  return (z >> 63) == 0 ? 1 : -1;
}

EntireFunction make_random_signs(const EntireFunction& base, std::uint64_t seed) {
  if (!base.has_coefficients()) throw FunctionError("random signs need a base with coefficients");
  const EntireFunction captured = base;
  CoefficientRule rule{
      [captured, seed](Index n) {
        Coefficient a = captured.coefficient_term(n);
        a.sign *= random_sign(seed, n);
        return a;
      },
      [captured](Index n) { return captured.next_nonzero(n); },
  };
  EntireFunction::Parts p;
  p.name = base.name();
  p.params = base.params();
  p.params["seed"] = std::to_string(seed);
  p.evaluate = [rule](Complex z) { return evaluate_series(rule, z); };
  p.coefficients = rule;
  p.positive_coefficients = false;
  p.transcendental = base.transcendental();
  return EntireFunction(std::move(p));
}

EntireFunction iterate_function(const EntireFunction& f, int m) {
  if (m < 1) throw FunctionError("iterate count must be >= 1");
  if (m == 1) return f;
  const EntireFunction root = f.base() ? *f.base() : f;
  const int total = m * f.iterate_power();
  EntireFunction::Parts p;
  p.name = root.name();
  p.params = root.params();
  p.params["iterate"] = std::to_string(total);
  p.evaluate = [root, total](Complex z) {
    Evaluation e = Evaluation::finite(z);
    for (int i = 0; i < total; ++i) {
      e = root.evaluate(e.value());
      if (e.overflowed()) {
        // Past an intermediate overflow the argument is unknown.
        return i + 1 == total ? e : Evaluation::overflow(std::nullopt);
      }
    }
    return e;
  };
  p.positive_coefficients = root.positive_coefficients();
  p.transcendental = root.transcendental();
  p.iterate_power = total;
  p.base = std::make_shared<const EntireFunction>(root);
  return EntireFunction(std::move(p));
}

EntireFunction make_function(const std::string& name, ParamRecord params) {
  std::optional<std::uint64_t> seed;
  int iterate = 1;
  if (auto it = params.find("seed"); it != params.end()) {
    const auto v = detail::parse_int(it->second);
    if (!v || *v < 0) throw FunctionError("parameter 'seed' must be a nonnegative integer");
    seed = static_cast<std::uint64_t>(*v);
    params.erase(it);
  }
  if (auto it = params.find("iterate"); it != params.end()) {
    const auto v = detail::parse_int(it->second);
    if (!v || *v < 1 || *v > 64) throw FunctionError("parameter 'iterate' must be an integer in [1, 64]");
    iterate = static_cast<int>(*v);
    params.erase(it);
  }
  std::optional<EntireFunction> f;
  if (name == "series") {
    reject_unknown(params, {"file"});
    auto it = params.find("file");
    if (it == params.end()) throw FunctionError("series needs parameter 'file'");
    std::ifstream in(it->second);
    if (!in) throw FunctionError("cannot read series file '" + it->second + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    CoefficientRule rule = read_series_table(buf.str());
    bool positive = true;
    for (Index n = rule.next_nonzero(0); n >= 0; n = rule.next_nonzero(n + 1)) positive = positive && rule.at(n).sign > 0;
    f = make_series(std::move(rule), positive, "series");
  } else {
    f = make_builtin(name, params);
  }
  if (seed) f = make_random_signs(*f, *seed);
  if (iterate > 1) f = iterate_function(*f, iterate);
  return *f;
}

CoefficientRule read_series_table(const std::string& text) {
  auto table = std::make_shared<std::map<Index, Coefficient>>();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    std::istringstream ls(body);
    std::string idx_text, val_text, extra;
    ls >> idx_text >> val_text;
    if (val_text.empty() || (ls >> extra)) {
      throw FunctionError("series table line " + std::to_string(line_no) + ": expected '<n> <a_n>'");
    }
    const auto idx = detail::parse_double(idx_text);
    if (!idx || *idx < 0 || *idx != std::floor(*idx)) {
      throw FunctionError("series table line " + std::to_string(line_no) + ": bad index");
    }
    Coefficient c;
    int sign = 1;
    std::string v = val_text;
    if (!v.empty() && v[0] == '-' && v.rfind("-exp(", 0) == 0) {
      sign = -1;
      v = v.substr(1);
    }
    if (v.rfind("exp(", 0) == 0 && v.back() == ')') {
      const auto x = detail::parse_double(v.substr(4, v.size() - 5));
      if (!x) throw FunctionError("series table line " + std::to_string(line_no) + ": bad exp() value");
      c = Coefficient::from_log(*x, sign);
    } else {
      const auto x = detail::parse_double(val_text);
      if (!x) throw FunctionError("series table line " + std::to_string(line_no) + ": bad coefficient");
      c = Coefficient::from_value(*x);
    }
    (*table)[static_cast<Index>(*idx)] = c;
  }
  return CoefficientRule{
      [table](Index n) {
        auto it = table->find(n);
        return it == table->end() ? Coefficient::zero() : it->second;
      },
      [table](Index n) -> Index {
        for (auto it = table->lower_bound(n); it != table->end(); ++it) {
          if (!it->second.is_zero()) return it->first;
        }
        return -1;
      },
  };
}

EntireFunction parse_function_spec(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string name;
  ParamRecord params;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    if (name.empty()) {
      if (body.find('=') != std::string::npos) {
        throw FunctionError("function spec line " + std::to_string(line_no) + ": expected a function name");
      }
      name = body;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos || body.rfind("param.", 0) != 0) {
      throw FunctionError("function spec line " + std::to_string(line_no) + ": expected 'param.<key> = <value>'");
    }
    const std::string key = detail::trim(body.substr(6, eq - 6));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw FunctionError("function spec line " + std::to_string(line_no) + ": empty key or value");
    }
    params[key] = value;
  }
  if (name.empty()) throw FunctionError("function spec: missing function name");
  return make_function(name, params);
}

}  // namespace fastesc
