#include "fastesc/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "text_util.hpp"

namespace fastesc {

namespace {

struct Bad {
  std::string message;
};

double real_in(const std::string& v, double lo, double hi, const char* what) {
  auto x = detail::parse_double(v);
  if (!x || *x < lo || *x > hi) throw Bad{std::string(what) + " must be a number in [" + detail::format_g9(lo) + ", " + detail::format_g9(hi) + "]"};
  return *x;
}

double positive(const std::string& v, const char* what) {
  auto x = detail::parse_double(v);
  if (!x || !(*x > 0.0)) throw Bad{std::string(what) + " must be a positive number"};
  return *x;
}

long long int_in(const std::string& v, long long lo, long long hi, const char* what) {
  auto x = detail::parse_int(v);
  if (!x || *x < lo || *x > hi) {
    throw Bad{std::string(what) + " must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"};
  }
  return *x;
}

bool boolean(const std::string& v, const char* what) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Bad{std::string(what) + " must be true or false"};
}

std::vector<double> numbers(const std::string& v, std::size_t count, const char* what) {
  std::vector<double> out;
  for (const std::string& t : detail::split_ws(v)) {
    auto x = detail::parse_double(t);
    if (!x) throw Bad{std::string(what) + ": '" + t + "' is not a number"};
    out.push_back(*x);
  }
  if (out.size() != count) throw Bad{std::string(what) + " needs " + std::to_string(count) + " numbers"};
  return out;
}

std::vector<Complex> point_list(const std::string& v) {
  std::vector<Complex> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (detail::trim(item).empty()) continue;
    const auto xy = numbers(item, 2, "point");
    out.emplace_back(xy[0], xy[1]);
  }
  return out;
}

void set_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key.rfind("param.", 0) == 0) {
    const std::string name = key.substr(6);
    if (name.empty()) throw Bad{"empty parameter name"};
    c.params[name] = v;
    return;
  }
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&)>> setters = {
      {"function", [](RunConfig& c, const std::string& v) {
         if (v.empty() || v.find(' ') != std::string::npos) throw Bad{"function must be a single name"};
         c.function = v;
       }},
      {"function_spec", [](RunConfig& c, const std::string& v) { c.function_spec = v; }},
      {"seed", [](RunConfig& c, const std::string& v) {
         c.seed = static_cast<std::uint64_t>(int_in(v, 0, std::numeric_limits<long long>::max(), "seed"));
       }},
      {"iterate", [](RunConfig& c, const std::string& v) { c.iterate = static_cast<int>(int_in(v, 1, 64, "iterate")); }},
      {"R", [](RunConfig& c, const std::string& v) { c.R = positive(v, "R"); }},
      {"search_max", [](RunConfig& c, const std::string& v) { c.search_max = real_in(v, 1.0 + 1e-12, 1e300, "search_max"); }},
      {"depth", [](RunConfig& c, const std::string& v) { c.depth = static_cast<int>(int_in(v, 1, 64, "depth")); }},
      {"level_min", [](RunConfig& c, const std::string& v) { c.level_min = static_cast<int>(int_in(v, -64, 64, "level_min")); }},
      {"level_max", [](RunConfig& c, const std::string& v) { c.level_max = static_cast<int>(int_in(v, -64, 64, "level_max")); }},
      {"bbox", [](RunConfig& c, const std::string& v) {
         const auto b = numbers(v, 4, "bbox (re_min re_max im_min im_max)");
         if (!(b[0] < b[1]) || !(b[2] < b[3])) throw Bad{"bbox needs re_min < re_max and im_min < im_max"};
         c.bbox = {0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]), 0.5 * (b[1] - b[0]), 0.5 * (b[3] - b[2])};
       }},
      {"resolution", [](RunConfig& c, const std::string& v) {
         const auto parts = detail::split_ws(v);
         if (parts.size() != 1 && parts.size() != 2) throw Bad{"resolution is 'W' or 'W H'"};
         c.width = static_cast<int>(int_in(parts[0], 1, kMaxResolution, "resolution"));
         c.height = parts.size() == 2 ? static_cast<int>(int_in(parts[1], 1, kMaxResolution, "resolution")) : c.width;
       }},
      {"supersample", [](RunConfig& c, const std::string& v) { c.supersample = boolean(v, "supersample"); }},
      {"threads", [](RunConfig& c, const std::string& v) { c.threads = static_cast<int>(int_in(v, 0, 1024, "threads")); }},
      {"hole_levels", [](RunConfig& c, const std::string& v) {
         c.hole_levels.clear();
         for (const std::string& t : detail::split_ws(v)) c.hole_levels.push_back(static_cast<int>(int_in(t, -64, 64, "hole_levels")));
         if (c.hole_levels.empty()) throw Bad{"hole_levels needs at least one level"};
       }},
      {"samples", [](RunConfig& c, const std::string& v) { c.samples = static_cast<int>(int_in(v, 16, 1 << 20, "samples")); }},
      {"delta", [](RunConfig& c, const std::string& v) { c.delta = real_in(v, 0.0, 0.999, "delta"); }},
      {"method", [](RunConfig& c, const std::string& v) {
         if (v != "disc" && v != "regular") throw Bad{"method must be disc or regular"};
         c.method = v;
       }},
      {"m", [](RunConfig& c, const std::string& v) {
         c.m = real_in(v, 1.0, 64.0, "m");
         if (!(c.m > 1.0)) throw Bad{"m must be > 1"};
       }},
      {"cert_depth", [](RunConfig& c, const std::string& v) { c.cert_depth = static_cast<int>(int_in(v, 1, 32, "cert_depth")); }},
      {"oversample", [](RunConfig& c, const std::string& v) { c.oversample = static_cast<int>(int_in(v, 1, 64, "oversample")); }},
      {"n_max", [](RunConfig& c, const std::string& v) { c.n_max = int_in(v, 100, 10000000, "n_max"); }},
      {"k_max", [](RunConfig& c, const std::string& v) { c.k_max = static_cast<int>(int_in(v, 2, 1000000, "k_max")); }},
      {"alpha", [](RunConfig& c, const std::string& v) {
         c.alpha = real_in(v, 2.0, 100.0, "alpha");
         if (!(c.alpha > 2.0)) throw Bad{"alpha must be > 2"};
       }},
      {"ahr_c", [](RunConfig& c, const std::string& v) { c.ahr_c = real_in(v, 0.0, 100.0, "ahr_c"); }},
      {"small_m", [](RunConfig& c, const std::string& v) { c.small_m = static_cast<double>(int_in(v, 1, 8, "small_m")); }},
      {"points", [](RunConfig& c, const std::string& v) { c.points = point_list(v); }},
      {"points_file", [](RunConfig& c, const std::string& v) { c.points_file = v; }},
      {"output", [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"image", [](RunConfig& c, const std::string& v) { c.image = v; }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw Bad{"unknown key '" + key + "'"};
  it->second(c, v);
}

void record(RunConfig& c, const std::string& key, const std::string& value) {
  auto it = std::find_if(c.echo.begin(), c.echo.end(), [&](const auto& kv) { return kv.first == key; });
  if (it != c.echo.end()) it->second = value;
  else c.echo.emplace_back(key, value);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    try {
      set_key(c, key, value);
    } catch (const Bad& b) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + b.message);
    }
    record(c, key, value);
  }
  if (c.function.empty() && !c.function_spec) {
    throw ConfigError("line " + std::to_string(line_no) + ": missing function spec (set 'function' or 'function_spec')");
  }
  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
  }
  return c;
}

void apply_override(RunConfig& c, const std::string& key, const std::string& value) {
  try {
    set_key(c, key, value);
  } catch (const Bad& b) {
    throw ConfigError("override " + key + ": " + b.message);
  }
  record(c, key, value);
}

void validate(const RunConfig& c) {
  if (c.function.empty() && !c.function_spec) throw ConfigError("missing function spec");
  if (c.level_min > c.level_max) throw ConfigError("level_min must be <= level_max");
}

EntireFunction build_function(const RunConfig& c) {
  if (c.function_spec) {
    std::ifstream in(*c.function_spec);
    if (!in) throw FunctionError("cannot read function spec '" + *c.function_spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    EntireFunction f = parse_function_spec(buf.str());
    if (c.seed) f = make_random_signs(f, *c.seed);
    if (c.iterate > 1) f = iterate_function(f, c.iterate);
    return f;
  }
  ParamRecord p = c.params;
  if (c.seed) p["seed"] = std::to_string(*c.seed);
  if (c.iterate > 1) p["iterate"] = std::to_string(c.iterate);
  return make_function(c.function, p);
}

}  // namespace fastesc
