#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastesc/entire_function.hpp"
#include "fastesc/raster.hpp"

namespace fastesc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string function;                    // builtin name or "series"
  std::map<std::string, std::string> params;
  std::optional<std::string> function_spec;  // path to a function spec file
  std::optional<std::uint64_t> seed;
  int iterate = 1;

  std::optional<double> R;
  double search_max = 1e8;
  int depth = 12;
  int level_min = -8;
  int level_max = 8;

  BBox bbox{0.0, 0.0, 2.0, 2.0};
  int width = 512;
  int height = 512;
  bool supersample = false;
  int threads = 0;
  std::vector<int> hole_levels{0};

  int samples = 256;
  double delta = 0.01;
  std::string method = "disc";  // disc | regular
  double m = 2.0;
  int cert_depth = 4;
  int oversample = 8;

  Index n_max = 2000;
  int k_max = 200;
  double alpha = 2.5;
  double ahr_c = 0.5;
  double small_m = 2.0;

  std::vector<Complex> points;
  std::optional<std::string> points_file;
  std::optional<std::string> output;
  std::optional<std::string> image;

  /// Effective key = value pairs in first-seen order, for metadata echoes.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// `key = value` lines, `#` comments, later keys override earlier ones.
/// Errors name the offending line.
RunConfig parse_config(const std::string& text);

/// Applies one `key=value` override on top of a parsed config.
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

/// Checks cross-field constraints (function present, level range order).
void validate(const RunConfig& config);

EntireFunction build_function(const RunConfig& config);

}  // namespace fastesc
