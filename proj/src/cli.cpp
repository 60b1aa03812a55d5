#include "fastesc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fastesc/certify.hpp"
#include "fastesc/config.hpp"
#include "fastesc/escape.hpp"
#include "fastesc/growth.hpp"
#include "fastesc/raster.hpp"
#include "fastesc/report.hpp"
#include "text_util.hpp"

namespace fastesc {

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<int> depth;
  std::optional<double> R;
  std::optional<std::string> output;
  std::optional<std::string> image;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig load(const Options& o) {
  RunConfig c = parse_config(read_text(o.config_path));
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + s + "' is not key=value");
    apply_override(c, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
  }
  if (o.depth) apply_override(c, "depth", std::to_string(*o.depth));
  if (o.R) apply_override(c, "R", detail::format_g9(*o.R));
  if (o.output) apply_override(c, "output", *o.output);
  if (o.image) apply_override(c, "image", *o.image);
  validate(c);
  return c;
}

class Timer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json metadata(const std::string& command, const RunConfig& c, const Timer& t) {
  Json cfg = Json::object();
  for (const auto& [k, v] : c.echo) cfg[k] = v;
  return {{"tool", "fastesc"},
          {"version", kToolVersion},
          {"command", command},
          {"config", cfg},
          {"timing", {{"elapsed_ms", detail::round9(t.elapsed_ms())}}}};
}

void write_json(const std::string& path, const Json& j) {
  const std::string s = j.dump(2) + "\n";
  write_file_atomic(path, std::vector<std::uint8_t>(s.begin(), s.end()));
}

double resolve_R(const RunConfig& c, const EntireFunction& f) { return c.R ? *c.R : find_min_R(f, c.search_max); }

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err, const Timer& t) {
  const EntireFunction f = build_function(c);
  GrowthOptions o;
  o.n_max = c.n_max;
  o.k_max = c.k_max;
  o.alpha = c.alpha;
  o.ahr_c = c.ahr_c;
  o.small_m = c.small_m;
  o.search_max = c.search_max;
  const GrowthReport rep = analyze_growth(f, o);
  out << to_text(rep);
  Json j = to_json(rep);
  if (c.R || rep.min_R) {
    try {
      j["ladder"] = to_json(build_ladder(f, c.R ? *c.R : *rep.min_R, c.depth, c.samples));
    } catch (const GrowthError& e) {
      err << "ladder: " << e.what() << "\n";
      j["ladder"] = nullptr;
    }
  }
  if (c.output) {
    j["metadata"] = metadata("analyze", c, t);
    write_json(*c.output, j);
    out << "report: " << *c.output << "\n";
  }
  return kExitOk;
}

std::vector<Complex> read_points(const RunConfig& c) {
  std::vector<Complex> pts = c.points;
  if (c.points_file) {
    std::ifstream in(*c.points_file);
    if (!in) throw ConfigError("cannot read points file '" + *c.points_file + "'");
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      const auto parts = detail::split_ws(detail::strip_comment(line));
      if (parts.empty()) continue;
      auto re = parts.size() == 2 ? detail::parse_double(parts[0]) : std::nullopt;
      auto im = parts.size() == 2 ? detail::parse_double(parts[1]) : std::nullopt;
      if (!re || !im) throw ConfigError("points file line " + std::to_string(n) + ": expected 're im'");
      pts.emplace_back(*re, *im);
    }
  }
  if (pts.empty()) throw ConfigError("classify needs 'points' or 'points_file'");
  return pts;
}

int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream&, const Timer& t) {
  const EntireFunction f = build_function(c);
  const std::vector<Complex> pts = read_points(c);
  const ThresholdLadder ladder = build_ladder(f, resolve_R(c, f), c.depth + c.level_max, c.samples);
  Json rows = Json::array();
  for (const Complex& z : pts) {
    const LevelVerdict v = max_level(f, ladder, z, c.depth, c.level_min, c.level_max);
    out << detail::format_g9(z.real()) << " " << detail::format_g9(z.imag()) << " "
        << (v.level ? std::to_string(*v.level) : "none") << " " << v.depth << " "
        << (v.indeterminate ? "true" : "false") << "\n";
    rows.push_back({{"re", number(z.real())},
                    {"im", number(z.imag())},
                    {"level", v.level ? Json(*v.level) : Json(nullptr)},
                    {"depth", v.depth},
                    {"indeterminate", v.indeterminate}});
  }
  if (c.output) {
    Json j;
    j["schema"] = "fastesc.classify/1";
    j["function"] = f.describe();
    j["ladder"] = to_json(ladder);
    j["points"] = rows;
    j["metadata"] = metadata("classify", c, t);
    write_json(*c.output, j);
  }
  return kExitOk;
}

int cmd_certify(const RunConfig& c, std::ostream& out, std::ostream&, const Timer& t) {
  const EntireFunction f = build_function(c);
  const double R = resolve_R(c, f);
  const WebCertificate cert = c.method == "regular"
                                  ? certify_regular_growth(f, R, c.m, c.cert_depth, c.samples, c.delta)
                                  : certify_disc_sequence(f, R, c.cert_depth, c.samples, c.delta);
  Json j = to_json(cert);
  if (cert.status == CertificateStatus::certified) {
    const bool ok = verify_certificate(cert, c.oversample);
    j["verification"] = {{"oversample", c.oversample}, {"passed", ok}};
    out << "verified_at_oversample_" << c.oversample << ": " << (ok ? "true" : "false") << "\n";
  }
  out << to_text(cert);
  const std::string path = c.output.value_or("certificate.json");
  j["metadata"] = metadata("certify", c, t);
  write_json(path, j);
  out << "certificate: " << path << "\n";
  return kExitOk;
}

LevelGrid grid_for(const RunConfig& c, const EntireFunction& f) {
  const ThresholdLadder ladder = build_ladder(f, resolve_R(c, f), c.depth + c.level_max, c.samples);
  GridOptions o;
  o.width = c.width;
  o.height = c.height;
  o.depth = c.depth;
  o.L_min = c.level_min;
  o.L_max = c.level_max;
  o.supersample = c.supersample;
  o.threads = c.threads;
  return classify_grid(f, ladder, c.bbox, o);
}

Json grid_sidecar(const RunConfig& c, const LevelGrid& g, const Timer& t, const std::string& command) {
  Json j = grid_metadata(g);
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["supersample"] = c.supersample;
  j["components"] = to_json(component_diagnostics(g));
  j["metadata"] = metadata(command, c, t);
  return j;
}

int cmd_render(const RunConfig& c, std::ostream& out, std::ostream&, const Timer& t) {
  const EntireFunction f = build_function(c);
  const LevelGrid g = grid_for(c, f);
  const std::string path = c.image.value_or("render.ppm");
  write_image(g, path);
  write_json(c.output.value_or(path + ".json"), grid_sidecar(c, g, t, "render"));
  out << "image: " << path << "\n";
  return kExitOk;
}

int cmd_loops(const RunConfig& c, std::ostream& out, std::ostream& err, const Timer& t) {
  const EntireFunction f = build_function(c);
  const LevelGrid g = grid_for(c, f);
  Json holes = Json::array();
  for (int n : c.hole_levels) {
    Json h;
    h["level"] = n;
    try {
      const HoleMask mask = extract_hole(g, n);
      h["bounded_in_window"] = mask.bounded_in_window;
      h["cells"] = mask.count();
      if (c.image) {
        const std::string p = *c.image + ".hole" + std::to_string(n) + ".pgm";
        write_image(mask, p);
        h["mask_image"] = p;
      }
      h["loop"] = mask.bounded_in_window ? to_json(extract_loop(mask)) : Json(nullptr);
      out << "hole " << n << ": bounded_in_window " << (mask.bounded_in_window ? "true" : "false") << ", cells "
          << mask.count() << "\n";
    } catch (const RasterError& e) {
      err << "hole " << n << ": " << e.what() << "\n";
      h["error"] = e.what();
    }
    holes.push_back(std::move(h));
  }
  Json j = grid_sidecar(c, g, t, "loops");
  j["schema"] = kLoopsSchema;
  j["holes"] = holes;
  const std::string path = c.output.value_or("loops.json");
  write_json(path, j);
  out << "loops: " << path << "\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fast escaping sets of transcendental entire functions", "fastesc"};
  app.require_subcommand(1);
  Options o;
  auto add = [&](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--config", o.config_path, "config file (key = value lines)")->required();
    s->add_option("--set", o.sets, "override, key=value (repeatable)");
    s->add_option("--depth", o.depth, "orbit depth N");
    s->add_option("--R", o.R, "ladder base radius");
    s->add_option("--output", o.output, "output document path");
    s->add_option("--image", o.image, "image path");
    return s;
  };
  CLI::App* analyze = add("analyze", "growth and order analysis");
  CLI::App* classify = add("classify", "level of each point");
  CLI::App* certify = add("certify", "spider's web certificate");
  CLI::App* render = add("render", "level raster image");
  CLI::App* loops = add("loops", "fundamental holes and loops");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalidInput;
  }

  const Timer timer;
  try {
    const RunConfig c = load(o);
    if (analyze->parsed()) return cmd_analyze(c, out, err, timer);
    if (classify->parsed()) return cmd_classify(c, out, err, timer);
    if (certify->parsed()) return cmd_certify(c, out, err, timer);
    if (render->parsed()) return cmd_render(c, out, err, timer);
    if (loops->parsed()) return cmd_loops(c, out, err, timer);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const FunctionError& e) {
    err << "function error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const GrowthError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const RasterError& e) {
    err << "raster error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const SeriesDivergence& e) {
    err << "series error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace fastesc
