#include "fastesc/report.hpp"

#include <cmath>
#include <sstream>

#include "text_util.hpp"

namespace fastesc {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return detail::round9(v);
}

Json to_json(const Magnitude& m) {
  Json j;
  j["depth"] = m.depth();
  j["mantissa"] = number(m.mantissa());
  if (m.depth() == 0) j["value"] = number(m.mantissa());
  return j;
}

Json to_json(const ThresholdLadder& ladder) {
  Json j;
  j["R"] = number(ladder.R);
  j["function"] = ladder.function;
  j["samples_used"] = ladder.samples_used;
  j["rungs"] = Json::array();
  for (const Magnitude& m : ladder.rungs) j["rungs"].push_back(to_json(m));
  j["truncated_at"] = ladder.truncated_at ? Json(*ladder.truncated_at) : Json(nullptr);
  j["convexity_violations"] = ladder.convexity_violations;
  return j;
}

namespace {

Json witnesses(const std::vector<ScanWitness>& ws) {
  Json arr = Json::array();
  for (const ScanWitness& w : ws) {
    Json j;
    j["r"] = number(w.r);
    for (const auto& [k, v] : w.values) j[k] = number(v);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string g9(double v) { return detail::format_g9(v); }

}  // namespace

Json to_json(const ScanResult& scan) {
  Json j;
  j["test"] = to_string(scan.test);
  j["parameter"] = number(scan.parameter);
  j["range"] = {number(scan.lo), number(scan.hi)};
  j["points"] = scan.points;
  j["verdict"] = to_string(scan.verdict);
  j["violations"] = witnesses(scan.violations);
  if (!scan.best.empty()) j["best"] = witnesses(scan.best);
  return j;
}

Json to_json(const GrowthReport& r) {
  Json j;
  j["schema"] = kGrowthSchema;
  j["function"] = r.function;
  j["order"] = {
      {"estimate", number(r.order.order)},
      {"lower_estimate", number(r.order.lower_order)},
      {"raw", number(r.order.order_raw)},
      {"lower_raw", number(r.order.lower_order_raw)},
      {"window", {r.order.window_lo, r.order.window_hi}},
      {"hull_vertices", r.order.hull_vertices},
      {"max_modulus_estimate", r.max_modulus_order ? number(*r.max_modulus_order) : Json(nullptr)},
  };
  Json ratios = Json::array();
  for (double v : r.gaps.ratio_trace) ratios.push_back(number(v));
  j["gaps"] = {
      {"fabry", to_string(r.gaps.fabry)},
      {"hayman", to_string(r.gaps.hayman)},
      {"alpha", number(r.gaps.alpha)},
      {"exponents", r.gaps.exponents},
      {"ratio_trace", ratios},
  };
  j["ahr"] = to_json(r.ahr);
  j["small_growth"] = to_json(r.small_growth);
  j["convexity"] = to_json(r.convexity);
  j["convexity_violations"] = r.convexity.violations.size();
  j["min_R"] = r.min_R ? number(*r.min_R) : Json(nullptr);
  j["notes"] = r.notes;
  return j;
}

std::string to_text(const GrowthReport& r) {
  std::ostringstream out;
  out << "function: " << r.function << "\n";
  out << "order_estimate: " << g9(r.order.order) << "\n";
  out << "lower_order_estimate: " << g9(r.order.lower_order) << "\n";
  out << "order_raw: " << g9(r.order.order_raw) << "\n";
  out << "lower_order_raw: " << g9(r.order.lower_order_raw) << "\n";
  out << "order_window: " << r.order.window_lo << " " << r.order.window_hi << "\n";
  out << "max_modulus_order: " << (r.max_modulus_order ? g9(*r.max_modulus_order) : "unavailable") << "\n";
  out << "fabry_verdict: " << to_string(r.gaps.fabry) << "\n";
  out << "hayman_verdict: " << to_string(r.gaps.hayman) << " (alpha " << g9(r.gaps.alpha) << ")\n";
  out << "ahr_verdict: " << to_string(r.ahr.verdict) << " (c " << g9(r.ahr.parameter) << ")\n";
  out << "small_growth_verdict: " << to_string(r.small_growth.verdict) << " (m " << g9(r.small_growth.parameter)
      << ")\n";
  out << "convexity_violations: " << r.convexity.violations.size() << "\n";
  out << "min_R: " << (r.min_R ? g9(*r.min_R) : "none") << "\n";
  for (const std::string& n : r.notes) out << "note: " << n << "\n";
  return out.str();
}

Json to_json(const WebCertificate& c) {
  Json j;
  j["schema"] = kCertificateSchema;
  j["method"] = c.method;
  j["function"] = c.function;
  j["status"] = to_string(c.status);
  j["reason"] = c.reason;
  j["failed_at"] = c.failed_at ? Json(*c.failed_at) : Json(nullptr);
  j["truncated_at"] = c.truncated_at ? Json(*c.truncated_at) : Json(nullptr);
  j["R"] = number(c.R);
  j["requested_depth"] = c.requested_depth;
  j["depth"] = c.depth();
  j["samples"] = c.samples;
  j["delta"] = number(c.delta);
  j["window_power"] = number(kDiscWindowPower);
  Json rho = Json::array();
  for (double v : c.rho) rho.push_back(number(v));
  j["rho"] = rho;
  j["m_values"] = Json::array();
  for (const Magnitude& m : c.m_values) j["m_values"].push_back(to_json(m));
  j["thresholds"] = Json::array();
  for (const Magnitude& m : c.thresholds) j["thresholds"].push_back(to_json(m));
  if (c.method == "regular_growth") {
    Json rr = Json::array();
    for (double v : c.regular_r) rr.push_back(number(v));
    Json mm = Json::array();
    for (const Magnitude& m : c.regular_M) mm.push_back(to_json(m));
    j["regular"] = {{"m", number(c.m_exponent)}, {"r", rr}, {"M_r", mm}};
  }
  return j;
}

std::string to_text(const WebCertificate& c) {
  std::ostringstream out;
  out << "function: " << c.function << "\n";
  out << "method: " << c.method << "\n";
  out << "status: " << to_string(c.status) << "\n";
  if (!c.reason.empty()) out << "reason: " << c.reason << "\n";
  if (c.failed_at) out << "failed_at: " << *c.failed_at << "\n";
  if (c.truncated_at) out << "truncated_at: " << *c.truncated_at << "\n";
  out << "R: " << g9(c.R) << "\n";
  out << "depth: " << c.depth() << "\n";
  for (std::size_t n = 0; n < c.rho.size(); ++n) {
    out << "rho_" << n << ": " << g9(c.rho[n]) << "  m: " << c.m_values[n].to_string() << "\n";
  }
  return out.str();
}

Json to_json(const LoopPolyline& loop) {
  Json j;
  j["vertex_count"] = loop.vertices.size();
  j["length"] = number(loop.length());
  j["signed_area"] = number(loop.signed_area());
  Json v = Json::array();
  for (const Complex& z : loop.vertices) v.push_back({number(z.real()), number(z.imag())});
  j["vertices"] = v;
  return j;
}

Json to_json(const std::vector<LevelComponents>& components) {
  Json arr = Json::array();
  for (const LevelComponents& c : components) {
    arr.push_back({{"level", c.level},
                   {"components", c.components},
                   {"touching_edge", c.touching_edge},
                   {"fraction_touching_edge", number(c.fraction_touching_edge())}});
  }
  return arr;
}

Json grid_metadata(const LevelGrid& g) {
  Json j;
  j["schema"] = kGridSchema;
  j["function"] = g.function;
  j["bbox"] = {{"center", {number(g.bbox.center_re), number(g.bbox.center_im)}},
               {"half_width", number(g.bbox.half_width)},
               {"half_height", number(g.bbox.half_height)}};
  j["resolution"] = {g.width, g.height};
  j["depth"] = g.depth;
  j["R"] = number(g.R);
  j["L_range"] = {g.L_min, g.L_max};
  return j;
}

}  // namespace fastesc
