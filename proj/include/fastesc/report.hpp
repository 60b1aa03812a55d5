#pragma once

#include <string>

#include <json.hpp>

#include "fastesc/certify.hpp"
#include "fastesc/growth.hpp"
#include "fastesc/raster.hpp"

namespace fastesc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGrowthSchema = "fastesc.growth/1";
inline constexpr const char* kCertificateSchema = "fastesc.certificate/1";
inline constexpr const char* kGridSchema = "fastesc.grid/1";
inline constexpr const char* kLoopsSchema = "fastesc.loops/1";

/// A double rounded to 9 significant digits; null when not finite.
Json number(double v);
/// {"depth": k, "mantissa": v} plus "value" when depth is 0.
Json to_json(const Magnitude& m);
Json to_json(const ThresholdLadder& ladder);
Json to_json(const ScanResult& scan);
Json to_json(const GrowthReport& report);
Json to_json(const WebCertificate& cert);
Json to_json(const LoopPolyline& loop);
Json to_json(const std::vector<LevelComponents>& components);
/// Grid metadata (bbox, resolution, depth, R, level range, function).
Json grid_metadata(const LevelGrid& grid);

/// `key: value` lines with 9 significant digits.
std::string to_text(const GrowthReport& report);
std::string to_text(const WebCertificate& cert);

}  // namespace fastesc
