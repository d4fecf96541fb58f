#pragma once

// Curve file formats.
//
// JSON: {"grid": [t...], "points": [[x, y, z]...], "derivatives": [[vx, vy, vz]...]}
// with "derivatives" optional. CSV: header `t,x,y,z`, optionally followed by
// `vx,vy,vz`. Reals are written with 17 significant digits so that a write
// followed by a read reproduces every sample bit for bit.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "heisgeo/geodesic_solver.hpp"
#include "heisgeo/metric_core.hpp"
#include "heisgeo/types.hpp"

namespace heisgeo::io {

/// Malformed input (bad JSON, wrong arity, non-numeric field).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CurveFormat { json, csv };

/// Picks the format from the file extension (".csv" -> csv, otherwise json).
CurveFormat format_for(const std::filesystem::path& path);

nlohmann::json curve_to_json(const SampledCurve& curve);
SampledCurve curve_from_json(const nlohmann::json& j);

/// Curve JSON text with every real printed to 17 significant digits.
void write_curve_json(std::ostream& os, const SampledCurve& curve);
void write_curve_csv(std::ostream& os, const SampledCurve& curve);
SampledCurve read_curve_csv(std::istream& is);

/// Throws std::ios_base::failure if the file cannot be opened.
void save_curve(const std::filesystem::path& path, const SampledCurve& curve);
SampledCurve load_curve(const std::filesystem::path& path);

nlohmann::json to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);

/// Parses "x,y,z" (no spaces). Throws FormatError.
Point parse_point(const std::string& text);

/// Decimal with 17 significant digits.
std::string format_real(double value);

nlohmann::json to_json(const LengthReport& report);
nlohmann::json to_json(const HorizontalControlCurve& curve);
HorizontalControlCurve control_curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const PolylineResult& result);
nlohmann::json to_json(const RefinementComparison& comparison);

}  // namespace heisgeo::io
