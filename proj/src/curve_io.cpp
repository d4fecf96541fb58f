#include "heisgeo/curve_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace heisgeo::io {

using nlohmann::json;

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CurveFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CurveFormat::csv : CurveFormat::json;
}

json to_json(const Point& p) { return json::array({p.x, p.y, p.z}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("point must be an array of three numbers");
  for (const auto& v : j)
    if (!v.is_number()) throw FormatError("point coordinate is not a number");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Point parse_point(const std::string& text) {
  std::array<double, 3> c{};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(',', pos) : text.size();
    if (end == std::string::npos) throw FormatError("point '" + text + "' is not of the form x,y,z");
    const std::string field = text.substr(pos, end - pos);
    std::size_t used = 0;
    try {
      c[i] = std::stod(field, &used);
    } catch (const std::exception&) {
      throw FormatError("point '" + text + "' has a non-numeric coordinate");
    }
    if (used != field.size() || field.empty() || !std::isfinite(c[i]))
      throw FormatError("point '" + text + "' has a malformed coordinate");
    pos = end + 1;
  }
  return {c[0], c[1], c[2]};
}

json curve_to_json(const SampledCurve& curve) {
  json j;
  j["grid"] = json::array();
  for (double t : curve.grid().knots()) j["grid"].push_back(t);
  j["points"] = json::array();
  for (const Point& p : curve.points()) j["points"].push_back(to_json(p));
  if (curve.has_derivatives()) {
    j["derivatives"] = json::array();
    for (const Vec3& v : curve.derivatives()) j["derivatives"].push_back(json::array({v.x, v.y, v.z}));
  }
  return j;
}

SampledCurve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("points"))
    throw FormatError("curve JSON needs \"grid\" and \"points\"");
  try {
    auto grid = j.at("grid").get<std::vector<double>>();
    std::vector<Point> points;
    for (const auto& p : j.at("points")) points.push_back(point_from_json(p));
    std::optional<std::vector<Vec3>> derivs;
    if (j.contains("derivatives") && !j.at("derivatives").is_null()) {
      derivs.emplace();
      for (const auto& v : j.at("derivatives")) {
        const Point p = point_from_json(v);
        derivs->push_back({p.x, p.y, p.z});
      }
    }
    return SampledCurve(Partition(std::move(grid)), std::move(points), std::move(derivs));
  } catch (const json::exception& e) {
    throw FormatError(std::string("curve JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("curve JSON: ") + e.what());
  }
}

namespace {

void write_triples(std::ostream& os, std::size_t n, const auto& get) {
  os << '[';
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b, c] = get(i);
    os << (i ? ",\n  [" : "\n  [") << format_real(a) << ',' << format_real(b) << ',' << format_real(c) << ']';
  }
  os << "\n ]";
}

}  // namespace

void write_curve_json(std::ostream& os, const SampledCurve& curve) {
  os << "{\n \"grid\": [";
  const auto knots = curve.grid().knots();
  for (std::size_t i = 0; i < knots.size(); ++i) os << (i ? "," : "") << format_real(knots[i]);
  os << "],\n \"points\": ";
  const auto pts = curve.points();
  write_triples(os, pts.size(), [&](std::size_t i) { return std::array{pts[i].x, pts[i].y, pts[i].z}; });
  if (curve.has_derivatives()) {
    const auto der = curve.derivatives();
    os << ",\n \"derivatives\": ";
    write_triples(os, der.size(), [&](std::size_t i) { return std::array{der[i].x, der[i].y, der[i].z}; });
  }
  os << "\n}\n";
}

void write_curve_csv(std::ostream& os, const SampledCurve& curve) {
  const bool with_d = curve.has_derivatives();
  os << (with_d ? "t,x,y,z,vx,vy,vz\n" : "t,x,y,z\n");
  const auto pts = curve.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << format_real(curve.grid()[i]) << ',' << format_real(pts[i].x) << ',' << format_real(pts[i].y) << ','
       << format_real(pts[i].z);
    if (with_d) {
      const Vec3& v = curve.derivatives()[i];
      os << ',' << format_real(v.x) << ',' << format_real(v.y) << ',' << format_real(v.z);
    }
    os << '\n';
  }
}

SampledCurve read_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("CSV curve is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t columns = 0;
  if (line == "t,x,y,z")
    columns = 4;
  else if (line == "t,x,y,z,vx,vy,vz")
    columns = 7;
  else
    throw FormatError("CSV header must be t,x,y,z (optionally ,vx,vy,vz)");

  std::vector<double> grid;
  std::vector<Point> points;
  std::vector<Vec3> derivs;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(field, &used);
      } catch (const std::exception&) {
        throw FormatError("CSV line " + std::to_string(lineno) + ": non-numeric field");
      }
      if (used != field.size()) throw FormatError("CSV line " + std::to_string(lineno) + ": malformed field");
      v.push_back(value);
    }
    if (v.size() != columns) throw FormatError("CSV line " + std::to_string(lineno) + ": wrong number of fields");
    grid.push_back(v[0]);
    points.push_back({v[1], v[2], v[3]});
    if (columns == 7) derivs.push_back({v[4], v[5], v[6]});
  }
  try {
    std::optional<std::vector<Vec3>> d;
    if (columns == 7) d = std::move(derivs);
    return SampledCurve(Partition(std::move(grid)), std::move(points), std::move(d));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("CSV curve: ") + e.what());
  }
}

void save_curve(const std::filesystem::path& path, const SampledCurve& curve) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  if (format_for(path) == CurveFormat::csv)
    write_curve_csv(os, curve);
  else
    write_curve_json(os, curve);
  if (!os) throw std::ios_base::failure("failed writing " + path.string());
}

SampledCurve load_curve(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot open " + path.string());
  if (format_for(path) == CurveFormat::csv) return read_curve_csv(is);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return curve_from_json(j);
}

json to_json(const LengthReport& report) {
  return {{"value", report.value},
          {"levels", report.levels},
          {"last_increment", report.last_increment},
          {"converged", report.converged},
          {"level_values", report.level_values}};
}

json to_json(const HorizontalControlCurve& curve) {
  return {{"start", to_json(curve.start())},
          {"steps", curve.steps()},
          {"lambda1", std::vector<double>(curve.lambda1().begin(), curve.lambda1().end())},
          {"lambda2", std::vector<double>(curve.lambda2().begin(), curve.lambda2().end())}};
}

HorizontalControlCurve control_curve_from_json(const json& j) {
  try {
    return HorizontalControlCurve(point_from_json(j.at("start")), j.at("lambda1").get<std::vector<double>>(),
                                  j.at("lambda2").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("control curve JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("control curve JSON: ") + e.what());
  }
}

json to_json(const SolveReport& report) {
  json details = json::array();
  for (const auto& e : report.details) {
    details.push_back({{"outer", e.outer},
                       {"penalty", e.penalty},
                       {"raw_length", e.raw_length},
                       {"feasible_length", std::isfinite(e.feasible_length) ? json(e.feasible_length) : json(nullptr)},
                       {"incumbent", e.incumbent},
                       {"penalty_update", e.penalty_update}});
  }
  json trace = json::array();
  for (double v : report.trace) trace.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  return {{"length", report.length},
          {"endpoint_miss", report.endpoint_miss},
          {"trace", trace},
          {"converged", report.converged},
          {"iterations", report.iterations},
          {"search_radius", std::isfinite(report.search_radius) ? json(report.search_radius) : json(nullptr)},
          {"start", to_json(report.start)},
          {"target", to_json(report.target)},
          {"best_restart", report.best_restart},
          {"restart_lengths", report.restart_lengths},
          {"details", details},
          {"curve", to_json(report.curve)}};
}

json to_json(const PolylineResult& result) {
  json vertices = json::array();
  for (const Point& p : result.vertices) vertices.push_back(to_json(p));
  return {{"length", result.length},
          {"converged", result.converged},
          {"sweeps", result.sweeps},
          {"best_restart", result.best_restart},
          {"restart_lengths", result.restart_lengths},
          {"vertices", vertices}};
}

json to_json(const RefinementComparison& c) {
  return {{"coarse_steps", c.coarse_steps},   {"refined_steps", c.refined_steps},
          {"coarse_length", c.coarse_length}, {"refined_length", c.refined_length},
          {"not_longer", c.not_longer},       {"trace_nonincreasing", c.trace_nonincreasing},
          {"trace", c.trace}};
}

}  // namespace heisgeo::io
