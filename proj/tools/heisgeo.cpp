// heisgeo: command-line front end.
//
// Exit codes: 0 ok, 1 I/O or file format, 2 usage, 3 non-convergence,
// 4 verification failure.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "heisgeo/curve_io.hpp"
#include "heisgeo/geodesic_solver.hpp"
#include "heisgeo/heisenberg.hpp"
#include "heisgeo/metric_core.hpp"
#include "heisgeo/svg_plot.hpp"
#include "heisgeo/verify.hpp"

namespace {

using namespace heisgeo;
namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kIo = 1, kUsage = 2, kNotConverged = 3, kVerifyFailed = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string metric = "koranyi";
  double tol = kDefaultLengthTolerance;
  int max_levels = 20;
  std::size_t n = 256;
  std::size_t m = 64;
  std::uint64_t seed = 0x5eed;
  std::size_t restarts = 4;
  std::string out;
  std::string format;
};

Metric metric_by_name(const std::string& name) {
  if (name == "koranyi") return koranyi_metric();
  if (name == "euclidean") return euclidean_metric();
  throw UsageError("unknown metric '" + name + "' (koranyi|euclidean)");
}

Point point_arg(const std::string& text) {
  try {
    return io::parse_point(text);
  } catch (const io::FormatError& e) {
    throw UsageError(e.what());
  }
}

std::string format_of(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.format.empty()) return cfg.format;
  if (!cfg.out.empty()) {
    const auto ext = fs::path(cfg.out).extension().string();
    if (ext.size() > 1) return ext.substr(1);
  }
  return fallback;
}

// Writes to --out when given, stdout otherwise.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out);
  if (!os) throw std::ios_base::failure("cannot open " + cfg.out + " for writing");
  os << text;
  if (!os) throw std::ios_base::failure("failed writing " + cfg.out);
}

void emit_curve(const RunConfig& cfg, const SampledCurve& curve) {
  const std::string fmt = format_of(cfg, "json");
  std::ostringstream os;
  if (fmt == "csv")
    io::write_curve_csv(os, curve);
  else if (fmt == "json")
    io::write_curve_json(os, curve);
  else
    throw UsageError("curve output format must be json or csv, not '" + fmt + "'");
  emit(cfg, os.str());
}

int cmd_dist(const std::string& a, const std::string& b) {
  std::printf("%.12g\n", koranyi_distance(point_arg(a), point_arg(b)));
  return kOk;
}

int cmd_length(const RunConfig& cfg, const std::string& file) {
  const Metric metric = metric_by_name(cfg.metric);
  const SampledCurve curve = io::load_curve(file);
  LengthOptions opt;
  opt.tolerance = cfg.tol;
  opt.max_levels = cfg.max_levels;
  const LengthReport report = curve_length(curve.evaluator(), curve.a(), curve.b(), metric, opt);
  emit(cfg, io::to_json(report).dump(2) + "\n");
  return report.converged ? kOk : kNotConverged;
}

int cmd_lift(const RunConfig& cfg, const std::string& file, double z0) {
  const SampledCurve curve = io::load_curve(file);
  std::vector<PlanarSample> xy, v;
  for (const Point& p : curve.points()) xy.push_back({p.x, p.y});
  if (curve.has_derivatives())
    for (const Vec3& d : curve.derivatives()) v.push_back({d.x, d.y});
  emit_curve(cfg, horizontal_lift(curve.grid(), xy, z0, v));
  return kOk;
}

int cmd_reparam(const RunConfig& cfg, const std::string& file) {
  const SampledCurve curve = io::load_curve(file);
  emit_curve(cfg, arclength_reparametrize(curve, metric_by_name(cfg.metric)));
  return kOk;
}

int cmd_example(const RunConfig& cfg, std::size_t samples) {
  if (samples < 1) throw UsageError("example needs at least one segment");
  emit_curve(cfg, example_geodesic_curve(samples));
  return kOk;
}

int cmd_geodesic(const RunConfig& cfg, const std::string& a, const std::string& b, const std::string& curve_out) {
  SolverConfig sc;
  sc.seed = cfg.seed;
  sc.restarts = cfg.restarts;
  const SolveReport report = solve_cc_geodesic(point_arg(a), point_arg(b), cfg.n, sc);
  if (!curve_out.empty()) io::save_curve(curve_out, report.curve.to_sampled_curve(report.curve.steps()));
  const std::string fmt = format_of(cfg, "json");
  if (fmt == "csv") {
    std::ostringstream os;
    plot::write_trace_csv(os, report);
    emit(cfg, os.str());
  } else if (fmt == "json") {
    emit(cfg, io::to_json(report).dump(2) + "\n");
  } else {
    throw UsageError("geodesic output format must be json or csv");
  }
  if (!report.converged)
    std::fprintf(stderr, "geodesic: not converged (endpoint miss %.3g)\n", report.endpoint_miss);
  return report.converged ? kOk : kNotConverged;
}

int cmd_polyline(const RunConfig& cfg, const std::string& a, const std::string& b) {
  PolylineConfig pc;
  pc.seed = cfg.seed;
  pc.restarts = cfg.restarts;
  const PolylineResult result = solve_koranyi_polyline(point_arg(a), point_arg(b), cfg.m, pc);
  emit(cfg, io::to_json(result).dump(2) + "\n");
  return result.converged ? kOk : kNotConverged;
}

int cmd_verify(const RunConfig& cfg, const std::vector<int>& only) {
  verify::VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.only = only;
  const auto checks = verify::run_acceptance(opt);
  std::ostringstream os;
  verify::print_table(os, checks);
  bool all = true;
  for (const auto& s : verify::summarize(checks)) {
    os << (s.pass ? "PASS" : "FAIL") << "  criterion " << s.criterion << ": " << s.title << '\n';
    all = all && s.pass;
  }
  if (!all) {
    os << "failures:\n";
    for (const auto& c : checks)
      if (!c.pass) os << "  [" << c.criterion << "] " << c.name << '\n';
  }
  emit(cfg, os.str());
  return all ? kOk : kVerifyFailed;
}

// Plots a curve file, the example curve, or a geodesic report written by
// `geodesic --format json`. For reports the trace CSV goes to --trace.
int cmd_plot(const RunConfig& cfg, const std::string& file, bool example, std::size_t samples,
             const std::string& trace_out) {
  if (example == !file.empty()) throw UsageError("plot needs exactly one of FILE or --example");
  const std::string fmt = format_of(cfg, "svg");
  if (fmt != "svg") throw UsageError("plot writes svg, not '" + fmt + "'");
  plot::SvgOptions opt;
  std::optional<SampledCurve> curve;
  if (example) {
    curve = example_geodesic_curve(samples);
    opt.title = "example geodesic";
  } else {
    std::ifstream is(file);
    if (!is) throw std::ios_base::failure("cannot open " + file);
    nlohmann::json j;
    const bool json_input = io::format_for(file) == io::CurveFormat::json;
    if (json_input) {
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::parse_error& e) {
        throw io::FormatError(file + ": " + e.what());
      }
    }
    if (json_input && j.is_object() && j.contains("curve") && j["curve"].contains("lambda1")) {
      const auto controls = io::control_curve_from_json(j["curve"]);
      curve = controls.to_sampled_curve(std::max<std::size_t>(samples, controls.steps()));
      opt.title = "geodesic, length " + io::format_real(controls.length());
      if (!trace_out.empty()) {
        std::ofstream ts(trace_out);
        if (!ts) throw std::ios_base::failure("cannot open " + trace_out + " for writing");
        ts << "outer,penalty,raw_length,feasible_length,incumbent,penalty_update\n";
        for (const auto& e : j.value("details", nlohmann::json::array())) {
          const auto& fl = e.at("feasible_length");
          ts << e.at("outer").get<int>() << ',' << io::format_real(e.at("penalty").get<double>()) << ','
             << io::format_real(e.at("raw_length").get<double>()) << ','
             << (fl.is_null() ? std::string("nan") : io::format_real(fl.get<double>())) << ','
             << io::format_real(e.at("incumbent").get<double>()) << ','
             << (e.at("penalty_update").get<bool>() ? 1 : 0) << '\n';
        }
      }
    } else {
      if (!trace_out.empty()) throw UsageError("--trace needs a geodesic report as input");
      curve = json_input ? io::curve_from_json(j) : io::load_curve(file);
      opt.title = fs::path(file).filename().string();
    }
  }
  emit(cfg, plot::curve_svg(*curve, opt));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korányi and Carnot-Caratheodory geometry of the first Heisenberg group"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed")->envname("HEISGEO_SEED");
  };
  const auto add_out = [&](CLI::App* sub, const std::string& formats) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "output format: " + formats);
  };

  std::string a, b, file, trace_out, curve_out;
  double z0 = 0.0;
  std::size_t samples = 512;
  bool example = false;
  std::vector<int> only;

  auto* dist = app.add_subcommand("dist", "Korányi distance between two points x,y,z");
  dist->add_option("p", a)->required();
  dist->add_option("q", b)->required();

  auto* length = app.add_subcommand("length", "metric length of a curve file by dyadic refinement");
  length->add_option("file", file)->required();
  length->add_option("--metric", cfg.metric, "koranyi|euclidean")->capture_default_str();
  length->add_option("--tol", cfg.tol, "stop once a level adds less than this")->capture_default_str();
  length->add_option("--max-levels", cfg.max_levels)->capture_default_str();
  add_out(length, "json");

  auto* lift = app.add_subcommand("lift", "horizontal lift of the planar part of a curve file");
  lift->add_option("file", file)->required();
  lift->add_option("--z0", z0, "initial height")->capture_default_str();
  add_out(lift, "json|csv");

  auto* reparam = app.add_subcommand("reparam", "arclength reparametrization onto [0, 1]");
  reparam->add_option("file", file)->required();
  reparam->add_option("--metric", cfg.metric, "koranyi|euclidean")->capture_default_str();
  add_out(reparam, "json|csv");

  auto* ex = app.add_subcommand("example", "samples of the example geodesic");
  ex->add_option("--samples", samples, "number of segments")->capture_default_str();
  add_out(ex, "json|csv");

  auto* geo = app.add_subcommand("geodesic", "Carnot-Caratheodory geodesic between two points");
  geo->add_option("p", a)->required();
  geo->add_option("q", b)->required();
  geo->add_option("--N", cfg.n, "control steps")->capture_default_str();
  geo->add_option("--restarts", cfg.restarts)->capture_default_str();
  geo->add_option("--curve", curve_out, "also save the curve (json|csv by extension)");
  add_seed(geo);
  add_out(geo, "json (report) | csv (trace)");

  auto* poly = app.add_subcommand("polyline", "Korányi-length minimizing polyline between two points");
  poly->add_option("p", a)->required();
  poly->add_option("q", b)->required();
  poly->add_option("--M", cfg.m, "vertices")->capture_default_str();
  poly->add_option("--restarts", cfg.restarts)->capture_default_str();
  add_seed(poly);
  add_out(poly, "json");

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--only", only, "criteria to run (1-9)")->delimiter(',');
  add_seed(ver);
  add_out(ver, "text");

  auto* pl = app.add_subcommand("plot", "SVG of the planar projection and z(t)");
  pl->add_option("file", file, "curve file or geodesic report");
  pl->add_flag("--example", example, "plot the example geodesic");
  pl->add_option("--samples", samples, "sampling density")->capture_default_str();
  pl->add_option("--trace", trace_out, "CSV of the convergence trace (geodesic reports)");
  add_out(pl, "svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*dist) return cmd_dist(a, b);
    if (*length) return cmd_length(cfg, file);
    if (*lift) return cmd_lift(cfg, file, z0);
    if (*reparam) return cmd_reparam(cfg, file);
    if (*ex) return cmd_example(cfg, samples);
    if (*geo) return cmd_geodesic(cfg, a, b, curve_out);
    if (*poly) return cmd_polyline(cfg, a, b);
    if (*ver) return cmd_verify(cfg, only);
    if (*pl) return cmd_plot(cfg, file, example, samples, trace_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const io::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
