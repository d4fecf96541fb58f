#include "heisgeo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "heisgeo/curve_io.hpp"

namespace heisgeo::plot {

namespace {

struct Range {
  double lo = 0.0, hi = 0.0;
  void widen() {
    // Degenerate ranges get a unit window so the mapping stays finite.
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double span() const { return hi - lo; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void panel(std::ostringstream& os, double x0, double y0, double size, const std::string& id, const std::string& caption,
           const std::vector<std::pair<double, double>>& xy, Range rx, Range ry) {
  os << "<g>\n<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(size) << "\" height=\""
     << num(size) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  os << "<text x=\"" << num(x0 + size / 2) << "\" y=\"" << num(y0 - 8) << "\" text-anchor=\"middle\">"
     << escape(caption) << "</text>\n";
  os << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + size + 16) << "\">" << label(rx.lo) << "</text>\n";
  os << "<text x=\"" << num(x0 + size) << "\" y=\"" << num(y0 + size + 16) << "\" text-anchor=\"end\">"
     << label(rx.hi) << "</text>\n";
  os << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0 + size) << "\" text-anchor=\"end\">" << label(ry.lo)
     << "</text>\n";
  os << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y0 + 10) << "\" text-anchor=\"end\">" << label(ry.hi)
     << "</text>\n";
  os << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xy.size(); ++i) {
    const double px = x0 + size * (xy[i].first - rx.lo) / rx.span();
    const double py = y0 + size * (1.0 - (xy[i].second - ry.lo) / ry.span());
    os << (i ? " " : "") << num(px) << ',' << num(py);
  }
  os << "\"/>\n</g>\n";
}

}  // namespace

std::string curve_svg(const SampledCurve& curve, const SvgOptions& options) {
  const auto pts = curve.points();
  const auto knots = curve.grid().knots();
  Range rx{pts[0].x, pts[0].x}, ry{pts[0].y, pts[0].y}, rz{pts[0].z, pts[0].z};
  for (const Point& p : pts) {
    rx = {std::min(rx.lo, p.x), std::max(rx.hi, p.x)};
    ry = {std::min(ry.lo, p.y), std::max(ry.hi, p.y)};
    rz = {std::min(rz.lo, p.z), std::max(rz.hi, p.z)};
  }
  // Square window for the planar panel.
  const double side = std::max(rx.span(), ry.span()) * 1.1;
  const double cx = 0.5 * (rx.lo + rx.hi), cy = 0.5 * (ry.lo + ry.hi);
  Range px{cx - side / 2, cx + side / 2}, py{cy - side / 2, cy + side / 2};
  px.widen();
  py.widen();
  Range pz{rz.lo - 0.05 * rz.span(), rz.hi + 0.05 * rz.span()};
  pz.widen();
  Range pt{knots.front(), knots.back()};

  std::vector<std::pair<double, double>> planar, height;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    planar.emplace_back(pts[i].x, pts[i].y);
    height.emplace_back(knots[i], pts[i].z);
  }

  const double s = options.panel_size, m = options.margin;
  const double width = 2 * s + 3 * m + 20, height_px = s + 2 * m + 30;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height_px)
     << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height_px)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    os << "<text x=\"" << num(width / 2) << "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">"
       << escape(options.title) << "</text>\n";
  panel(os, m + 20, m + 20, s, "planar", "planar projection (x, y)", planar, px, py);
  panel(os, 2 * m + s + 40, m + 20, s, "height", "z(t)", height, pt, pz);
  os << "</svg>\n";
  return os.str();
}

void write_trace_csv(std::ostream& os, const SolveReport& report) {
  os << "outer,penalty,raw_length,feasible_length,incumbent,penalty_update\n";
  for (const auto& e : report.details) {
    os << e.outer << ',' << io::format_real(e.penalty) << ',' << io::format_real(e.raw_length) << ','
       << (std::isfinite(e.feasible_length) ? io::format_real(e.feasible_length) : std::string("nan")) << ','
       << io::format_real(e.incumbent) << ',' << (e.penalty_update ? 1 : 0) << '\n';
  }
}

}  // namespace heisgeo::plot
