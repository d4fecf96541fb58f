#include <gtest/gtest.h>

#include <cmath>
#include <regex>
#include <sstream>

#include "heisgeo/heisenberg.hpp"
#include "heisgeo/svg_plot.hpp"

using namespace heisgeo;

namespace {

std::vector<std::pair<double, double>> polyline(const std::string& svg, const std::string& id) {
  const std::regex re("<polyline id=\"" + id + "\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  if (!std::regex_search(svg, m, re)) return {};
  std::vector<std::pair<double, double>> out;
  std::istringstream is(m[1].str());
  std::string pair;
  while (is >> pair) {
    const auto comma = pair.find(',');
    out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return out;
}

}  // namespace

TEST(SvgPlot, ExamplePlanarPanelIsACircleThroughTheOrigin) {
  const auto curve = example_geodesic_curve(256);
  const std::string svg = plot::curve_svg(curve);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  const auto planar = polyline(svg, "planar");
  ASSERT_EQ(planar.size(), 257u);
  // Screen centre of the circle: midpoint between the origin image and the
  // image of the antipodal point t = 1/2.
  const auto o = planar.front();
  const auto a = planar[128];
  const double cx = 0.5 * (o.first + a.first), cy = 0.5 * (o.second + a.second);
  const double r = 0.5 * std::hypot(a.first - o.first, a.second - o.second);
  for (const auto& p : planar) EXPECT_NEAR(std::hypot(p.first - cx, p.second - cy), r, 2e-3);
  EXPECT_EQ(polyline(svg, "height").size(), 257u);
}

TEST(SvgPlot, DegenerateCurveAndEscaping) {
  const SampledCurve c(Partition({0.0, 1.0}), {{1, 1, 1}, {1, 1, 1}});
  plot::SvgOptions opt;
  opt.title = "a<b & c";
  const std::string svg = plot::curve_svg(c, opt);
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(SvgPlot, TraceCsv) {
  const auto r = solve_cc_geodesic({0, 0, 0}, {0, 0, kExampleHeight}, 32);
  std::ostringstream os;
  plot::write_trace_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "outer,penalty,raw_length,feasible_length,incumbent,penalty_update");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, r.details.size());
  EXPECT_GT(rows, 0u);
}
