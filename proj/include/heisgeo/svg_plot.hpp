#pragma once
// Static plots: a self-contained SVG with the planar projection and z(t),
// and CSV dumps of solver traces.
#include <ostream>
#include <string>

#include "heisgeo/geodesic_solver.hpp"
#include "heisgeo/types.hpp"

namespace heisgeo::plot {

struct SvgOptions {
  double panel_size = 360.0;
  double margin = 40.0;
  std::string title;
};

/// Two panels side by side. The planar panel uses one scale for both axes,
/// so circles stay round. Polylines carry ids "planar" and "height".
std::string curve_svg(const SampledCurve& curve, const SvgOptions& options = {});

/// One row per outer iteration of the winning restart.
void write_trace_csv(std::ostream& os, const SolveReport& report);

}  // namespace heisgeo::plot
