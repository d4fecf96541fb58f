#pragma once

// Curve length in an arbitrary metric space: polygonal sums over partitions,
// dyadic refinement towards the supremum, length profiles and
// reparametrizations.

#include <cstddef>
#include <vector>

#include "heisgeo/types.hpp"

namespace heisgeo {

inline constexpr double kDefaultLengthTolerance = 1e-6;
inline constexpr double kLipschitzSlack = 1e-9;

/// Plain Euclidean distance on R^3.
double euclidean_distance(const Point& p, const Point& q);

Metric euclidean_metric();

/// Sum of d(gamma(t_i), gamma(t_{i-1})) over consecutive knots of `partition`.
/// Knots not on the curve grid are interpolated.
/// Throws std::domain_error if a knot lies outside [curve.a(), curve.b()].
double polygonal_length(const SampledCurve& curve, const Metric& metric, const Partition& partition);

/// Same sum over the curve's own grid.
double polygonal_length(const SampledCurve& curve, const Metric& metric);

/// Explicit knot list variant; throws std::invalid_argument on fewer than
/// two knots.
double polygonal_length(const SampledCurve& curve, const Metric& metric, std::span<const double> knots);

struct LengthOptions {
  double tolerance = kDefaultLengthTolerance;
  /// Level k uses 2^k uniform segments; refinement stops at this level.
  int max_levels = 20;
  /// Levels below this never stop refinement (guards closed curves, whose
  /// coarse sums can stall at zero).
  int min_levels = 4;
};

struct LengthReport {
  double value = 0.0;
  /// Finest level evaluated (2^levels segments).
  int levels = 0;
  double last_increment = 0.0;
  bool converged = false;
  /// Polygonal sum per level, index = level.
  std::vector<double> level_values;
};

/// Approximates the supremum over partitions by dyadic refinement. The
/// evaluator is only called from the calling thread; its exceptions
/// propagate unchanged.
LengthReport curve_length(const CurveFn& curve, double a, double b, const Metric& metric,
                          const LengthOptions& options = {});

/// s -> L(gamma|[a, s]) sampled on the curve grid.
struct LengthProfile {
  Partition grid;
  std::vector<double> values;

  double total() const { return values.back(); }
};

LengthProfile length_profile(const SampledCurve& curve, const Metric& metric);

/// Constant-speed reparametrization over [0, 1]. Flat stretches of the
/// length profile collapse onto their first knot; the final sample is always
/// the original endpoint. A zero-length curve maps to the constant curve on
/// {0, 1}. Derivative samples are dropped.
SampledCurve arclength_reparametrize(const SampledCurve& curve, const Metric& metric);

/// Affine pullback of the grid onto [c, d]. Sample points are unchanged and
/// derivatives are rescaled by the chain rule.
/// Throws std::invalid_argument unless d > c.
SampledCurve linear_reparametrize(const SampledCurve& curve, double c, double d);

}  // namespace heisgeo
