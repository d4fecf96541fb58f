#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "heisgeo/types.hpp"

namespace heisgeo {

// Group structure -------------------------------------------------------------

/// p * q = (p1 + q1, p2 + q2, p3 + q3 + 2 (p2 q1 - p1 q2)).
Point group_multiply(const Point& p, const Point& q);
Point group_inverse(const Point& p);
inline constexpr Point kIdentity{0.0, 0.0, 0.0};

/// (l p1, l p2, l^2 p3). Throws std::invalid_argument unless l > 0.
Point dilate(const Point& p, double lambda);

// Koranyi metric ----------------------------------------------------------------

/// ((p1^2 + p2^2)^2 + p3^2)^(1/4)
double koranyi_norm(const Point& p);

/// ((dx^2 + dy^2)^2 + (p3 - q3 + 2 (p2 q1 - p1 q2))^2)^(1/4).
/// Bitwise symmetric in (p, q).
double koranyi_distance(const Point& p, const Point& q);

Metric koranyi_metric();

// Horizontal structure ------------------------------------------------------------

struct HorizontalFrame {
  Vec3 X;  // (1, 0, 2 p2)
  Vec3 Y;  // (0, 1, -2 p1)
};

HorizontalFrame horizontal_frame(const Point& p);

/// |v3 + 2 (p1 v2 - p2 v1)|: zero iff v lies in the horizontal plane at p.
double horizontal_defect(const Point& p, const Vec3& v);

struct HorizontalityReport {
  double max_residual = 0.0;
  std::vector<double> residuals;
  Partition grid;
};

/// Residual of the horizontality equation at every knot. Requires derivative
/// samples (std::invalid_argument otherwise).
HorizontalityReport horizontality_residual(const SampledCurve& curve);

/// Derivatives by central differences (second-order one-sided at the ends).
std::vector<Vec3> finite_difference_derivatives(std::span<const double> grid, std::span<const Point> points);

/// Copy of `curve` whose derivative samples come from finite differences.
SampledCurve with_finite_difference_derivatives(const SampledCurve& curve);

struct PlanarSample {
  double x = 0.0;
  double y = 0.0;
};

/// Reconstructs the vertical coordinate of a planar curve so that the result
/// is horizontal: z(a) = z0, z' = -2 (x y' - y x'), integrated with the
/// trapezoidal rule on the grid. Planar derivatives come from
/// `planar_derivatives` when given, central differences otherwise. The result
/// carries derivative samples (planar derivatives plus the z' above).
/// Throws std::invalid_argument on size mismatch or fewer than two samples.
SampledCurve horizontal_lift(const Partition& grid, std::span<const PlanarSample> planar, double z0,
                             std::span<const PlanarSample> planar_derivatives = {});

// Carnot-Caratheodory length -----------------------------------------------------------

class NotHorizontalError : public std::domain_error {
 public:
  NotHorizontalError(double max_residual, double threshold);
  double max_residual() const { return max_residual_; }
  double threshold() const { return threshold_; }

 private:
  double max_residual_;
  double threshold_;
};

/// Default acceptance threshold for horizontality: 1e-6 (1 + max speed).
double default_horizontality_threshold(const SampledCurve& curve);

/// Trapezoidal quadrature of sqrt(x'^2 + y'^2) over the grid. Throws
/// NotHorizontalError when the horizontality residual exceeds `threshold`
/// (negative threshold selects the default).
double cc_length(const SampledCurve& curve, double threshold = -1.0);

// The corrected example geodesic from (0,0,0) to (0,0,1/(4 pi)) -------------------------

inline constexpr double kExampleHeight = 1.0 / (4.0 * std::numbers::pi);

/// ((1 - cos 2 pi t) / (4 pi), sin(2 pi t) / (4 pi), (t - sin(2 pi t) / (2 pi)) / (4 pi)).
/// Throws std::domain_error for t outside [0, 1].
Point example_geodesic(double t);
Vec3 example_geodesic_velocity(double t);
/// n uniform steps with analytic derivatives.
SampledCurve example_geodesic_curve(std::size_t n);

/// d_K(gamma(t), gamma(s)) / |t - s|. Throws std::invalid_argument if s == t.
double difference_quotient(const CurveFn& curve, double t, double s);

// Comparison bounds ------------------------------------------------------------------

struct BoundingBox {
  Point lo;
  Point hi;

  bool contains(const Point& p) const;
  /// Largest absolute coordinate over the box.
  double coordinate_bound() const;
};

/// Upper bound on d_K(p, q) through Euclidean coordinate differences, valid
/// for p, q in `box`. Throws std::invalid_argument if either lies outside.
double euclidean_comparison_bound(const BoundingBox& box, const Point& p, const Point& q);

inline constexpr double kEscapeMargin = 1e-6;

/// Theta such that |p - q| > Theta implies d_K(p, q) > level:
/// sqrt(3) max(level, level^2 + 2 (|q1| + |q2|) level) (1 + kEscapeMargin).
/// Throws std::invalid_argument unless level > 0.
double escape_radius(const Point& q, double level);

}  // namespace heisgeo
