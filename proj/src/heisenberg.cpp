#include "heisgeo/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace heisgeo {

namespace {
constexpr double kPi = std::numbers::pi;
}

Point group_multiply(const Point& p, const Point& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 2.0 * (p.y * q.x - p.x * q.y)};
}

Point group_inverse(const Point& p) { return {-p.x, -p.y, -p.z}; }

Point dilate(const Point& p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  return {lambda * p.x, lambda * p.y, lambda * lambda * p.z};
}

double koranyi_norm(const Point& p) {
  const double planar = p.x * p.x + p.y * p.y;
  return std::sqrt(std::sqrt(planar * planar + p.z * p.z));
}

double koranyi_distance(const Point& p, const Point& q) {
  // Each term is computed so that swapping p and q negates it exactly.
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double twist = (p.z - q.z) + 2.0 * (p.y * q.x - p.x * q.y);
  const double planar = dx * dx + dy * dy;
  return std::sqrt(std::sqrt(planar * planar + twist * twist));
}

Metric koranyi_metric() { return [](const Point& p, const Point& q) { return koranyi_distance(p, q); }; }

HorizontalFrame horizontal_frame(const Point& p) { return {{1.0, 0.0, 2.0 * p.y}, {0.0, 1.0, -2.0 * p.x}}; }

double horizontal_defect(const Point& p, const Vec3& v) { return std::abs(v.z + 2.0 * (p.x * v.y - p.y * v.x)); }

HorizontalityReport horizontality_residual(const SampledCurve& curve) {
  const auto pts = curve.points();
  const auto der = curve.derivatives();
  HorizontalityReport report{0.0, std::vector<double>(pts.size()), curve.grid()};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    report.residuals[i] = horizontal_defect(pts[i], der[i]);
    report.max_residual = std::max(report.max_residual, report.residuals[i]);
  }
  return report;
}

namespace {

template <class T, class Get>
std::vector<T> differentiate(std::span<const double> t, std::size_t n, Get get) {
  // Three-point formulas on a nonuniform grid: central inside, second-order
  // one-sided at both ends. Two samples fall back to the secant.
  std::vector<T> out(n);
  if (n == 2) {
    const double h = t[1] - t[0];
    out[0] = out[1] = (1.0 / h) * (get(1) - get(0));
    return out;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = t[i] - t[i - 1];
    const double hp = t[i + 1] - t[i];
    const double den = hm * hp * (hm + hp);
    out[i] = (hm * hm / den) * get(i + 1) - (hp * hp / den) * get(i - 1) - ((hm * hm - hp * hp) / den) * get(i);
  }
  {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    out[0] = (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * get(0) + ((h1 + h2) / (h1 * h2)) * get(1) -
             (h1 / (h2 * (h1 + h2))) * get(2);
  }
  {
    const double h1 = t[n - 1] - t[n - 2];
    const double h2 = t[n - 2] - t[n - 3];
    out[n - 1] = ((2.0 * h1 + h2) / (h1 * (h1 + h2))) * get(n - 1) - ((h1 + h2) / (h1 * h2)) * get(n - 2) +
                 (h1 / (h2 * (h1 + h2))) * get(n - 3);
  }
  return out;
}

struct Planar {
  double x, y;
};
Planar operator*(double s, Planar p) { return {s * p.x, s * p.y}; }
Planar operator+(Planar a, Planar b) { return {a.x + b.x, a.y + b.y}; }
Planar operator-(Planar a, Planar b) { return {a.x - b.x, a.y - b.y}; }
Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

}  // namespace

std::vector<Vec3> finite_difference_derivatives(std::span<const double> grid, std::span<const Point> points) {
  if (grid.size() != points.size() || grid.size() < 2)
    throw std::invalid_argument("finite differences need matching grid and samples (at least two)");
  return differentiate<Vec3>(grid, points.size(), [&](std::size_t i) {
    return Vec3{points[i].x, points[i].y, points[i].z};
  });
}

SampledCurve with_finite_difference_derivatives(const SampledCurve& curve) {
  auto der = finite_difference_derivatives(curve.grid().knots(), curve.points());
  const auto pts = curve.points();
  return SampledCurve(curve.grid(), std::vector<Point>(pts.begin(), pts.end()), std::move(der));
}

SampledCurve horizontal_lift(const Partition& grid, std::span<const PlanarSample> planar, double z0,
                             std::span<const PlanarSample> planar_derivatives) {
  const std::size_t n = planar.size();
  if (n < 2) throw std::invalid_argument("horizontal lift needs at least two samples");
  if (n != grid.knot_count()) throw std::invalid_argument("planar samples do not match the grid");
  if (!planar_derivatives.empty() && planar_derivatives.size() != n)
    throw std::invalid_argument("planar derivative samples do not match the grid");

  std::vector<Planar> vel(n);
  if (planar_derivatives.empty()) {
    vel = differentiate<Planar>(grid.knots(), n, [&](std::size_t i) { return Planar{planar[i].x, planar[i].y}; });
  } else {
    for (std::size_t i = 0; i < n; ++i) vel[i] = {planar_derivatives[i].x, planar_derivatives[i].y};
  }

  std::vector<double> zdot(n);
  for (std::size_t i = 0; i < n; ++i) zdot[i] = -2.0 * (planar[i].x * vel[i].y - planar[i].y * vel[i].x);

  std::vector<Point> pts(n);
  std::vector<Vec3> der(n);
  double z = z0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) z += 0.5 * (grid[i] - grid[i - 1]) * (zdot[i - 1] + zdot[i]);
    pts[i] = {planar[i].x, planar[i].y, z};
    der[i] = {vel[i].x, vel[i].y, zdot[i]};
  }
  return SampledCurve(grid, std::move(pts), std::move(der));
}

NotHorizontalError::NotHorizontalError(double max_residual, double threshold)
    : std::domain_error([&] {
        std::ostringstream os;
        os << "curve is not horizontal: max residual " << max_residual << " exceeds " << threshold;
        return os.str();
      }()),
      max_residual_(max_residual),
      threshold_(threshold) {}

double default_horizontality_threshold(const SampledCurve& curve) {
  double speed = 0.0;
  for (const Vec3& v : curve.derivatives()) speed = std::max(speed, std::hypot(v.x, v.y));
  return 1e-6 * (1.0 + speed);
}

double cc_length(const SampledCurve& curve, double threshold) {
  const auto report = horizontality_residual(curve);
  if (threshold < 0.0) threshold = default_horizontality_threshold(curve);
  if (report.max_residual > threshold) throw NotHorizontalError(report.max_residual, threshold);

  const auto der = curve.derivatives();
  const auto& grid = curve.grid();
  double sum = 0.0;
  for (std::size_t i = 1; i < der.size(); ++i) {
    const double s0 = std::hypot(der[i - 1].x, der[i - 1].y);
    const double s1 = std::hypot(der[i].x, der[i].y);
    sum += 0.5 * (grid[i] - grid[i - 1]) * (s0 + s1);
  }
  return sum;
}

Point example_geodesic(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("example geodesic is defined on [0, 1]");
  const double w = 2.0 * kPi * t;
  const double c = 1.0 / (4.0 * kPi);
  return {c * (1.0 - std::cos(w)), c * std::sin(w), c * (t - std::sin(w) / (2.0 * kPi))};
}

Vec3 example_geodesic_velocity(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("example geodesic is defined on [0, 1]");
  const double w = 2.0 * kPi * t;
  const double c = 1.0 / (4.0 * kPi);
  return {0.5 * std::sin(w), 0.5 * std::cos(w), c * (1.0 - std::cos(w))};
}

SampledCurve example_geodesic_curve(std::size_t n) {
  const Partition grid = Partition::uniform(0.0, 1.0, n);
  std::vector<Point> pts;
  std::vector<Vec3> der;
  for (double t : grid.knots()) {
    pts.push_back(example_geodesic(t));
    der.push_back(example_geodesic_velocity(t));
  }
  return SampledCurve(grid, std::move(pts), std::move(der));
}

double difference_quotient(const CurveFn& curve, double t, double s) {
  if (s == t) throw std::invalid_argument("difference quotient needs s != t");
  return koranyi_distance(curve(t), curve(s)) / std::abs(t - s);
}

bool BoundingBox::contains(const Point& p) const {
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

double BoundingBox::coordinate_bound() const {
  return std::max({std::abs(lo.x), std::abs(hi.x), std::abs(lo.y), std::abs(hi.y), std::abs(lo.z), std::abs(hi.z)});
}

double euclidean_comparison_bound(const BoundingBox& box, const Point& p, const Point& q) {
  if (!box.contains(p) || !box.contains(q)) throw std::invalid_argument("comparison bound needs both points in the box");
  const double bound = box.coordinate_bound();
  const double dx = std::abs(p.x - q.x);
  const double dy = std::abs(p.y - q.y);
  const double dz = std::abs(p.z - q.z);
  const double planar = dx * dx + dy * dy;
  const double mixed = dy * bound + dx * bound;
  return std::sqrt(std::sqrt(planar * planar + 2.0 * dz * dz + 8.0 * mixed * mixed));
}

double escape_radius(const Point& q, double level) {
  if (!(level > 0.0)) throw std::invalid_argument("escape radius needs a positive level");
  const double gamma = std::abs(q.x) + std::abs(q.y);
  return std::sqrt(3.0) * std::max(level, level * level + 2.0 * gamma * level) * (1.0 + kEscapeMargin);
}

}  // namespace heisgeo
