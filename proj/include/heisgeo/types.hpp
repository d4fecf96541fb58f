#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heisgeo {

/// A point of R^3 read as an element of the first Heisenberg group.
/// x, y are the horizontal coordinates, z the vertical one.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Tangent vector (velocity samples, frame vectors).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point operator+(const Point& a, const Vec3& v) { return {a.x + v.x, a.y + v.y, a.z + v.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

double euclidean_norm(const Vec3& v);
bool is_finite(const Point& p);

/// Distance function on points. Must be symmetric and nonnegative; every
/// metric shipped here is also safe to call concurrently.
using Metric = std::function<double(const Point&, const Point&)>;

/// Curve given by an evaluator t -> gamma(t).
using CurveFn = std::function<Point(double)>;

/// Raised when a curve evaluator fails or returns a non-finite point.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strictly increasing grid a = t_0 < t_1 < ... < t_n = b with n >= 1.
class Partition {
 public:
  /// Throws std::invalid_argument on fewer than two knots, non-finite or
  /// non-increasing knots.
  explicit Partition(std::vector<double> knots);

  /// n equal steps over [a, b]; the last knot is b exactly.
  static Partition uniform(double a, double b, std::size_t n);

  double a() const { return knots_.front(); }
  double b() const { return knots_.back(); }
  /// Number of segments n (knots - 1).
  std::size_t size() const { return knots_.size() - 1; }
  std::size_t knot_count() const { return knots_.size(); }
  double operator[](std::size_t i) const { return knots_[i]; }
  std::span<const double> knots() const { return knots_; }

  /// True if this partition contains every knot of `coarse`.
  bool refines(const Partition& coarse) const;

 private:
  std::vector<double> knots_;
};

/// Time-ordered samples of a continuous curve gamma : [a, b] -> R^3.
/// Evaluation between knots interpolates coordinates linearly.
class SampledCurve {
 public:
  SampledCurve(Partition grid, std::vector<Point> points,
               std::optional<std::vector<Vec3>> derivatives = std::nullopt);

  const Partition& grid() const { return grid_; }
  std::span<const Point> points() const { return points_; }
  bool has_derivatives() const { return derivatives_.has_value(); }
  /// Throws std::invalid_argument when the curve carries no derivative samples.
  std::span<const Vec3> derivatives() const;

  double a() const { return grid_.a(); }
  double b() const { return grid_.b(); }
  std::size_t sample_count() const { return points_.size(); }
  const Point& front() const { return points_.front(); }
  const Point& back() const { return points_.back(); }

  /// gamma(t). Exact sample on knots, linear interpolation elsewhere.
  /// Throws std::domain_error for t outside [a, b].
  Point evaluate(double t) const;

  CurveFn evaluator() const;

 private:
  Partition grid_;
  std::vector<Point> points_;
  std::optional<std::vector<Vec3>> derivatives_;
};

/// Samples `fn` on `grid`. Throws EvaluationError on non-finite output.
SampledCurve sample_curve(const CurveFn& fn, const Partition& grid);

}  // namespace heisgeo
