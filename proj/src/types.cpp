#include "heisgeo/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heisgeo {

double euclidean_norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("partition needs at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) throw std::invalid_argument("partition knot is not finite");
    if (i > 0 && !(knots_[i] > knots_[i - 1]))
      throw std::invalid_argument("partition knots must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

Partition Partition::uniform(double a, double b, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform partition needs n >= 1");
  if (!(b > a)) throw std::invalid_argument("uniform partition needs b > a");
  std::vector<double> knots(n + 1);
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) knots[i] = a + h * static_cast<double>(i);
  knots[n] = b;
  return Partition(std::move(knots));
}

bool Partition::refines(const Partition& coarse) const {
  return std::includes(knots_.begin(), knots_.end(), coarse.knots_.begin(), coarse.knots_.end());
}

SampledCurve::SampledCurve(Partition grid, std::vector<Point> points, std::optional<std::vector<Vec3>> derivatives)
    : grid_(std::move(grid)), points_(std::move(points)), derivatives_(std::move(derivatives)) {
  if (points_.size() != grid_.knot_count())
    throw std::invalid_argument("curve has " + std::to_string(points_.size()) + " samples for " +
                                std::to_string(grid_.knot_count()) + " grid knots");
  if (derivatives_ && derivatives_->size() != points_.size())
    throw std::invalid_argument("derivative samples do not match the grid");
  for (const auto& p : points_)
    if (!is_finite(p)) throw std::invalid_argument("curve sample is not finite");
}

std::span<const Vec3> SampledCurve::derivatives() const {
  if (!derivatives_) throw std::invalid_argument("curve carries no derivative samples");
  return *derivatives_;
}

Point SampledCurve::evaluate(double t) const {
  const auto knots = grid_.knots();
  if (!(t >= knots.front() && t <= knots.back()))
    throw std::domain_error("parameter " + std::to_string(t) + " outside the curve interval");
  auto it = std::lower_bound(knots.begin(), knots.end(), t);
  const auto j = static_cast<std::size_t>(it - knots.begin());
  if (knots[j] == t) return points_[j];
  const double w = (t - knots[j - 1]) / (knots[j] - knots[j - 1]);
  const Point& p = points_[j - 1];
  const Point& q = points_[j];
  return {p.x + w * (q.x - p.x), p.y + w * (q.y - p.y), p.z + w * (q.z - p.z)};
}

CurveFn SampledCurve::evaluator() const {
  return [curve = *this](double t) { return curve.evaluate(t); };
}

SampledCurve sample_curve(const CurveFn& fn, const Partition& grid) {
  std::vector<Point> points;
  points.reserve(grid.knot_count());
  for (double t : grid.knots()) {
    Point p = fn(t);
    if (!is_finite(p)) throw EvaluationError("curve evaluator returned a non-finite point at t = " + std::to_string(t));
    points.push_back(p);
  }
  return SampledCurve(grid, std::move(points));
}

}  // namespace heisgeo
