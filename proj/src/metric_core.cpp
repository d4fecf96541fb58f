#include "heisgeo/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heisgeo/kernels.hpp"

namespace heisgeo {

double euclidean_distance(const Point& p, const Point& q) { return euclidean_norm(p - q); }

Metric euclidean_metric() { return [](const Point& p, const Point& q) { return euclidean_distance(p, q); }; }

double polygonal_length(const SampledCurve& curve, const Metric& metric, const Partition& partition) {
  return polygonal_length(curve, metric, partition.knots());
}

double polygonal_length(const SampledCurve& curve, const Metric& metric) {
  return kernels::omp::polygonal_sum(curve.points(), metric);
}

double polygonal_length(const SampledCurve& curve, const Metric& metric, std::span<const double> knots) {
  if (knots.size() < 2) throw std::invalid_argument("polygonal length needs at least two knots");
  std::vector<Point> images;
  images.reserve(knots.size());
  for (double t : knots) {
    if (!(t >= curve.a() && t <= curve.b()))
      throw std::domain_error("partition knot " + std::to_string(t) + " outside the curve interval");
    images.push_back(curve.evaluate(t));
  }
  return kernels::omp::polygonal_sum(images, metric);
}

namespace {

Point checked_eval(const CurveFn& curve, double t) {
  Point p = curve(t);
  if (!is_finite(p)) throw EvaluationError("curve evaluator returned a non-finite point at t = " + std::to_string(t));
  return p;
}

}  // namespace

LengthReport curve_length(const CurveFn& curve, double a, double b, const Metric& metric,
                          const LengthOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("length tolerance must be positive");
  if (options.max_levels < 1) throw std::invalid_argument("max_levels must be at least 1");
  if (!(b > a)) throw std::invalid_argument("curve interval must satisfy b > a");

  LengthReport report;
  std::vector<Point> images{checked_eval(curve, a), checked_eval(curve, b)};
  double value = metric(images[0], images[1]);
  report.level_values.push_back(value);

  const double width = b - a;
  for (int level = 1; level <= options.max_levels; ++level) {
    // Level k knots are a + width * i / 2^k; the previous level's knots are
    // the even indices, so only midpoints are evaluated.
    const std::size_t segments = std::size_t{1} << level;
    const double inv = 1.0 / static_cast<double>(segments);
    std::vector<Point> next(segments + 1);
    for (std::size_t i = 0; i + 1 < images.size(); ++i) {
      next[2 * i] = images[i];
      next[2 * i + 1] = checked_eval(curve, a + width * (static_cast<double>(2 * i + 1) * inv));
    }
    next[segments] = images.back();
    images = std::move(next);

    const double sum = kernels::omp::polygonal_sum(images, metric);
    report.level_values.push_back(sum);
    report.last_increment = sum - value;
    // Refinement cannot shorten a polygonal sum; clamp rounding noise.
    value = std::max(value, sum);
    report.levels = level;
    if (level >= options.min_levels && report.last_increment < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  report.value = value;
  return report;
}

LengthProfile length_profile(const SampledCurve& curve, const Metric& metric) {
  const auto d = kernels::omp::segment_distances(curve.points(), metric);
  std::vector<double> values(curve.sample_count());
  values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    acc += d[i];
    values[i + 1] = acc;
  }
  return {curve.grid(), std::move(values)};
}

SampledCurve arclength_reparametrize(const SampledCurve& curve, const Metric& metric) {
  const LengthProfile profile = length_profile(curve, metric);
  const double total = profile.total();
  const auto points = curve.points();
  if (total == 0.0) return SampledCurve(Partition({0.0, 1.0}), {points.front(), points.back()});

  std::vector<double> grid{0.0};
  std::vector<Point> samples{points.front()};
  const std::size_t last = points.size() - 1;
  double kept_value = 0.0;
  for (std::size_t i = 1; i < last; ++i) {
    // On a flat stretch of the profile the curve is constant; the first
    // preimage is kept. A stretch reaching the full length is represented by
    // the original endpoint below.
    if (profile.values[i] == kept_value) continue;
    const double s = profile.values[i] / total;
    if (!(s > grid.back()) || !(s < 1.0)) continue;
    kept_value = profile.values[i];
    grid.push_back(s);
    samples.push_back(points[i]);
  }
  grid.push_back(1.0);
  samples.push_back(points[last]);
  return SampledCurve(Partition(std::move(grid)), std::move(samples));
}

SampledCurve linear_reparametrize(const SampledCurve& curve, double c, double d) {
  if (!(d > c) || !std::isfinite(c) || !std::isfinite(d))
    throw std::invalid_argument("target interval must satisfy d > c");
  const double a = curve.a();
  const double b = curve.b();
  const double scale = (d - c) / (b - a);
  const auto knots = curve.grid().knots();
  std::vector<double> mapped(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) mapped[i] = c + (knots[i] - a) * scale;
  mapped.front() = c;
  mapped.back() = d;

  std::optional<std::vector<Vec3>> derivs;
  if (curve.has_derivatives()) {
    derivs.emplace();
    for (const Vec3& v : curve.derivatives()) derivs->push_back((1.0 / scale) * v);
  }
  const auto pts = curve.points();
  return SampledCurve(Partition(std::move(mapped)), std::vector<Point>(pts.begin(), pts.end()), std::move(derivs));
}

}  // namespace heisgeo
