#include "heisgeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace heisgeo::kernels {

double ordered_sum(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

namespace {

double incident_length(std::span<const Point> v, std::size_t i, const Point& candidate, const Metric& metric) {
  return metric(v[i - 1], candidate) + metric(candidate, v[i + 1]);
}

double pair_ratio(std::span<const Point> points, std::span<const double> params, std::size_t i, std::size_t j,
                  const Metric& metric) {
  const double dt = std::abs(params[j] - params[i]);
  return metric(points[i], points[j]) / dt;
}

}  // namespace

bool relax_vertex(std::span<Point> vertices, std::size_t i, double step, const Metric& metric) {
  // Vertical moves use step^2 so that both directions have comparable
  // Koranyi size under dilation.
  const double steps[3] = {step, step, step * step};
  Point best = vertices[i];
  double best_len = incident_length(vertices, i, best, metric);
  bool moved = false;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {+1, -1}) {
      Point trial = best;
      double& coord = axis == 0 ? trial.x : axis == 1 ? trial.y : trial.z;
      coord += sign * steps[axis];
      const double len = incident_length(vertices, i, trial, metric);
      if (len < best_len) {
        best_len = len;
        best = trial;
        moved = true;
        break;
      }
    }
  }
  if (moved) vertices[i] = best;
  return moved;
}

namespace serial {

std::vector<double> segment_distances(std::span<const Point> points, const Metric& metric) {
  std::vector<double> out(points.size() > 0 ? points.size() - 1 : 0);
  for (std::size_t i = 1; i < points.size(); ++i) out[i - 1] = metric(points[i - 1], points[i]);
  return out;
}

double polygonal_sum(std::span<const Point> points, const Metric& metric) {
  double sum = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) sum += metric(points[i - 1], points[i]);
  return sum;
}

double max_lipschitz_ratio(std::span<const Point> points, std::span<const double> params, const Metric& metric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) worst = std::max(worst, pair_ratio(points, params, i, j, metric));
  return worst;
}

std::size_t relax_parity(std::span<Point> vertices, int parity, double step, const Metric& metric) {
  std::size_t moved = 0;
  const std::size_t first = parity == 1 ? 1 : 2;
  for (std::size_t i = first; i + 1 < vertices.size(); i += 2)
    if (relax_vertex(vertices, i, step, metric)) ++moved;
  return moved;
}

}  // namespace serial

namespace omp {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> segment_distances(std::span<const Point> points, const Metric& metric) {
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<double> out(n > 0 ? static_cast<std::size_t>(n - 1) : 0);
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 1; i < n; ++i) {
    slot.run([&] { out[i - 1] = metric(points[i - 1], points[i]); });
  }
  slot.rethrow();
  return out;
}

double polygonal_sum(std::span<const Point> points, const Metric& metric) {
  // Summed afterwards in index order: bit-identical to the serial kernel.
  const auto d = segment_distances(points, metric);
  return ordered_sum(d);
}

double max_lipschitz_ratio(std::span<const Point> points, std::span<const double> params, const Metric& metric) {
  const auto n = static_cast<std::int64_t>(points.size());
  double worst = 0.0;
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : worst)
  for (std::int64_t i = 0; i < n; ++i) {
    slot.run([&] {
      for (std::int64_t j = i + 1; j < n; ++j)
        worst = std::max(worst, pair_ratio(points, params, static_cast<std::size_t>(i), static_cast<std::size_t>(j), metric));
    });
  }
  slot.rethrow();
  return worst;
}

std::size_t relax_parity(std::span<Point> vertices, int parity, double step, const Metric& metric) {
  // Vertices of one parity only see neighbours of the other parity, so the
  // updates are independent and match the serial sweep exactly.
  const auto first = static_cast<std::int64_t>(parity == 1 ? 1 : 2);
  const auto n = static_cast<std::int64_t>(vertices.size());
  std::int64_t moved = 0;
  ExceptionSlot slot;
#pragma omp parallel for schedule(static) reduction(+ : moved)
  for (std::int64_t i = first; i < n - 1; i += 2) {
    slot.run([&] {
      if (relax_vertex(vertices, static_cast<std::size_t>(i), step, metric)) ++moved;
    });
  }
  slot.rethrow();
  return static_cast<std::size_t>(moved);
}

}  // namespace omp

}  // namespace heisgeo::kernels
