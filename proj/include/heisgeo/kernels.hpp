#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP variant in kernels::omp with identical
// results: parallel loops only fill per-index slots, and reductions are
// either exact (max, integer counts) or performed afterwards in ascending
// index order.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "heisgeo/types.hpp"

namespace heisgeo::kernels {

/// Sum in ascending index order.
double ordered_sum(std::span<const double> values);

/// One compass-search move for a single polyline vertex: tries +-step along
/// each coordinate and keeps any move that shortens the two incident edges.
/// Returns true if the vertex moved.
bool relax_vertex(std::span<Point> vertices, std::size_t i, double step, const Metric& metric);

namespace serial {

/// d(x_{i-1}, x_i) for i = 1..n-1.
std::vector<double> segment_distances(std::span<const Point> points, const Metric& metric);

/// Polygonal length of a point chain, summed in ascending order.
double polygonal_sum(std::span<const Point> points, const Metric& metric);

/// max over i < j of d(x_i, x_j) / |s_i - s_j|.
double max_lipschitz_ratio(std::span<const Point> points, std::span<const double> params,
                           const Metric& metric);

/// Relaxes every interior vertex with index parity `parity` (1 = odd).
/// Returns the number of vertices that moved.
std::size_t relax_parity(std::span<Point> vertices, int parity, double step, const Metric& metric);

}  // namespace serial

namespace omp {

std::vector<double> segment_distances(std::span<const Point> points, const Metric& metric);
double polygonal_sum(std::span<const Point> points, const Metric& metric);
double max_lipschitz_ratio(std::span<const Point> points, std::span<const double> params,
                           const Metric& metric);
std::size_t relax_parity(std::span<Point> vertices, int parity, double step, const Metric& metric);

int max_threads();

}  // namespace omp

/// Collects the first exception thrown inside a parallel region so it can be
/// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace heisgeo::kernels
