#pragma once

// Shortest curves between two points of the Heisenberg group.
//
// Carnot-Caratheodory geodesics are searched over horizontal control curves:
// piecewise constant planar velocities on a uniform grid of [0, 1]. The
// vertical coordinate is reconstructed by exact integration of
// z' = -2 (x y' - y x'), so every candidate is horizontal. Endpoint matching
// is enforced with an augmented-Lagrangian penalty on the group residual
// target^{-1} * gamma(1), and every outer iterate is projected back onto the
// endpoint constraint so that the reported sequence consists of admissible
// curves.
//
// Koranyi-length minimizers are searched over polylines with pinned ends by
// red-black coordinate descent.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heisgeo/types.hpp"

namespace heisgeo {

/// Horizontal curve on [0, 1] encoded by per-step planar velocities.
class HorizontalControlCurve {
 public:
  HorizontalControlCurve() = default;
  HorizontalControlCurve(Point start, std::vector<double> lambda1, std::vector<double> lambda2);

  /// Zero controls: the constant curve at `start`.
  static HorizontalControlCurve constant(Point start, std::size_t steps);

  const Point& start() const { return start_; }
  std::size_t steps() const { return lambda1_.size(); }
  double dt() const { return 1.0 / static_cast<double>(steps()); }
  std::span<const double> lambda1() const { return lambda1_; }
  std::span<const double> lambda2() const { return lambda2_; }
  std::span<double> lambda1_mut() { return lambda1_; }
  std::span<double> lambda2_mut() { return lambda2_; }

  /// States at the N + 1 grid knots.
  std::vector<Point> states() const;
  Point endpoint() const;

  /// sum sqrt(l1^2 + l2^2) dt
  double length() const;
  /// sum (l1^2 + l2^2) dt; equals length()^2 exactly at constant speed.
  double energy() const;

  /// Position at time t in [0, 1]. Inside a step the curve is a horizontal
  /// straight segment.
  Point evaluate(double t) const;

  /// `samples` uniform steps over [0, 1], with the step velocities as
  /// derivative samples (left-continuous at interior knots).
  SampledCurve to_sampled_curve(std::size_t samples) const;

  /// Each control repeated `factor` times: same curve on a finer grid.
  HorizontalControlCurve upsampled(std::size_t factor) const;

 private:
  Point start_;
  std::vector<double> lambda1_;
  std::vector<double> lambda2_;
};

/// Carnot-Caratheodory length of a control curve.
double cc_length(const HorizontalControlCurve& curve);

/// Left-invariant endpoint residual target^{-1} * endpoint as a 3-vector.
Vec3 endpoint_residual(const Point& endpoint, const Point& target);

struct SolverConfig {
  std::size_t restarts = 4;
  std::uint64_t seed = 0x5eed;
  double penalty_initial = 1e2;
  double penalty_factor = 10.0;
  double penalty_max = 1e8;
  int max_outer_iterations = 12;
  int max_inner_iterations = 400;
  /// Inner solve stops once the gradient sup-norm drops below this.
  double gradient_tolerance = 1e-9;
  /// Converged requires d_K(endpoint, target) <= this * (1 + d_K(p, q)).
  double endpoint_tolerance = 1e-6;
  /// Outer loop stops once the feasible length changes by less than this
  /// (relative) between outer iterations.
  double length_tolerance = 1e-9;
  /// Relative amplitude of the seeded perturbation applied to restarts >= 1.
  double perturbation = 0.15;
  bool parallel = true;
};

struct TraceEntry {
  int outer = 0;
  double penalty = 0.0;
  /// Length of the penalized iterate before projection.
  double raw_length = 0.0;
  /// Length after projection onto the endpoint constraint (NaN if the
  /// projection failed).
  double feasible_length = 0.0;
  /// Best admissible length so far.
  double incumbent = 0.0;
  /// First entry after a penalty change.
  bool penalty_update = false;
};

struct SolveReport {
  Point start;
  Point target;
  HorizontalControlCurve curve;
  double length = 0.0;
  double endpoint_miss = 0.0;
  int iterations = 0;
  /// Incumbent length per outer iteration; nonincreasing.
  std::vector<double> trace;
  std::vector<TraceEntry> details;
  bool converged = false;
  /// Euclidean radius around `start` that bounds the search.
  double search_radius = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_lengths;
};

/// Horizontal curve from p to q: planar segment followed by a closed
/// polygonal loop whose enclosed area closes the vertical gap.
/// Requires steps >= 4 (std::invalid_argument): the loop needs three.
HorizontalControlCurve initial_feasible_curve(const Point& p, const Point& q, std::size_t steps);

/// Minimum-norm Gauss-Newton correction of the controls until the endpoint
/// hits `target`. Returns false if it fails to converge.
bool project_to_endpoint(HorizontalControlCurve& curve, const Point& target, int max_iterations = 30);

/// Penalized objective used by the inner solver and its analytic gradient.
/// Exposed for gradient verification.
struct PenaltyObjective {
  Point target;
  double penalty = 1.0;
  Vec3 multiplier{};

  /// energy + multiplier . r + penalty / 2 |r|^2, gradient ordered
  /// (lambda1..., lambda2...).
  double evaluate(const HorizontalControlCurve& curve, std::vector<double>* gradient) const;
};

SolveReport solve_cc_geodesic(const Point& p, const Point& q, std::size_t steps, const SolverConfig& config = {});

/// Single-start solve from given controls (warm start).
SolveReport solve_cc_geodesic_from(const Point& target, HorizontalControlCurve initial,
                                   const SolverConfig& config = {});

struct RefinementComparison {
  std::size_t coarse_steps = 0;
  std::size_t refined_steps = 0;
  double coarse_length = 0.0;
  double refined_length = 0.0;
  /// Coarse trace followed by the refined trace.
  std::vector<double> trace;
  /// refined_length <= coarse_length + 1e-6
  bool not_longer = false;
  bool trace_nonincreasing = false;
  SolveReport refined;
};

/// Re-solves with steps * factor controls, warm-started from the upsampled
/// coarse solution. Throws std::invalid_argument for factor < 2.
RefinementComparison refine_and_compare(const SolveReport& report, std::size_t factor,
                                        const SolverConfig& config = {});

struct PolylineConfig {
  std::size_t restarts = 4;
  std::uint64_t seed = 0x5eed;
  std::size_t max_sweeps = 200000;
  /// Stop once the horizontal step falls below this times the initial length.
  double min_step = 1e-9;
  double perturbation = 0.15;
  /// The step is halved once a sweep shortens the polyline by less than
  /// this times the step.
  double stall_fraction = 1e-2;
  bool parallel = true;
};

struct PolylineResult {
  std::vector<Point> vertices;
  double length = 0.0;
  bool converged = false;
  std::size_t sweeps = 0;
  std::size_t best_restart = 0;
  std::vector<double> restart_lengths;
};

/// Minimizes the Koranyi polygonal length over `vertex_count` vertices with
/// both ends pinned. Throws std::invalid_argument for vertex_count < 2.
PolylineResult solve_koranyi_polyline(const Point& p, const Point& q, std::size_t vertex_count,
                                      const PolylineConfig& config = {});

}  // namespace heisgeo
