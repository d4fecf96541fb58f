#include "heisgeo/geodesic_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heisgeo/heisenberg.hpp"
#include "heisgeo/kernels.hpp"

namespace heisgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sup_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Jacobian of the endpoint residual with respect to the controls, rows
/// (r1, r2, r3), columns (lambda1..., lambda2...).
std::array<std::vector<double>, 3> residual_jacobian(const HorizontalControlCurve& c, const std::vector<Point>& s,
                                                     const Point& target) {
  const std::size_t n = c.steps();
  const double dt = c.dt();
  std::array<std::vector<double>, 3> jac;
  for (auto& row : jac) row.assign(2 * n, 0.0);
  const Point& end = s[n];
  for (std::size_t k = 0; k < n; ++k) {
    jac[0][k] = dt;
    jac[1][n + k] = dt;
    jac[2][k] = 2.0 * dt * (s[k].y + s[k + 1].y - end.y) - 2.0 * target.y * dt;
    jac[2][n + k] = -2.0 * dt * (s[k].x + s[k + 1].x - end.x) + 2.0 * target.x * dt;
  }
  return jac;
}

bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3>& b) {
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0 || !std::isfinite(a[piv][col])) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  for (int col = 2; col >= 0; --col) {
    for (int k = col + 1; k < 3; ++k) b[col] -= a[col][k] * b[k];
    b[col] /= a[col][col];
  }
  return true;
}

double residual_size(const Vec3& r) { return koranyi_norm({r.x, r.y, r.z}); }

/// Koranyi size of the problem, used to scale tolerances.
double problem_scale(const Point& p, const Point& q) {
  return 1.0 + koranyi_distance(p, q) + koranyi_norm(p) + koranyi_norm(q);
}

bool inside_ball(const std::vector<Point>& states, const Point& center, double radius) {
  if (!std::isfinite(radius)) return true;
  for (const Point& s : states)
    if (!(euclidean_norm(s - center) <= radius)) return false;
  return true;
}

struct InnerResult {
  int iterations = 0;
  bool converged = false;
};

/// L-BFGS with Armijo backtracking on the penalized objective. Iterates whose
/// states leave the search ball are rejected.
InnerResult minimize_inner(HorizontalControlCurve& curve, const PenaltyObjective& objective, double radius,
                           const SolverConfig& config) {
  const std::size_t n = curve.steps();
  const std::size_t dim = 2 * n;
  const double dt = curve.dt();
  constexpr std::size_t kMemory = 12;

  auto load = [&](const std::vector<double>& x, HorizontalControlCurve& c) {
    auto l1 = c.lambda1_mut();
    auto l2 = c.lambda2_mut();
    for (std::size_t i = 0; i < n; ++i) {
      l1[i] = x[i];
      l2[i] = x[n + i];
    }
  };

  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = curve.lambda1()[i];
    x[n + i] = curve.lambda2()[i];
  }
  std::vector<double> g;
  double f = objective.evaluate(curve, &g);

  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::deque<double> rho_hist;
  InnerResult result;
  HorizontalControlCurve trial = curve;
  std::vector<double> x_new(dim);
  std::vector<double> g_new;
  std::vector<double> dir(dim);
  int stalled = 0;

  for (int it = 0; it < config.max_inner_iterations; ++it) {
    if (sup_norm(g) / dt <= config.gradient_tolerance) {
      result.converged = true;
      break;
    }
    // Two-loop recursion.
    dir = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t j = s_hist.size(); j-- > 0;) {
      alpha[j] = rho_hist[j] * dot(s_hist[j], dir);
      for (std::size_t i = 0; i < dim; ++i) dir[i] -= alpha[j] * y_hist[j][i];
    }
    double gamma = 0.5 / dt;  // inverse Hessian of the energy term
    if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (double& d : dir) d *= gamma;
    for (std::size_t j = 0; j < s_hist.size(); ++j) {
      const double beta = rho_hist[j] * dot(y_hist[j], dir);
      for (std::size_t i = 0; i < dim; ++i) dir[i] += (alpha[j] - beta) * s_hist[j][i];
    }
    for (double& d : dir) d = -d;
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < dim; ++i) dir[i] = -g[i] * (0.5 / dt);
      slope = dot(g, dir);
    }

    double step = 1.0;
    double f_new = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + step * dir[i];
      load(x_new, trial);
      if (inside_ball(trial.states(), trial.start(), radius)) {
        f_new = objective.evaluate(trial, &g_new);
        if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    ++result.iterations;
    if (!accepted) break;

    std::vector<double> s(dim);
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double decrease = f - f_new;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    if (decrease <= 1e-16 * std::max(1.0, std::abs(f))) {
      if (++stalled >= 3) {
        result.converged = true;
        break;
      }
    } else {
      stalled = 0;
    }
  }
  load(x, curve);
  return result;
}

std::vector<double> smooth_noise(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 3> coeff{};
  for (std::size_t m = 0; m < coeff.size(); ++m) coeff[m] = normal(rng) / static_cast<double>(m + 1);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double v = 0.0;
    for (std::size_t m = 0; m < coeff.size(); ++m) v += coeff[m] * std::sin(std::numbers::pi * static_cast<double>(m + 1) * t);
    out[i] = v;
  }
  return out;
}

double feasibility_tolerance(const Point& p, const Point& q, const SolverConfig& config) {
  return config.endpoint_tolerance * problem_scale(p, q);
}

SolveReport run_single(const Point& target, HorizontalControlCurve curve, const SolverConfig& config) {
  const Point start = curve.start();
  SolveReport report;
  report.start = start;
  report.target = target;
  const double tol = feasibility_tolerance(start, target, config);

  HorizontalControlCurve best = curve;
  double incumbent = kInf;
  if (koranyi_distance(best.endpoint(), target) > tol) project_to_endpoint(best, target);
  if (koranyi_distance(best.endpoint(), target) <= tol) {
    incumbent = best.length();
    curve = best;
  }
  report.search_radius = std::isfinite(incumbent) ? escape_radius(start, std::max(incumbent, 1e-300)) : kInf;
  report.trace.push_back(incumbent);

  PenaltyObjective objective{target, config.penalty_initial, {}};
  double previous_feasible = incumbent;
  bool settled = false;
  for (int outer = 0; outer < config.max_outer_iterations; ++outer) {
    const InnerResult inner = minimize_inner(curve, objective, report.search_radius, config);
    report.iterations += inner.iterations;

    TraceEntry entry;
    entry.outer = outer;
    entry.penalty = objective.penalty;
    entry.raw_length = curve.length();
    entry.penalty_update = true;

    HorizontalControlCurve feasible = curve;
    double feasible_length = kNaN;
    if (project_to_endpoint(feasible, target) && koranyi_distance(feasible.endpoint(), target) <= tol &&
        inside_ball(feasible.states(), start, report.search_radius)) {
      feasible_length = feasible.length();
      if (feasible_length < incumbent) {
        incumbent = feasible_length;
        best = feasible;
      }
    }
    entry.feasible_length = feasible_length;
    entry.incumbent = incumbent;
    report.details.push_back(entry);
    report.trace.push_back(incumbent);

    const Vec3 r = endpoint_residual(curve.endpoint(), target);
    const double raw_miss = koranyi_distance(curve.endpoint(), target);
    objective.multiplier = {objective.multiplier.x + objective.penalty * r.x,
                            objective.multiplier.y + objective.penalty * r.y,
                            objective.multiplier.z + objective.penalty * r.z};
    const bool stable = std::isfinite(feasible_length) && std::isfinite(previous_feasible) &&
                        std::abs(feasible_length - previous_feasible) <= config.length_tolerance * feasible_length;
    previous_feasible = feasible_length;
    if (inner.converged && raw_miss <= tol && stable) {
      settled = true;
      break;
    }
    if (!std::isfinite(feasible_length) && std::isfinite(incumbent)) curve = best;
    objective.penalty = std::min(objective.penalty * config.penalty_factor, config.penalty_max);
  }

  report.curve = best;
  report.length = std::isfinite(incumbent) ? incumbent : best.length();
  report.endpoint_miss = koranyi_distance(best.endpoint(), target);
  report.converged = settled && report.endpoint_miss <= tol;
  return report;
}

}  // namespace

HorizontalControlCurve::HorizontalControlCurve(Point start, std::vector<double> lambda1, std::vector<double> lambda2)
    : start_(start), lambda1_(std::move(lambda1)), lambda2_(std::move(lambda2)) {
  if (lambda1_.size() != lambda2_.size()) throw std::invalid_argument("control arrays differ in length");
  if (lambda1_.empty()) throw std::invalid_argument("control curve needs at least one step");
  if (!is_finite(start_)) throw std::invalid_argument("control curve start is not finite");
}

HorizontalControlCurve HorizontalControlCurve::constant(Point start, std::size_t steps) {
  return HorizontalControlCurve(start, std::vector<double>(steps, 0.0), std::vector<double>(steps, 0.0));
}

std::vector<Point> HorizontalControlCurve::states() const {
  const std::size_t n = steps();
  const double h = dt();
  std::vector<Point> s(n + 1);
  s[0] = start_;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& c = s[i];
    s[i + 1] = {c.x + lambda1_[i] * h, c.y + lambda2_[i] * h, c.z - 2.0 * (c.x * lambda2_[i] - c.y * lambda1_[i]) * h};
  }
  return s;
}

Point HorizontalControlCurve::endpoint() const { return states().back(); }

double HorizontalControlCurve::length() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < steps(); ++i) sum += std::hypot(lambda1_[i], lambda2_[i]);
  return sum * dt();
}

double HorizontalControlCurve::energy() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < steps(); ++i) sum += lambda1_[i] * lambda1_[i] + lambda2_[i] * lambda2_[i];
  return sum * dt();
}

namespace {

Point evaluate_on(const HorizontalControlCurve& c, const std::vector<Point>& s, double t) {
  const std::size_t n = c.steps();
  const double h = c.dt();
  const auto i = std::min(static_cast<std::size_t>(std::max(t, 0.0) * static_cast<double>(n)), n - 1);
  const double tau = t - static_cast<double>(i) * h;
  const Point& base = s[i];
  const double l1 = c.lambda1()[i];
  const double l2 = c.lambda2()[i];
  if (tau == h) return s[i + 1];
  return {base.x + l1 * tau, base.y + l2 * tau, base.z - 2.0 * (base.x * l2 - base.y * l1) * tau};
}

}  // namespace

Point HorizontalControlCurve::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("control curve is defined on [0, 1]");
  return evaluate_on(*this, states(), t);
}

SampledCurve HorizontalControlCurve::to_sampled_curve(std::size_t samples) const {
  const Partition grid = Partition::uniform(0.0, 1.0, samples);
  const auto s = states();
  const std::size_t n = steps();
  std::vector<Point> pts;
  std::vector<Vec3> der;
  pts.reserve(grid.knot_count());
  der.reserve(grid.knot_count());
  for (double t : grid.knots()) {
    const Point p = evaluate_on(*this, s, t);
    const auto i = std::min(static_cast<std::size_t>(t * static_cast<double>(n)), n - 1);
    const double l1 = lambda1_[i];
    const double l2 = lambda2_[i];
    pts.push_back(p);
    der.push_back({l1, l2, -2.0 * (p.x * l2 - p.y * l1)});
  }
  return SampledCurve(grid, std::move(pts), std::move(der));
}

HorizontalControlCurve HorizontalControlCurve::upsampled(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("upsampling factor must be positive");
  std::vector<double> l1;
  std::vector<double> l2;
  for (std::size_t i = 0; i < steps(); ++i)
    for (std::size_t k = 0; k < factor; ++k) {
      l1.push_back(lambda1_[i]);
      l2.push_back(lambda2_[i]);
    }
  return HorizontalControlCurve(start_, std::move(l1), std::move(l2));
}

double cc_length(const HorizontalControlCurve& curve) { return curve.length(); }

Vec3 endpoint_residual(const Point& endpoint, const Point& target) {
  const Point r = group_multiply(group_inverse(target), endpoint);
  return {r.x, r.y, r.z};
}

HorizontalControlCurve initial_feasible_curve(const Point& p, const Point& q, std::size_t steps) {
  if (steps < 4) throw std::invalid_argument("initial feasible curve needs at least 4 steps");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double planar = std::hypot(dx, dy);
  // Height reached by lifting the planar segment; the loop closes the rest.
  const double z_segment = p.z - 2.0 * (p.x * q.y - p.y * q.x);
  const double gap = q.z - z_segment;
  const double h = 1.0 / static_cast<double>(steps);

  std::vector<double> l1(steps, 0.0);
  std::vector<double> l2(steps, 0.0);
  std::size_t loop_steps = 0;
  if (gap != 0.0) {
    const double loop_length = kTwoPi * std::sqrt(std::abs(gap) / (4.0 * std::numbers::pi));
    const double share = loop_length / (planar + loop_length);
    const std::size_t max_loop = planar > 0.0 ? steps - 1 : steps;
    loop_steps = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(share * static_cast<double>(steps))),
                                         3, max_loop);
  }
  const std::size_t segment_steps = steps - loop_steps;
  for (std::size_t i = 0; i < segment_steps; ++i) {
    l1[i] = dx / (static_cast<double>(segment_steps) * h);
    l2[i] = dy / (static_cast<double>(segment_steps) * h);
  }
  if (loop_steps > 0) {
    // Regular polygon through the planar endpoint; its signed area A adds
    // -4 A to the height, so the orientation opposes the sign of the gap.
    const auto m = static_cast<double>(loop_steps);
    const double radius = std::sqrt(std::abs(gap) / (2.0 * m * std::sin(kTwoPi / m)));
    const double orient = gap > 0.0 ? -1.0 : 1.0;
    const double theta0 = planar > 0.0 ? std::atan2(dx, -dy) : 0.0;  // centre off to the side of the segment
    const double cx = q.x - radius * std::cos(theta0);
    const double cy = q.y - radius * std::sin(theta0);
    auto vertex = [&](std::size_t j) {
      if (j == 0 || j == loop_steps) return std::array<double, 2>{q.x, q.y};
      const double a = theta0 + orient * kTwoPi * static_cast<double>(j) / m;
      return std::array<double, 2>{cx + radius * std::cos(a), cy + radius * std::sin(a)};
    };
    for (std::size_t j = 0; j < loop_steps; ++j) {
      const auto a = vertex(j);
      const auto b = vertex(j + 1);
      l1[segment_steps + j] = (b[0] - a[0]) / h;
      l2[segment_steps + j] = (b[1] - a[1]) / h;
    }
  }
  HorizontalControlCurve curve(p, std::move(l1), std::move(l2));
  project_to_endpoint(curve, q, 5);
  return curve;
}

bool project_to_endpoint(HorizontalControlCurve& curve, const Point& target, int max_iterations) {
  const std::size_t n = curve.steps();
  HorizontalControlCurve work = curve;
  auto states = work.states();
  Vec3 r = endpoint_residual(states.back(), target);
  double size = residual_size(r);
  const double scale = problem_scale(curve.start(), target);
  const double floor = 1e-12 * scale;

  for (int it = 0; it < max_iterations && size > floor; ++it) {
    const auto jac = residual_jacobian(work, states, target);
    std::array<std::array<double, 3>, 3> gram{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) gram[a][b] = dot(jac[a], jac[b]);
    std::array<double, 3> w{r.x, r.y, r.z};
    if (!solve3(gram, w)) return false;

    // Damped minimum-norm Newton step.
    bool improved = false;
    for (double step = 1.0; step > 1e-4; step *= 0.5) {
      HorizontalControlCurve trial = work;
      auto l1 = trial.lambda1_mut();
      auto l2 = trial.lambda2_mut();
      for (std::size_t k = 0; k < n; ++k) {
        l1[k] -= step * (jac[0][k] * w[0] + jac[1][k] * w[1] + jac[2][k] * w[2]);
        l2[k] -= step * (jac[0][n + k] * w[0] + jac[1][n + k] * w[1] + jac[2][n + k] * w[2]);
      }
      auto trial_states = trial.states();
      const Vec3 tr = endpoint_residual(trial_states.back(), target);
      const double tsize = residual_size(tr);
      if (tsize < size) {
        work = std::move(trial);
        states = std::move(trial_states);
        r = tr;
        size = tsize;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(size <= 1e-7 * scale)) return false;
  curve = std::move(work);
  return true;
}

double PenaltyObjective::evaluate(const HorizontalControlCurve& curve, std::vector<double>* gradient) const {
  const std::size_t n = curve.steps();
  const double dt = curve.dt();
  const auto states = curve.states();
  const Vec3 r = endpoint_residual(states.back(), target);
  const double value = curve.energy() + multiplier.x * r.x + multiplier.y * r.y + multiplier.z * r.z +
                       0.5 * penalty * (r.x * r.x + r.y * r.y + r.z * r.z);
  if (gradient) {
    const auto jac = residual_jacobian(curve, states, target);
    const double w0 = multiplier.x + penalty * r.x;
    const double w1 = multiplier.y + penalty * r.y;
    const double w2 = multiplier.z + penalty * r.z;
    gradient->assign(2 * n, 0.0);
    auto& g = *gradient;
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = 2.0 * curve.lambda1()[k] * dt + w0 * jac[0][k] + w1 * jac[1][k] + w2 * jac[2][k];
      g[n + k] = 2.0 * curve.lambda2()[k] * dt + w0 * jac[0][n + k] + w1 * jac[1][n + k] + w2 * jac[2][n + k];
    }
  }
  return value;
}

SolveReport solve_cc_geodesic(const Point& p, const Point& q, std::size_t steps, const SolverConfig& config) {
  if (steps < 8) throw std::invalid_argument("geodesic solver needs at least 8 steps");
  if (p == q) {
    SolveReport report;
    report.start = p;
    report.target = q;
    report.curve = HorizontalControlCurve::constant(p, steps);
    report.trace = {0.0};
    report.converged = true;
    report.restart_lengths = {0.0};
    return report;
  }

  const HorizontalControlCurve base = initial_feasible_curve(p, q, steps);
  const double base_length = base.length();
  const std::size_t restarts = std::max<std::size_t>(1, config.restarts);
  std::vector<SolveReport> reports(restarts);

  auto run_restart = [&](std::size_t k) {
    HorizontalControlCurve start_curve = base;
    if (k > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      const auto n1 = smooth_noise(steps, rng);
      const auto n2 = smooth_noise(steps, rng);
      const double amp = config.perturbation * base_length;
      auto l1 = start_curve.lambda1_mut();
      auto l2 = start_curve.lambda2_mut();
      for (std::size_t i = 0; i < steps; ++i) {
        l1[i] += amp * n1[i];
        l2[i] += amp * n2[i];
      }
      if (!project_to_endpoint(start_curve, q)) start_curve = base;
    }
    reports[k] = run_single(q, std::move(start_curve), config);
  };

  if (config.parallel) {
    kernels::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(restarts); ++k)
      slot.run([&] { run_restart(static_cast<std::size_t>(k)); });
    slot.rethrow();
  } else {
    for (std::size_t k = 0; k < restarts; ++k) run_restart(k);
  }

  // Deterministic merge: shortest admissible length, ties by restart index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < restarts; ++k) {
    const bool ok_k = reports[k].converged || reports[k].endpoint_miss <= feasibility_tolerance(p, q, config);
    const bool ok_b = reports[best].converged || reports[best].endpoint_miss <= feasibility_tolerance(p, q, config);
    if ((ok_k && !ok_b) || (ok_k == ok_b && reports[k].length < reports[best].length)) best = k;
  }
  SolveReport out = reports[best];
  out.best_restart = best;
  out.restart_lengths.clear();
  for (const auto& r : reports) out.restart_lengths.push_back(r.length);
  return out;
}

SolveReport solve_cc_geodesic_from(const Point& target, HorizontalControlCurve initial, const SolverConfig& config) {
  SolveReport report = run_single(target, std::move(initial), config);
  report.restart_lengths = {report.length};
  return report;
}

RefinementComparison refine_and_compare(const SolveReport& report, std::size_t factor, const SolverConfig& config) {
  if (factor < 2) throw std::invalid_argument("refinement factor must be at least 2");
  RefinementComparison cmp;
  cmp.coarse_steps = report.curve.steps();
  cmp.refined_steps = cmp.coarse_steps * factor;
  cmp.coarse_length = report.length;
  cmp.refined = solve_cc_geodesic_from(report.target, report.curve.upsampled(factor), config);
  cmp.refined_length = cmp.refined.length;
  cmp.trace = report.trace;
  cmp.trace.insert(cmp.trace.end(), cmp.refined.trace.begin(), cmp.refined.trace.end());
  cmp.not_longer = cmp.refined_length <= cmp.coarse_length + 1e-6;
  cmp.trace_nonincreasing = true;
  for (std::size_t i = 1; i < cmp.trace.size(); ++i)
    if (cmp.trace[i] > cmp.trace[i - 1] + 1e-12 * std::abs(cmp.trace[i - 1])) cmp.trace_nonincreasing = false;
  return cmp;
}

PolylineResult solve_koranyi_polyline(const Point& p, const Point& q, std::size_t vertex_count,
                                      const PolylineConfig& config) {
  if (vertex_count < 2) throw std::invalid_argument("polyline needs at least two vertices");
  const Metric metric = koranyi_metric();
  PolylineResult result;
  if (vertex_count == 2 || p == q) {
    result.vertices.assign(vertex_count, p);
    result.vertices.back() = q;
    if (p == q) std::fill(result.vertices.begin(), result.vertices.end(), p);
    result.length = kernels::serial::polygonal_sum(result.vertices, metric);
    result.converged = true;
    result.restart_lengths = {result.length};
    return result;
  }

  // Seed vertices on a horizontal curve from p to q. Restarts perturb the
  // seed curve's controls smoothly and re-close it on q.
  const std::size_t seed_steps = std::max<std::size_t>(8, 4 * (vertex_count - 1));
  const HorizontalControlCurve seed_curve = initial_feasible_curve(p, q, seed_steps);
  const auto sample_vertices = [&](const HorizontalControlCurve& c) {
    const auto states = c.states();
    std::vector<Point> v(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i)
      v[i] = evaluate_on(c, states, static_cast<double>(i) / static_cast<double>(vertex_count - 1));
    v.front() = p;
    v.back() = q;
    return v;
  };
  const std::vector<Point> base = sample_vertices(seed_curve);
  const double base_length = kernels::serial::polygonal_sum(base, metric);

  const std::size_t restarts = std::max<std::size_t>(1, config.restarts);
  std::vector<PolylineResult> runs(restarts);
  for (std::size_t k = 0; k < restarts; ++k) {
    std::vector<Point> v = base;
    if (k > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(k), 0x9e37u};
      std::mt19937_64 rng(seq);
      HorizontalControlCurve c = seed_curve;
      const auto n1 = smooth_noise(seed_steps, rng);
      const auto n2 = smooth_noise(seed_steps, rng);
      const double amp = config.perturbation * seed_curve.length();
      for (std::size_t i = 0; i < seed_steps; ++i) {
        c.lambda1_mut()[i] += amp * n1[i];
        c.lambda2_mut()[i] += amp * n2[i];
      }
      if (project_to_endpoint(c, q)) v = sample_vertices(c);
    }
    double step = 0.5 * base_length / static_cast<double>(vertex_count - 1);
    const double min_step = config.min_step * base_length;
    std::size_t sweeps = 0;
    bool converged = false;
    double current = kernels::serial::polygonal_sum(v, metric);
    while (sweeps < config.max_sweeps) {
      std::size_t moved = 0;
      for (int parity : {1, 0}) {
        moved += config.parallel ? kernels::omp::relax_parity(v, parity, step, metric)
                                 : kernels::serial::relax_parity(v, parity, step, metric);
      }
      ++sweeps;
      const double next = kernels::serial::polygonal_sum(v, metric);
      const double gain = current - next;
      current = next;
      // A sweep that gains less than a small fraction of the step length is
      // treated as stalled at this resolution.
      if (moved == 0 || gain < config.stall_fraction * step) {
        step *= 0.5;
        if (step < min_step) {
          converged = true;
          break;
        }
      }
    }
    runs[k].vertices = std::move(v);
    runs[k].length = kernels::serial::polygonal_sum(runs[k].vertices, metric);
    runs[k].converged = converged;
    runs[k].sweeps = sweeps;
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < restarts; ++k)
    if (runs[k].length < runs[best].length) best = k;
  result = runs[best];
  result.best_restart = best;
  for (const auto& r : runs) result.restart_lengths.push_back(r.length);
  return result;
}

}  // namespace heisgeo
