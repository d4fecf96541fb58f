#include "heisgeo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "heisgeo/geodesic_solver.hpp"
#include "heisgeo/kernels.hpp"
#include "heisgeo/metric_core.hpp"

namespace heisgeo::verify {

namespace {

constexpr double kPi = std::numbers::pi;

// d_K between the example endpoints: sqrt(1 / (4 pi)).
constexpr double kExampleChord = 0.28209479177387814;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 10) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

class Recorder {
 public:
  Recorder(int criterion, std::vector<CheckResult>& out) : criterion_(criterion), out_(out), t0_(Clock::now()) {}

  void check(std::string name, std::string expected, double got, std::string tolerance, bool pass) {
    out_.push_back({criterion_, std::move(name), std::move(expected), got, std::move(tolerance), pass,
                    seconds_since(lap_)});
    lap_ = Clock::now();
  }

  void near(std::string name, double expected, double got, double tol) {
    check(std::move(name), fmt(expected, 12), got, "+-" + fmt(tol, 3), std::abs(got - expected) <= tol);
  }

  void within(std::string name, double lo, double hi, double got) {
    check(std::move(name), "[" + fmt(lo, 6) + ", " + fmt(hi, 6) + "]", got, "-", got >= lo && got <= hi);
  }

  void at_most(std::string name, double limit, double got) {
    check(std::move(name), "<= " + fmt(limit, 12), got, "-", got <= limit);
  }

  void count_zero(std::string name, std::size_t trials, std::size_t violations) {
    check(std::move(name), "0 of " + std::to_string(trials), static_cast<double>(violations), "exact",
          violations == 0);
  }

  void runtime(double limit) {
    const double s = seconds_since(t0_);
    out_.push_back({criterion_, "runtime [s]", "< " + fmt(limit, 3), s, "-", s < limit, 0.0});
  }

 private:
  int criterion_;
  std::vector<CheckResult>& out_;
  Clock::time_point t0_;
  Clock::time_point lap_ = Clock::now();
};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

Point uniform_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng), y = u(rng), z = u(rng);
  return {x, y, z};
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min()); }

// 1. Example curve: Koranyi length equals cc length and exceeds the chord.
void non_length_space(Recorder& rec) {
  LengthOptions opt;
  opt.tolerance = 1e-5;
  opt.max_levels = 15;  // 2^15 + 1 knots
  const auto report = curve_length(example_geodesic, 0.0, 1.0, koranyi_metric(), opt);
  rec.check("L_K converged within 2^16 knots", "true", report.converged ? 1.0 : 0.0, "-", report.converged);
  rec.near("L_K of example curve", 0.5, report.value, 1e-3);
  const double lcc = cc_length(example_geodesic_curve(4096));
  rec.near("L_cc of example curve", 0.5, lcc, 1e-9);
  const double chord = koranyi_distance(example_geodesic(0.0), example_geodesic(1.0));
  rec.near("d_K(endpoints)", kExampleChord, chord, 1e-9);
  rec.check("L_K > d_K(endpoints)", "> " + fmt(chord, 10), report.value, "strict", report.value > chord);
  rec.runtime(5.0);
}

// 2. Koranyi polygonal length of horizontal lifts converges to L_cc.
void length_equality(Recorder& rec, std::uint64_t seed) {
  const auto family = trig_family(20, seed);
  const std::array<std::size_t, 4> samples{512, 1024, 2048, 4096};
  double worst_final = 0.0;
  double worst_ratio = 0.0;
  for (const auto& c : family) {
    const double lcc = reference_cc_length(c);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : samples) {
      const double err = std::abs(polygonal_length(lift(c, n - 1), koranyi_metric()) - lcc) / lcc;
      if (std::isfinite(prev)) worst_ratio = std::max(worst_ratio, err / prev);
      prev = err;
    }
    worst_final = std::max(worst_final, prev);
  }
  rec.at_most("max |L_K - L_cc| / L_cc at 4096 samples (20 curves)", 1e-3, worst_final);
  rec.at_most("max err(2n) / err(n), 512 -> 4096 samples", 1.1, worst_ratio);
  rec.runtime(30.0);
}

// 3. Metric axioms, left invariance and dilation homogeneity.
void metric_axioms(Recorder& rec, std::uint64_t seed) {
  constexpr std::size_t kTrials = 100000;
  auto rng = stream(seed, 3);
  std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
  std::size_t asym = 0, tri = 0, sep = 0, left = 0, dil = 0, neg = 0;
  double worst_left = 0.0, worst_dil = 0.0;
  for (std::size_t i = 0; i < kTrials; ++i) {
    const Point p = uniform_point(rng, -10, 10), q = uniform_point(rng, -10, 10), r = uniform_point(rng, -10, 10);
    const Point g = uniform_point(rng, -10, 10);
    const double lambda = std::exp(log_lambda(rng));
    const double pq = koranyi_distance(p, q);
    if (pq != koranyi_distance(q, p)) ++asym;
    if (!(pq >= 0.0)) ++neg;
    if (koranyi_distance(p, p) != 0.0 || !(pq > 1e-12)) ++sep;
    if (koranyi_distance(p, r) > pq + koranyi_distance(q, r) + 1e-9) ++tri;
    const double lg = rel_gap(koranyi_distance(group_multiply(g, p), group_multiply(g, q)), pq);
    const double dg = rel_gap(koranyi_distance(dilate(p, lambda), dilate(q, lambda)), lambda * pq);
    worst_left = std::max(worst_left, lg);
    worst_dil = std::max(worst_dil, dg);
    if (lg > 1e-9) ++left;
    if (dg > 1e-9) ++dil;
  }
  rec.count_zero("symmetry violations (exact)", kTrials, asym);
  rec.count_zero("nonnegativity / separation violations", kTrials, neg + sep);
  rec.count_zero("triangle violations (slack 1e-9)", kTrials, tri);
  rec.count_zero("left-invariance violations (rel 1e-9)", kTrials, left);
  rec.at_most("max left-invariance relative gap", 1e-9, worst_left);
  rec.count_zero("dilation violations (rel 1e-9)", kTrials, dil);
  rec.at_most("max dilation relative gap", 1e-9, worst_dil);
  rec.runtime(10.0);
}

// 4. Points beyond the escape radius are Koranyi-far.
void escape(Recorder& rec, std::uint64_t seed) {
  auto rng = stream(seed, 4);
  std::uniform_real_distribution<double> level_dist(0.05, 5.0), u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t trials = 0, violations = 0;
  double closest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10; ++k) {
    const Point q = uniform_point(rng, -3, 3);
    const double level = level_dist(rng);
    const double theta = escape_radius(q, level);
    for (int i = 0; i < 10000; ++i) {
      Point dir{normal(rng), normal(rng), normal(rng)};
      const double n = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);
      // Half the samples hug the sphere |p - q| = theta.
      const double radius = theta * (1.0 + (i % 2 == 0 ? 1e-12 : 2.0 * u(rng)));
      const Point p{q.x + radius * dir.x / n, q.y + radius * dir.y / n, q.z + radius * dir.z / n};
      ++trials;
      const double d = koranyi_distance(p, q);
      closest = std::min(closest, d / level);
      if (!(d > level)) ++violations;
    }
  }
  rec.count_zero("d_K(p,q) <= Lambda with |p-q| > Theta", trials, violations);
  rec.check("min d_K / Lambda", "> 1", closest, "strict", closest > 1.0);
}

// 5. Young's-inequality comparison bound on the unit box.
void comparison(Recorder& rec, std::uint64_t seed) {
  constexpr std::size_t kTrials = 100000;
  auto rng = stream(seed, 5);
  const BoundingBox box{{-1, -1, -1}, {1, 1, 1}};
  std::size_t violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kTrials; ++i) {
    const Point p = uniform_point(rng, -1, 1), q = uniform_point(rng, -1, 1);
    const double bound = euclidean_comparison_bound(box, p, q);
    const double d = koranyi_distance(p, q);
    if (bound < d) ++violations;
    tightest = std::min(tightest, bound - d);
  }
  rec.count_zero("bound < d_K on [-1,1]^3", kTrials, violations);
  rec.check("min (bound - d_K)", ">= 0", tightest, "-", tightest >= 0.0);
}

// 6. CC geodesic solver against analytic values, and its gradient.
void solver(Recorder& rec, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  const auto vertical = solve_cc_geodesic({0, 0, 0}, {0, 0, kExampleHeight}, 256, cfg);
  rec.within("vertical target length, N=256", 0.495, 0.505, vertical.length);
  rec.check("vertical target converged", "true", vertical.converged ? 1.0 : 0.0, "-", vertical.converged);
  const auto straight = solve_cc_geodesic({0, 0, 0}, {1, 0, 0}, 256, cfg);
  rec.within("straight target length, N=256", 0.999, 1.001, straight.length);
  rec.check("straight target converged", "true", straight.converged ? 1.0 : 0.0, "-", straight.converged);

  // Central differences at h = 1e-6 over the whole penalty schedule, at a
  // random control vector and a random multiplier.
  auto rng = stream(seed, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> l1(64), l2(64);
  for (std::size_t i = 0; i < 64; ++i) {
    l1[i] = u(rng);
    l2[i] = u(rng);
  }
  HorizontalControlCurve c({u(rng), u(rng), u(rng)}, l1, l2);
  double worst = 0.0;
  for (double penalty = cfg.penalty_initial; penalty <= cfg.penalty_max; penalty *= cfg.penalty_factor) {
    const PenaltyObjective obj{{u(rng), u(rng), u(rng)}, penalty, {u(rng), u(rng), u(rng)}};
    std::vector<double> grad;
    obj.evaluate(c, &grad);
    double num = 0.0, den = 0.0;
    const double h = 1e-6;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      double& v = k < 64 ? c.lambda1_mut()[k] : c.lambda2_mut()[k - 64];
      const double keep = v;
      v = keep + h;
      const double fp = obj.evaluate(c, nullptr);
      v = keep - h;
      const double fm = obj.evaluate(c, nullptr);
      v = keep;
      const double fd = (fp - fm) / (2.0 * h);
      num += (fd - grad[k]) * (fd - grad[k]);
      den += grad[k] * grad[k];
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  rec.at_most("gradient vs central differences, relative error", 1e-5, worst);
  rec.runtime(60.0);
}

// 7. Lipschitz arclength reparametrization.
void reparametrization(Recorder& rec, std::uint64_t seed) {
  const auto family = trig_family(20, seed);
  bool ends = true;
  double worst_len = 0.0, worst_lip = 0.0;
  for (const auto& c : family) {
    const SampledCurve curve = lift(c, 255);
    const double total = polygonal_length(curve, koranyi_metric());
    const SampledCurve r = arclength_reparametrize(curve, koranyi_metric());
    ends = ends && r.front() == curve.front() && r.back() == curve.back() && r.a() == 0.0 && r.b() == 1.0;
    worst_len = std::max(worst_len, rel_gap(polygonal_length(r, koranyi_metric()), total));
    const double ratio = kernels::omp::max_lipschitz_ratio(r.points(), r.grid().knots(), koranyi_metric());
    worst_lip = std::max(worst_lip, ratio / total);
  }
  rec.check("endpoints preserved exactly (20 curves)", "true", ends ? 1.0 : 0.0, "exact", ends);
  rec.at_most("max relative length change", 1e-9, worst_len);
  rec.at_most("max sampled Lipschitz ratio / L", 1.0 + kLipschitzSlack, worst_lip);
}

// Horizontal lift of a triangle wave of amplitude `amp` and n teeth around
// the x-axis, sampled on `grid`.
SampledCurve zigzag(const Partition& grid, int teeth, double amp) {
  std::vector<PlanarSample> xy, v;
  for (double t : grid.knots()) {
    const double s = std::fmod(t * teeth, 1.0);
    const double tri = s < 0.5 ? 2.0 * s : 2.0 - 2.0 * s;
    const double slope = (s < 0.5 ? 2.0 : -2.0) * teeth * amp;
    xy.push_back({t, amp * tri});
    v.push_back({1.0, slope});
  }
  return horizontal_lift(grid, xy, 0.0, v);
}

// 8. Lower semicontinuity of length along zigzags, and solver refinement.
void lower_semicontinuity(Recorder& rec, std::uint64_t seed) {
  const Partition fine = Partition::uniform(0.0, 1.0, 1 << 14);
  std::vector<Partition> partitions;
  for (std::size_t n : {1u, 2u, 7u, 16u, 64u, 333u}) partitions.push_back(Partition::uniform(0.0, 1.0, n));
  auto rng = stream(seed, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 4; ++k) {
    std::vector<double> t{0.0, 1.0};
    for (int i = 0; i < 40; ++i) t.push_back(u(rng));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    partitions.emplace_back(std::move(t));
  }
  const SampledCurve segment = sample_curve([](double t) { return Point{t, 0.0, 0.0}; }, fine);

  std::size_t violations = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_sup = 0.0;
  for (double exponent : {1.0, 2.0}) {
    std::vector<SampledCurve> family;
    for (int n = 16; n <= 1024; n *= 2) family.push_back(zigzag(fine, n, std::pow(1.0 / n, exponent)));
    const auto& last = family.back();
    for (std::size_t i = 0; i < last.sample_count(); ++i)
      worst_sup = std::max(worst_sup, euclidean_distance(last.points()[i], segment.points()[i]));
    for (const auto& part : partitions) {
      const double limit = polygonal_length(segment, koranyi_metric(), part);
      // Tail infimum over the last half of the sequence.
      double liminf = std::numeric_limits<double>::infinity();
      for (std::size_t j = family.size() / 2; j < family.size(); ++j)
        liminf = std::min(liminf, polygonal_length(family[j], koranyi_metric(), part));
      worst_gap = std::min(worst_gap, liminf - limit);
      if (limit > liminf + 1e-12) ++violations;
    }
  }
  rec.at_most("zigzags -> segment, sup distance at n=1024", 2e-3, worst_sup);
  rec.count_zero("L(segment, P) > liminf L(zigzag_n, P)", 2 * partitions.size(), violations);
  rec.check("min (liminf - limit)", ">= -1e-12", worst_gap, "-", worst_gap >= -1e-12);

  SolverConfig cfg;
  cfg.seed = seed;
  cfg.restarts = 2;
  bool nonincreasing = true, not_longer = true;
  double vertical_refined = 0.0;
  const std::array<std::pair<Point, Point>, 3> pairs{{{{0, 0, 0}, {0, 0, kExampleHeight}},
                                                      {{0, 0, 0}, {1, 0, 0}},
                                                      {{0.2, -0.1, 0.05}, {-0.3, 0.4, 0.3}}}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto coarse = solve_cc_geodesic(pairs[i].first, pairs[i].second, 64, cfg);
    const auto cmp = refine_and_compare(coarse, 4, cfg);
    nonincreasing = nonincreasing && cmp.trace_nonincreasing;
    not_longer = not_longer && cmp.not_longer;
    if (i == 0) vertical_refined = cmp.refined_length;
  }
  rec.check("refine_and_compare traces nonincreasing", "true", nonincreasing ? 1.0 : 0.0, "-", nonincreasing);
  rec.check("refined length <= coarse + 1e-6", "true", not_longer ? 1.0 : 0.0, "-", not_longer);
  rec.near("vertical target refined 64 -> 256", 0.5, vertical_refined, 5e-3);
}

// 9. Uniform convergence of difference quotients on the example curve.
void difference_quotients(Recorder& rec) {
  for (const auto& [h, tol] : {std::pair{1e-3, 0.02}, std::pair{1e-4, 0.002}}) {
    double worst = 0.0;
    for (int j = 0; j < 256; ++j) {
      const double t = j * (1.0 - h) / 255.0;
      worst = std::max(worst, std::abs(difference_quotient(example_geodesic, t, t + h) - 0.5));
    }
    rec.check("max_t |DQ(t, t+h) - 1/2|, h=" + fmt(h, 2), "0.5", worst, "< " + fmt(tol, 3), worst < tol);
  }
}

}  // namespace

PlanarSample TrigPlanarCurve::value(double t) const {
  PlanarSample out;
  for (int k = 0; k < 5; ++k) {
    const double c = std::cos(kPi * k * t), s = std::sin(kPi * k * t);
    out.x += ax[k] * c + bx[k] * s;
    out.y += ay[k] * c + by[k] * s;
  }
  return out;
}

PlanarSample TrigPlanarCurve::velocity(double t) const {
  PlanarSample out;
  for (int k = 1; k < 5; ++k) {
    const double w = kPi * k;
    const double c = std::cos(w * t), s = std::sin(w * t);
    out.x += w * (bx[k] * c - ax[k] * s);
    out.y += w * (by[k] * c - ay[k] * s);
  }
  return out;
}

double TrigPlanarCurve::speed(double t) const {
  const PlanarSample v = velocity(t);
  return std::hypot(v.x, v.y);
}

std::vector<TrigPlanarCurve> trig_family(std::size_t count, std::uint64_t seed) {
  auto rng = stream(seed, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TrigPlanarCurve> out(count);
  for (auto& c : out) {
    for (int k = 0; k < 5; ++k) {
      // Decaying amplitudes keep the curves tame at high frequency.
      const double s = 1.0 / (1.0 + k);
      c.ax[k] = s * normal(rng);
      c.bx[k] = s * normal(rng);
      c.ay[k] = s * normal(rng);
      c.by[k] = s * normal(rng);
    }
  }
  return out;
}

SampledCurve lift(const TrigPlanarCurve& curve, std::size_t segments) {
  const Partition grid = Partition::uniform(0.0, 1.0, segments);
  std::vector<PlanarSample> xy, v;
  for (double t : grid.knots()) {
    xy.push_back(curve.value(t));
    v.push_back(curve.velocity(t));
  }
  return horizontal_lift(grid, xy, 0.0, v);
}

double reference_cc_length(const TrigPlanarCurve& curve) {
  constexpr int n = 1 << 16;
  const double h = 1.0 / n;
  double sum = curve.speed(0.0) + curve.speed(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * curve.speed(i * h);
  return sum * h / 3.0;
}

std::string criterion_title(int criterion) {
  static const std::map<int, std::string> titles{
      {1, "non-length-space witness"},
      {2, "Korányi length equals cc length on horizontal curves"},
      {3, "metric axioms and invariances"},
      {4, "escape radius"},
      {5, "comparison bound"},
      {6, "geodesic solver vs analytic oracle"},
      {7, "Lipschitz arclength reparametrization"},
      {8, "lower semicontinuity of length"},
      {9, "uniform convergence of difference quotients"},
  };
  const auto it = titles.find(criterion);
  return it == titles.end() ? "unknown" : it->second;
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
  const std::uint64_t seed = options.seed;
  const std::map<int, std::function<void(Recorder&)>> suite{
      {1, [](Recorder& r) { non_length_space(r); }},
      {2, [seed](Recorder& r) { length_equality(r, seed); }},
      {3, [seed](Recorder& r) { metric_axioms(r, seed); }},
      {4, [seed](Recorder& r) { escape(r, seed); }},
      {5, [seed](Recorder& r) { comparison(r, seed); }},
      {6, [seed](Recorder& r) { solver(r, seed); }},
      {7, [seed](Recorder& r) { reparametrization(r, seed); }},
      {8, [seed](Recorder& r) { lower_semicontinuity(r, seed); }},
      {9, [](Recorder& r) { difference_quotients(r); }},
  };
  std::vector<CheckResult> out;
  for (const auto& [id, run] : suite) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    Recorder rec(id, out);
    try {
      run(rec);
    } catch (const std::exception& e) {
      rec.check(std::string("unexpected exception: ") + e.what(), "-", std::nan(""), "-", false);
    }
  }
  return out;
}

std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& checks) {
  std::vector<CriterionSummary> out;
  for (const auto& c : checks) {
    if (out.empty() || out.back().criterion != c.criterion)
      out.push_back({c.criterion, criterion_title(c.criterion), true, 0.0, 0, 0});
    auto& s = out.back();
    ++s.checks;
    s.seconds += c.seconds;
    if (!c.pass) {
      ++s.failed;
      s.pass = false;
    }
  }
  return out;
}

void print_table(std::ostream& os, const std::vector<CheckResult>& checks) {
  std::size_t w = 5;
  for (const auto& c : checks) w = std::max(w, c.name.size() + 4);
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %-22s  %-22s  %-12s  %s\n", static_cast<int>(w), "check", "expected", "got",
                "tolerance", "pass");
  os << line;
  int current = 0;
  for (const auto& c : checks) {
    if (c.criterion != current) {
      current = c.criterion;
      os << "[" << current << "] " << criterion_title(current) << '\n';
    }
    std::snprintf(line, sizeof line, "    %-*s  %-22s  %-22.15g  %-12s  %s\n", static_cast<int>(w - 4), c.name.c_str(),
                  c.expected.c_str(), c.got, c.tolerance.c_str(), c.pass ? "PASS" : "FAIL");
    os << line;
  }
}

}  // namespace heisgeo::verify
