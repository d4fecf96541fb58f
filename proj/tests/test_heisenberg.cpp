#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "heisgeo/heisenberg.hpp"

using namespace heisgeo;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<PlanarSample> planar_samples(const Partition& grid, double (*fx)(double), double (*fy)(double)) {
  std::vector<PlanarSample> out;
  for (double t : grid.knots()) out.push_back({fx(t), fy(t)});
  return out;
}
}  // namespace

TEST(Koranyi, NormValues) {
  EXPECT_EQ(koranyi_norm({0, 0, 0}), 0.0);
  EXPECT_EQ(koranyi_norm({1, 0, 0}), 1.0);
  EXPECT_NEAR(koranyi_norm({0, 0, kExampleHeight}), 0.28209479177387814, 1e-16);
}

TEST(Koranyi, DistanceValues) {
  const Point p{0.3, -2.0, 5.0};
  EXPECT_EQ(koranyi_distance(p, p), 0.0);
  EXPECT_NEAR(koranyi_distance({0, 0, 0}, {1, 1, 0}), 1.4142135623730950, 1e-15);
  EXPECT_NEAR(koranyi_distance({1, 0, 0}, {0, 1, 0}), 1.6817928305074291, 1e-15);
  EXPECT_NEAR(koranyi_distance({1, 2, 3}, {-1, 0.5, 2}), 2.7240431420643681, 1e-15);
}

TEST(GroupLaw, Values) {
  const Point p{0.5, -1.5, 2.0};
  EXPECT_EQ(group_multiply(p, kIdentity), p);
  EXPECT_EQ(group_multiply(kIdentity, p), p);
  EXPECT_EQ(group_multiply({1, 0, 0}, {0, 1, 0}), (Point{1, 1, -2}));
}

TEST(GroupLaw, Properties) {
  proptest::Gen g(1);
  for (int i = 0; i < 10000; ++i) {
    const Point p = g.point(10), q = g.point(10), r = g.point(10);
    EXPECT_EQ(group_multiply(p, group_inverse(p)), kIdentity);
    EXPECT_NEAR(koranyi_norm(group_multiply(group_inverse(p), q)), koranyi_distance(p, q), 1e-12 * (1 + koranyi_distance(p, q)));
    const Point a = group_multiply(group_multiply(p, q), r);
    const Point b = group_multiply(p, group_multiply(q, r));
    EXPECT_NEAR(a.z, b.z, 1e-12 * (1 + std::abs(a.z)));
  }
}

TEST(Dilation, ValuesAndErrors) {
  EXPECT_EQ(dilate({1, 1, 1}, 2.0), (Point{2, 2, 4}));
  EXPECT_EQ(dilate({0.3, 0.7, -1.1}, 1.0), (Point{0.3, 0.7, -1.1}));
  EXPECT_THROW(dilate({1, 1, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(dilate({1, 1, 1}, -1.0), std::invalid_argument);
}

TEST(Koranyi, MetricAxiomsAndInvariances) {
  proptest::Gen g(2);
  for (int i = 0; i < 100000; ++i) {
    const Point p = g.point(10), q = g.point(10), r = g.point(10);
    const double pq = koranyi_distance(p, q);
    EXPECT_EQ(pq, koranyi_distance(q, p));
    ASSERT_LE(koranyi_distance(p, r), pq + koranyi_distance(q, r) + 1e-9);
    const Point h = g.point(10);
    ASSERT_NEAR(koranyi_distance(group_multiply(h, p), group_multiply(h, q)), pq, 1e-9 * pq);
    const double lambda = std::exp(g.uniform(std::log(0.1), std::log(10.0)));
    ASSERT_NEAR(koranyi_distance(dilate(p, lambda), dilate(q, lambda)), lambda * pq, 1e-9 * lambda * pq);
    ASSERT_GT(pq, 0.0);
  }
}

TEST(HorizontalFrame, Components) {
  const auto f = horizontal_frame({0.25, -3.0, 9.0});
  EXPECT_EQ(f.X, (Vec3{1, 0, -6.0}));
  EXPECT_EQ(f.Y, (Vec3{0, 1, -0.5}));
  EXPECT_EQ(horizontal_defect({0.25, -3.0, 9.0}, f.X), 0.0);
  EXPECT_EQ(horizontal_defect({0.25, -3.0, 9.0}, f.Y), 0.0);
}

TEST(Horizontality, Residuals) {
  const Partition grid = Partition::uniform(0.0, 1.0, 10);
  std::vector<Point> line, vert;
  for (double t : grid.knots()) {
    line.push_back({t, 0, 0});
    vert.push_back({0, 0, t});
  }
  const SampledCurve h(grid, line, std::vector<Vec3>(11, Vec3{1, 0, 0}));
  EXPECT_EQ(horizontality_residual(h).max_residual, 0.0);
  const auto rv = horizontality_residual(SampledCurve(grid, vert, std::vector<Vec3>(11, Vec3{0, 0, 1})));
  for (double r : rv.residuals) EXPECT_EQ(r, 1.0);
  EXPECT_THROW(horizontality_residual(SampledCurve(grid, line)), std::invalid_argument);
  EXPECT_LT(horizontality_residual(example_geodesic_curve(1000)).max_residual, 1e-12);
}

TEST(Horizontality, LeftTranslationPreservesResidual) {
  // d/dt (g * gamma) = (x', y', z' + 2 (g.y x' - g.x y')).
  proptest::Gen g(4);
  const auto base = example_geodesic_curve(200);
  for (int trial = 0; trial < 50; ++trial) {
    const Point h = g.point(5);
    std::vector<Point> pts;
    std::vector<Vec3> der;
    for (std::size_t i = 0; i < base.sample_count(); ++i) {
      const Point& p = base.points()[i];
      const Vec3& v = base.derivatives()[i];
      pts.push_back(group_multiply(h, p));
      der.push_back({v.x, v.y, v.z + 2.0 * (h.y * v.x - h.x * v.y)});
    }
    const auto moved = horizontality_residual(SampledCurve(base.grid(), pts, der));
    const auto orig = horizontality_residual(base);
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(moved.residuals[i], orig.residuals[i], 1e-9);
  }
}

TEST(Lift, PlanarSegmentStaysFlat) {
  const Partition grid = Partition::uniform(0.0, 1.0, 50);
  const auto lifted = horizontal_lift(grid, planar_samples(grid, [](double t) { return t; }, [](double) { return 0.0; }), 0.0);
  for (const Point& p : lifted.points()) EXPECT_EQ(p.z, 0.0);
}

TEST(Lift, UnitCircle) {
  const Partition grid = Partition::uniform(0.0, 1.0, 10000);
  const auto lifted = horizontal_lift(
      grid, planar_samples(grid, [](double t) { return std::cos(2 * kPi * t); }, [](double t) { return std::sin(2 * kPi * t); }),
      0.0);
  EXPECT_NEAR(lifted.back().z, -4.0 * kPi, 1e-6);
  EXPECT_NEAR(cc_length(lifted), 2.0 * kPi, 1e-6);
}

TEST(Lift, ReconstructsExampleEndpoint) {
  const Partition grid = Partition::uniform(0.0, 1.0, 16384);
  const auto lifted = horizontal_lift(
      grid,
      planar_samples(grid, [](double t) { return (1 - std::cos(2 * kPi * t)) / (4 * kPi); },
                     [](double t) { return std::sin(2 * kPi * t) / (4 * kPi); }),
      0.0);
  EXPECT_NEAR(lifted.back().x, 0.0, 1e-15);
  EXPECT_NEAR(lifted.back().y, 0.0, 1e-15);
  EXPECT_NEAR(lifted.back().z, kExampleHeight, 1e-8);
}

TEST(Lift, Errors) {
  const Partition grid = Partition::uniform(0.0, 1.0, 3);
  const std::vector<PlanarSample> few{{0, 0}, {1, 0}};
  EXPECT_THROW(horizontal_lift(grid, few, 0.0), std::invalid_argument);
  EXPECT_THROW(horizontal_lift(Partition({0.0, 1.0}), std::vector<PlanarSample>{{0, 0}}, 0.0), std::invalid_argument);
}

TEST(Lift, ResidualDecaysUnderRefinement) {
  // Finite-difference derivatives of the lifted samples: the horizontality
  // residual must shrink at least linearly with the step.
  auto residual = [](std::size_t n) {
    const Partition grid = Partition::uniform(0.0, 1.0, n);
    const auto lifted = horizontal_lift(
        grid, planar_samples(grid, [](double t) { return std::cos(3 * t) + t * t; }, [](double t) { return std::sin(5 * t); }), 0.5);
    return horizontality_residual(with_finite_difference_derivatives(lifted)).max_residual;
  };
  double prev = residual(64);
  for (std::size_t n = 128; n <= 2048; n *= 2) {
    const double cur = residual(n);
    EXPECT_LT(cur, 0.55 * prev);
    prev = cur;
  }
}

TEST(CcLength, ValuesAndErrors) {
  const Partition grid = Partition::uniform(0.0, 1.0, 10);
  std::vector<Point> line, vert;
  for (double t : grid.knots()) {
    line.push_back({t, 0, 0});
    vert.push_back({0, 0, t});
  }
  EXPECT_DOUBLE_EQ(cc_length(SampledCurve(grid, line, std::vector<Vec3>(11, Vec3{1, 0, 0}))), 1.0);
  EXPECT_NEAR(cc_length(example_geodesic_curve(1000)), 0.5, 1e-9);
  try {
    cc_length(SampledCurve(grid, vert, std::vector<Vec3>(11, Vec3{0, 0, 1})));
    FAIL() << "vertical line accepted";
  } catch (const NotHorizontalError& e) {
    EXPECT_EQ(e.max_residual(), 1.0);
  }
}

TEST(Example, EndpointsAndDomain) {
  EXPECT_EQ(example_geodesic(0.0), (Point{0, 0, 0}));
  const Point end = example_geodesic(1.0);
  EXPECT_NEAR(end.x, 0.0, 1e-16);
  EXPECT_NEAR(end.y, 0.0, 1e-16);
  EXPECT_NEAR(end.z, kExampleHeight, 1e-16);
  EXPECT_THROW(example_geodesic(1.01), std::domain_error);
  EXPECT_THROW(example_geodesic(-0.01), std::domain_error);
  EXPECT_NEAR(koranyi_distance(example_geodesic(0.0), end), 0.28209479177387814, 1e-15);
}

TEST(DifferenceQuotient, Values) {
  const CurveFn line = [](double t) { return Point{t, 0, 0}; };
  EXPECT_DOUBLE_EQ(difference_quotient(line, 0.2, 0.7), 1.0);
  EXPECT_THROW(difference_quotient(line, 0.2, 0.2), std::invalid_argument);
  for (double t = 0.0; t < 0.999; t += 0.01) EXPECT_NEAR(difference_quotient(example_geodesic, t, t + 1e-4), 0.5, 1e-3);
  const CurveFn vert = [](double t) { return Point{0, 0, t}; };
  for (double h : {1e-2, 1e-4, 1e-6}) EXPECT_NEAR(difference_quotient(vert, 0.5, 0.5 + h), 1.0 / std::sqrt(h), 1e-6 / std::sqrt(h));
}

TEST(DifferenceQuotient, UniformConvergenceOnSmoothHorizontalCurve) {
  // Lift of (t, sin t) through the origin.
  const CurveFn f = [](double t) {
    return Point{t, std::sin(t), -2.0 * (t * std::sin(t) + 2.0 * std::cos(t) - 2.0)};
  };
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {1e-2, 1e-3, 1e-4}) {
    double worst = 0.0;
    for (int j = 0; j < 256; ++j) {
      const double t = j / 255.0;
      worst = std::max(worst, std::abs(difference_quotient(f, t, t + h) - std::hypot(1.0, std::cos(t))));
    }
    EXPECT_LT(worst, prev);
    prev = worst;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Bounds, ComparisonBound) {
  const BoundingBox box{{-1, -1, -1}, {1, 1, 1}};
  const Point p{0.1, -0.2, 0.3}, q{-0.4, 0.5, -0.6};
  EXPECT_EQ(euclidean_comparison_bound(box, p, p), 0.0);
  EXPECT_NEAR(euclidean_comparison_bound(box, p, q), 1.9234540965305278, 1e-15);
  EXPECT_THROW(euclidean_comparison_bound(box, p, {2, 0, 0}), std::invalid_argument);

  proptest::Gen g(9);
  for (int i = 0; i < 100000; ++i) {
    const Point a = g.point(1), b = g.point(1);
    ASSERT_GE(euclidean_comparison_bound(box, a, b), koranyi_distance(a, b));
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double b = euclidean_comparison_bound(box, p, {p.x + eps, p.y - eps, p.z + eps});
    EXPECT_LT(b, prev);
    prev = b;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(Bounds, EscapeRadius) {
  EXPECT_NEAR(escape_radius({0, 0, 0}, 1.0), 1.7320525396196849, 1e-15);
  EXPECT_NEAR(escape_radius({1, 1, 0}, 1.0), 8.6602626980984243, 1e-14);
  EXPECT_THROW(escape_radius({0, 0, 0}, 0.0), std::invalid_argument);

  proptest::Gen g(10);
  for (int k = 0; k < 10; ++k) {
    const Point q = g.point(3);
    const double level = g.uniform(0.1, 5.0);
    const double theta = escape_radius(q, level);
    // Both defining inequalities hold.
    const double gamma = std::abs(q.x) + std::abs(q.y);
    EXPECT_GT(theta, std::sqrt(3.0) * level);
    EXPECT_GT(theta / std::sqrt(3.0) - 2.0 * gamma * level, level * level);
    for (int i = 0; i < 10000; ++i) {
      const Point dir = g.point(1);
      const double n = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);
      if (n < 1e-3) continue;
      const double radius = theta * (1.0 + (i % 2 == 0 ? 1e-9 : g.uniform(0.0, 3.0)));
      const Point p{q.x + radius * dir.x / n, q.y + radius * dir.y / n, q.z + radius * dir.z / n};
      ASSERT_GT(koranyi_distance(p, q), level);
    }
  }
}
