#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "heisgeo/types.hpp"

using namespace heisgeo;

TEST(Partition, RejectsBadKnots) {
  EXPECT_THROW(Partition({0.0}), std::invalid_argument);
  EXPECT_THROW(Partition({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(Partition({0.0, 1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(Partition({0.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  EXPECT_NO_THROW(Partition({0.0, 1.0}));
}

TEST(Partition, UniformEndsExactly) {
  const Partition p = Partition::uniform(0.0, 0.3, 7);
  EXPECT_EQ(p.size(), 7u);
  EXPECT_EQ(p.knot_count(), 8u);
  EXPECT_EQ(p.a(), 0.0);
  EXPECT_EQ(p.b(), 0.3);
}

TEST(Partition, Refines) {
  const Partition coarse({0.0, 0.5, 1.0});
  EXPECT_TRUE(Partition({0.0, 0.25, 0.5, 1.0}).refines(coarse));
  EXPECT_FALSE(Partition({0.0, 0.25, 1.0}).refines(coarse));
}

TEST(SampledCurve, SizeMismatchThrows) {
  EXPECT_THROW(SampledCurve(Partition({0.0, 1.0}), {{0, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(SampledCurve(Partition({0.0, 1.0}), {{0, 0, 0}, {1, 0, 0}}, std::vector<Vec3>{{1, 0, 0}}),
               std::invalid_argument);
}

TEST(SampledCurve, MissingDerivativesThrow) {
  const SampledCurve c(Partition({0.0, 1.0}), {{0, 0, 0}, {1, 0, 0}});
  EXPECT_FALSE(c.has_derivatives());
  EXPECT_THROW(c.derivatives(), std::invalid_argument);
}

TEST(SampledCurve, LinearInterpolation) {
  const SampledCurve c(Partition({0.0, 1.0, 3.0}), {{0, 0, 0}, {1, 2, 3}, {3, 2, 1}});
  EXPECT_EQ(c.evaluate(1.0), (Point{1, 2, 3}));
  const Point mid = c.evaluate(2.0);
  EXPECT_DOUBLE_EQ(mid.x, 2.0);
  EXPECT_DOUBLE_EQ(mid.y, 2.0);
  EXPECT_DOUBLE_EQ(mid.z, 2.0);
  EXPECT_THROW(c.evaluate(3.5), std::domain_error);
  EXPECT_THROW(c.evaluate(-0.1), std::domain_error);
}

TEST(SampledCurve, SampleCurveHitsKnots) {
  const auto c = sample_curve([](double t) { return Point{t, t * t, 0.0}; }, Partition::uniform(0.0, 1.0, 4));
  EXPECT_EQ(c.sample_count(), 5u);
  EXPECT_EQ(c.points()[2], (Point{0.5, 0.25, 0.0}));
}
