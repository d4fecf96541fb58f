#pragma once
// Acceptance suite: numerical checks of the Korányi / Carnot-Caratheodory
// length theory, grouped into numbered criteria.
#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "heisgeo/heisenberg.hpp"

namespace heisgeo::verify {

struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string expected;
  double got = 0.0;
  std::string tolerance;
  bool pass = false;
  double seconds = 0.0;
};

struct CriterionSummary {
  int criterion = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::size_t checks = 0;
  std::size_t failed = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 0x5eed;
  /// Restrict to these criteria (1-9); empty runs all.
  std::vector<int> only;
};

/// Planar curve with trigonometric components of degree <= 4:
/// x(t) = sum_k a_k cos(pi k t) + b_k sin(pi k t), likewise y, on [0, 1].
struct TrigPlanarCurve {
  std::array<double, 5> ax{}, bx{}, ay{}, by{};

  PlanarSample value(double t) const;
  PlanarSample velocity(double t) const;
  double speed(double t) const;
};

/// Seeded family of `count` curves.
std::vector<TrigPlanarCurve> trig_family(std::size_t count, std::uint64_t seed);

/// Horizontal lift through z = 0 on `segments` uniform steps of [0, 1], with
/// analytic planar velocities.
SampledCurve lift(const TrigPlanarCurve& curve, std::size_t segments);

/// Carnot-Caratheodory length by composite Simpson on 2^16 intervals.
double reference_cc_length(const TrigPlanarCurve& curve);

std::string criterion_title(int criterion);

std::vector<CheckResult> run_acceptance(const VerifyOptions& options = {});

std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& checks);

/// Table with columns: check, expected, got, tolerance, pass.
void print_table(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace heisgeo::verify
