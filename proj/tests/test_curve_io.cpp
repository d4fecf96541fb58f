#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "generators.hpp"
#include "heisgeo/curve_io.hpp"
#include "heisgeo/heisenberg.hpp"

using namespace heisgeo;
namespace fs = std::filesystem;

namespace {

SampledCurve awkward_curve(bool with_derivatives) {
  proptest::Gen g(81);
  std::vector<Point> pts;
  std::vector<Vec3> der;
  for (int i = 0; i < 33; ++i) {
    pts.push_back({g.uniform(-1, 1) / 3.0, 1e-300 * g.uniform(-1, 1), 1e17 * g.uniform(-1, 1)});
    der.push_back({g.uniform(-1, 1) * 0.1, 0.7, -0.3});
  }
  std::optional<std::vector<Vec3>> d;
  if (with_derivatives) d = der;
  return SampledCurve(Partition(g.grid(0.0, 1.0 / 3.0, 32)), pts, d);
}

void expect_identical(const SampledCurve& a, const SampledCurve& b) {
  ASSERT_EQ(a.sample_count(), b.sample_count());
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    EXPECT_EQ(a.grid()[i], b.grid()[i]);
    EXPECT_EQ(a.points()[i], b.points()[i]);
  }
  ASSERT_EQ(a.has_derivatives(), b.has_derivatives());
  if (a.has_derivatives()) {
    for (std::size_t i = 0; i < a.sample_count(); ++i) EXPECT_EQ(a.derivatives()[i], b.derivatives()[i]);
  }
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("heisgeo_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(CurveIo, FormatReal) {
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(io::format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(CurveIo, ParsePoint) {
  EXPECT_EQ(io::parse_point("0,0,0.0795775"), (Point{0, 0, 0.0795775}));
  EXPECT_EQ(io::parse_point("-1e-3,2,3"), (Point{-1e-3, 2, 3}));
  for (const char* bad : {"", "1,2", "1,2,3,4", "a,b,c", "1, 2,3x", "1,,2", "1,2,nan"})
    EXPECT_THROW(io::parse_point(bad), io::FormatError) << bad;
}

TEST(CurveIo, JsonRoundTrip) {
  for (bool d : {false, true}) {
    const auto c = awkward_curve(d);
    const auto j = io::curve_to_json(c);
    EXPECT_EQ(j.contains("derivatives"), d);
    expect_identical(c, io::curve_from_json(nlohmann::json::parse(j.dump())));
  }
}

TEST(CurveIo, JsonTextRoundTrip) {
  for (bool d : {false, true}) {
    const auto c = awkward_curve(d);
    std::stringstream ss;
    io::write_curve_json(ss, c);
    if (d) {
      EXPECT_NE(ss.str().find("0.69999999999999996"), std::string::npos);
    }
    expect_identical(c, io::curve_from_json(nlohmann::json::parse(ss.str())));
  }
}

TEST(CurveIo, CsvRoundTrip) {
  for (bool d : {false, true}) {
    const auto c = awkward_curve(d);
    std::stringstream ss;
    io::write_curve_csv(ss, c);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    EXPECT_EQ(header, d ? "t,x,y,z,vx,vy,vz" : "t,x,y,z");
    expect_identical(c, io::read_curve_csv(ss));
  }
}

TEST(CurveIo, FileRoundTrip) {
  TempDir dir;
  const auto c = awkward_curve(true);
  for (const char* name : {"c.json", "c.csv"}) {
    const fs::path file = dir.path() / name;
    io::save_curve(file, c);
    expect_identical(c, io::load_curve(file));
  }
  EXPECT_THROW(io::load_curve(dir.path() / "missing.json"), std::ios_base::failure);
}

TEST(CurveIo, MalformedInputs) {
  std::stringstream bad_header("a,b,c\n");
  EXPECT_THROW(io::read_curve_csv(bad_header), io::FormatError);
  std::stringstream short_row("t,x,y,z\n0,1,2\n");
  EXPECT_THROW(io::read_curve_csv(short_row), io::FormatError);
  std::stringstream decreasing("t,x,y,z\n1,0,0,0\n0,0,0,0\n");
  EXPECT_THROW(io::read_curve_csv(decreasing), io::FormatError);
  EXPECT_THROW(io::curve_from_json(nlohmann::json::parse(R"({"grid":[0,1]})")), io::FormatError);
  EXPECT_THROW(io::curve_from_json(nlohmann::json::parse(R"({"grid":[0,1],"points":[[0,0,0]]})")), io::FormatError);
  EXPECT_THROW(io::curve_from_json(nlohmann::json::parse(R"({"grid":[0,1],"points":[[0,0],[1,1]]})")), io::FormatError);
}

TEST(CurveIo, ReportSerialization) {
  const auto r = solve_cc_geodesic({0, 0, 0}, {1, 0, 0}, 16);
  const auto j = io::to_json(r);
  for (const char* key : {"length", "endpoint_miss", "trace", "converged", "curve"}) EXPECT_TRUE(j.contains(key)) << key;
  const auto back = io::control_curve_from_json(j["curve"]);
  EXPECT_EQ(back.endpoint(), r.curve.endpoint());
  EXPECT_EQ(back.length(), r.curve.length());
}
