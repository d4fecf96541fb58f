#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "heisgeo/curve_io.hpp"
#include "heisgeo/heisenberg.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + HEISGEO_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("heisgeo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Dist) {
  auto r = run("dist 0,0,0 0,0,0.0795775");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.282094842207\n");
  r = run("dist 0,0,0 1,1,0");
  EXPECT_EQ(r.out, "1.41421356237\n");
  EXPECT_EQ(run("dist 1,2,3 1,2,3").out, "0\n");
  EXPECT_EQ(run("dist -1,0,0 0,1,0").out, "1.68179283051\n");
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("dist 0,0 1,1,1").code, 2);
  EXPECT_EQ(run("dist a,b,c 1,1,1").code, 2);
  EXPECT_EQ(run("dist 0,0,0").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("geodesic 0,0,0 1,0,0 --N 4").code, 2);
  EXPECT_EQ(run("plot").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, LengthExitCodes) {
  write("seg.csv", "t,x,y,z\n0,0,0,0\n0.5,0.5,0,0\n1,1,0,0\n");
  write("vert.csv", "t,x,y,z\n0,0,0,0\n1,0,0,1\n");
  write("bad.csv", "t,x\n0,0\n");
  auto r = run("length " + path("seg.csv"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value"].get<double>(), 1.0, 1e-12);
  r = run("length " + path("vert.csv") + " --max-levels 8");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(nlohmann::json::parse(r.out)["converged"], false);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value"].get<double>(), 16.0, 1e-12);
  EXPECT_EQ(run("length " + path("missing.csv")).code, 1);
  EXPECT_EQ(run("length " + path("bad.csv")).code, 1);
  EXPECT_EQ(run("length " + path("seg.csv") + " --metric taxicab").code, 2);
}

TEST_F(Cli, ExampleLengthAndRoundTrip) {
  ASSERT_EQ(run("example --samples 4096 --out " + path("ex.json")).code, 0);
  const auto loaded = heisgeo::io::load_curve(path("ex.json"));
  const auto direct = heisgeo::example_geodesic_curve(4096);
  ASSERT_EQ(loaded.sample_count(), direct.sample_count());
  for (std::size_t i = 0; i < loaded.sample_count(); ++i) ASSERT_EQ(loaded.points()[i], direct.points()[i]);
  const auto r = run("length " + path("ex.json") + " --tol 1e-5");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value"].get<double>(), 0.5, 1e-3);

  ASSERT_EQ(run("lift " + path("ex.json") + " --out " + path("lift.csv")).code, 0);
  EXPECT_NEAR(heisgeo::io::load_curve(path("lift.csv")).back().z, heisgeo::kExampleHeight, 1e-7);
  ASSERT_EQ(run("reparam " + path("ex.json") + " --out " + path("rep.json")).code, 0);
  const auto rep = heisgeo::io::load_curve(path("rep.json"));
  EXPECT_EQ(rep.a(), 0.0);
  EXPECT_EQ(rep.b(), 1.0);
}

TEST_F(Cli, GeodesicDeterministicAndSeedEnv) {
  const std::string args = "geodesic 0,0,0 0,0,0.0795775 --N 256 --seed 7";
  const auto a = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(run(args).out, a.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_NEAR(j["length"].get<double>(), 0.5, 5e-3);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(run("geodesic 0,0,0 0,0,0.0795775 --N 256", "HEISGEO_SEED=7").out, a.out);
}

TEST_F(Cli, PlotAndTrace) {
  ASSERT_EQ(run("plot --example --out " + path("ex.svg")).code, 0);
  std::ifstream svg(path("ex.svg"));
  std::string first;
  std::getline(svg, first);
  EXPECT_EQ(first.rfind("<svg", 0), 0u);
  ASSERT_EQ(run("geodesic 0,0,0 0.5,0.5,0.2 --N 64 --out " + path("rep.json")).code, 0);
  ASSERT_EQ(run("plot " + path("rep.json") + " --trace " + path("trace.csv") + " --out " + path("geo.svg")).code, 0);
  EXPECT_TRUE(fs::exists(path("geo.svg")));
  std::ifstream trace(path("trace.csv"));
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, "outer,penalty,raw_length,feasible_length,incumbent,penalty_update");
}

TEST_F(Cli, VerifySubset) {
  const auto r = run("verify --only 1,9");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS  criterion 1"), std::string::npos);
  EXPECT_NE(r.out.find("PASS  criterion 9"), std::string::npos);
  EXPECT_EQ(r.out.find("criterion 3"), std::string::npos);
}
