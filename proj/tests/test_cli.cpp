#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "edpflow/discrete_gs.hpp"
#include "edpflow/solver.hpp"
#include "edpflow/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace edpflow;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("edpflow-cli-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) const {
    const auto log = dir_ / "stdout.txt";
    const std::string cmd = std::string("\"") + EDPFLOW_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  static std::string scenario(const std::string& name) { return std::string(EDPFLOW_SCENARIOS) + "/" + name + ".json"; }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateExchangeWritesMonotoneEnergy) {
  const auto r = run("simulate --scenario " + scenario("exchange") + " --out " + out("ex"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream csv(dir_ / "ex" / "functionals.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_NE(line.find("E [energy]"), std::string::npos);
  double prev = INFINITY;
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string t, e;
    std::getline(ss, t, ',');
    std::getline(ss, e, ',');
    const double ev = std::stod(e);
    EXPECT_LE(ev, prev);
    prev = ev;
    ++rows;
  }
  EXPECT_EQ(rows, 1001u);

  const auto chk = run("edb-check " + out("ex") + " --tol 1e-3");
  EXPECT_EQ(chk.code, 0) << chk.out;
  EXPECT_NE(chk.out.find("PASS"), std::string::npos);
}

TEST_F(Cli, MissingKappaIsConfigError) {
  const auto r = run("simulate --scenario " + scenario("missing-kappa") + " --out " + out("mk"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("network.reactions[0].kappa"), std::string::npos) << r.out;
}

TEST_F(Cli, AbsurdStiffnessIsSolverError) {
  const auto r = run("simulate --scenario " + scenario("absurd-stiffness") + " --out " + out("st"));
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(Cli, UnknownFlagAndMissingFileAreConfigErrors) {
  EXPECT_EQ(run("simulate --bogus").code, 1);
  EXPECT_EQ(run("simulate --scenario " + out("nope.json")).code, 1);
  EXPECT_EQ(run("edb-check " + out("nowhere")).code, 1);
  EXPECT_EQ(run("simulate --scenario " + scenario("exchange") + " --format xml --out " + out("x")).code, 1);
}

TEST_F(Cli, StationaryRunHasZeroResidual) {
  ASSERT_EQ(run("simulate --scenario " + scenario("stationary") + " --out " + out("eq")).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "eq" / "c.bin"));
  const auto r = run("edb-check --trajectory " + out("eq") + " --tol 0");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("L_N[s,t]    0.000000e+00"), std::string::npos) << r.out;
}

TEST_F(Cli, DoubledFluxesFailWithPositiveGap) {
  ASSERT_EQ(run("simulate --scenario " + scenario("exchange") + " --out " + out("ex")).code, 0);
  auto loaded = read_trajectory(dir_ / "ex");
  for (auto& s : loaded.traj.samples) {
    s.flux_diff *= 2.0;
    s.flux_react *= 2.0;
  }
  write_trajectory(dir_ / "bad", loaded.traj, loaded.network, loaded.species_names, ArrayFormat::csv);
  const auto r = run("edb-check " + out("bad") + " --tol 1e-3");
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  const auto pos = r.out.find("fenchel gap min ");
  ASSERT_NE(pos, std::string::npos);
  const auto max_pos = r.out.find("max ", pos + 16);
  EXPECT_GT(std::stod(r.out.substr(max_pos + 4)), 0.0);
}

TEST_F(Cli, EdbCheckSubinterval) {
  ASSERT_EQ(run("simulate --scenario " + scenario("exchange") + " --out " + out("ex")).code, 0);
  EXPECT_EQ(run("edb-check " + out("ex") + " -s 0.25 -t 0.75").code, 0);
  EXPECT_EQ(run("edb-check " + out("ex") + " -s 0.5 -t 5").code, 1);
}

TEST_F(Cli, ConvergeHeat) {
  const auto r = run("converge --scenario " + scenario("heat") + " --out " + out("heat"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "heat" / "convergence.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "heat" / "convergence.json"));
  std::stringstream ss(r.out);
  std::string line;
  int orders = 0;
  while (std::getline(ss, line)) {
    if (line.rfind("fourier order ", 0) == 0) {
      EXPECT_GE(std::stod(line.substr(14)), 1.8) << line;
      ++orders;
    }
  }
  EXPECT_EQ(orders, 3);
}

TEST_F(Cli, ConvergeBinaryAndHomogeneous) {
  EXPECT_EQ(run("converge --scenario " + scenario("binary") + " --out " + out("bin")).code, 0);
  const auto h = run("converge --scenario " + scenario("homogeneous-exchange") + " --out " + out("hom"));
  EXPECT_EQ(h.code, 0) << h.out;
}

TEST_F(Cli, ConvergeNeedsThreeLevels) {
  EXPECT_EQ(run("converge --scenario " + scenario("exchange") + " --out " + out("c")).code, 1);
}

TEST_F(Cli, PropsDefaultSeedFailsOnlyUpperBound) {
  const auto r = run("props");
  EXPECT_EQ(r.code, 3);
  std::stringstream ss(r.out);
  std::string line;
  int fails = 0;
  while (std::getline(ss, line)) {
    if (line.rfind("FAIL ", 0) == 0) {
      ++fails;
      EXPECT_NE(line.find("cosh.bounds-upper"), std::string::npos) << line;
    }
  }
  EXPECT_EQ(fails, 1);
}

TEST_F(Cli, PropsFilterAndMutation) {
  EXPECT_EQ(run("props --filter discrete_gs.fenchel --count 50").code, 0);
  EXPECT_EQ(run("props --filter discrete_gs.fenchel --count 50 --mutate flux-sign").code, 3);
  EXPECT_EQ(run("props --filter nothing.matches").code, 1);
  EXPECT_EQ(run("props --mutate nonsense").code, 1);
}

TEST_F(Cli, PropsZeroCountWarns) {
  const auto r = run("props --count 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("warning"), std::string::npos);
}

TEST_F(Cli, SimulateIsDeterministicAcrossThreadCounts) {
  // 64^2 cells x 2 species: large enough for the threaded kernels.
  {
    std::ofstream sc(dir_ / "big.json");
    sc << R"json({"network": {"species": ["A", "B"], "reactions": [{"alpha": [1, 0], "beta": [0, 1], "kappa": 1}],
              "diffusion": [1, 0.5], "reference_density": ["1 + 0.5*cos(2*pi*x)", "1"]},
              "grid": {"d": 2, "N": 64},
              "initial": ["1 + 0.5*sin(2*pi*x)*cos(2*pi*y)", "0.5"],
              "time": {"T": 2e-3, "sample_dt": 5e-4, "scheme": "rk4"},
              "outputs": {"directory": "unused", "format": "csv"}})json";
  }
  const std::string base = "\"" + std::string(EDPFLOW_CLI) + "\" simulate --scenario " + out("big.json") + " --out ";
  ASSERT_EQ(std::system(("EDPFLOW_THREADS=4 " + base + out("a") + " > /dev/null").c_str()), 0);
  ASSERT_EQ(std::system(("EDPFLOW_THREADS=1 " + base + out("b") + " > /dev/null").c_str()), 0);
  for (const char* f : {"functionals.csv", "c.csv", "F.csv", "J.csv", "metadata.json"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}
