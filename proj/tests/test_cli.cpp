#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hyperflow_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd '" + workdir().string() + "' && '" HYPERFLOW_CLI "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const std::string& name, const std::string& text) { std::ofstream(workdir() / name) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t lines(const fs::path& p) {
  std::ifstream in(p);
  std::string s;
  std::size_t n = 0;
  while (std::getline(in, s)) ++n;
  return n;
}

}  // namespace

TEST(Cli, FixturesWritesShippedConfigs) {
  EXPECT_EQ(run("fixtures --out fx"), 0);
  for (const char* id : {"origin_circle", "offcenter_circle", "flower", "peanut", "flat_horosphere", "sine_horograph_01",
                         "sine_horograph_03", "counterexample_gradient"})
    EXPECT_TRUE(fs::exists(workdir() / "fx" / (std::string(id) + ".json"))) << id;
  EXPECT_EQ(run("flow --config fx/flat_horosphere.json --out flat"), 0);
}

TEST(Cli, MalformedConfigExits2) {
  write("bad.json", R"({"version": 1, "t_end": 1, "mystery": true})");
  EXPECT_EQ(run("flow --config bad.json"), 2);
  write("broken.json", "{\"version\": 1,");
  EXPECT_EQ(run("flow --config broken.json"), 2);
  EXPECT_EQ(run("flow --config missing.json"), 2);
  EXPECT_EQ(run("verify --fixture flower --suite nope"), 2);
  EXPECT_EQ(run("flow"), 2);
}

TEST(Cli, FlowWritesTrajectoryAndDiagnostics) {
  write("circle.json", R"({"version": 1, "scenario": {"kind": "circle", "radius": 0.5, "resolution": 128},
                           "t_end": 1, "records": 4, "output": {"dir": "circle"}})");
  ASSERT_EQ(run("flow --config circle.json"), 0);
  const fs::path traj = workdir() / "circle" / "trajectory.jsonl";
  EXPECT_EQ(lines(traj), 1u + 5u);
  EXPECT_EQ(lines(workdir() / "circle" / "diagnostics.csv"), 2u + 5u);

  ASSERT_EQ(run("export-plot circle/trajectory.jsonl --out circle/plot.csv"), 0);
  EXPECT_EQ(lines(workdir() / "circle" / "plot.csv"), 2u + 5u * 128u);

  // Identical configs give byte-identical outputs; the output directory is not hashed.
  ASSERT_EQ(run("flow --config circle.json --out circle2"), 0);
  EXPECT_EQ(slurp(traj), slurp(workdir() / "circle2" / "trajectory.jsonl"));
}

TEST(Cli, ZeroEndTimeGivesSingleSnapshot) {
  write("zero.json", R"({"version": 1, "scenario": {"resolution": 64}, "t_end": 0})");
  ASSERT_EQ(run("flow --config zero.json --out zero"), 0);
  EXPECT_EQ(lines(workdir() / "zero" / "trajectory.jsonl"), 2u);
}

TEST(Cli, HaltExits3WithPartialOutput) {
  EXPECT_EQ(run("flow --fixture peanut --out peanut"), 3);
  const std::string header = slurp(workdir() / "peanut" / "trajectory.jsonl");
  EXPECT_NE(header.find("\"halt\""), std::string::npos);
  EXPECT_EQ(lines(workdir() / "peanut" / "trajectory.jsonl"), 2u);
}

TEST(Cli, AdmissibleReport) {
  ASSERT_EQ(run("admissible --fixture offcenter_circle --out adm"), 0);
  const std::string j = slurp(workdir() / "adm" / "admissibility.json");
  EXPECT_NE(j.find("\"s_bar\": 0.49"), std::string::npos);
  ASSERT_EQ(run("admissible --fixture sine_horograph_03 --out adm_nc"), 0);
  EXPECT_NE(slurp(workdir() / "adm_nc" / "admissibility.json").find("hemisphere_sweep"), std::string::npos);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify --fixture counterexample_gradient --suite gradient_estimate --out ce"), 1);
  EXPECT_NE(slurp(workdir() / "ce" / "report_gradient_estimate.json").find("\"status\": \"fail\""), std::string::npos);

  write("short.json", R"({"version": 1, "scenario": {"resolution": 64}, "t_end": 0.5})");
  EXPECT_EQ(run("verify --config short.json --suite umbilic_convergence --out short"), 0);
  write("short_gated.json", R"({"version": 1, "scenario": {"resolution": 64}, "t_end": 0.5, "allow_inconclusive": false})");
  EXPECT_EQ(run("verify --config short_gated.json --suite umbilic_convergence --out gated"), 4);

  write("off.json", R"({"version": 1, "scenario": {"offset": 0.5, "resolution": 128}, "t_end": 0.5, "records": 10})");
  EXPECT_EQ(run("verify --config off.json --suite admissibility_preserved --out off"), 0);
  EXPECT_TRUE(fs::exists(workdir() / "off" / "admissibility_preserved_trajectory.jsonl"));
}
