#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(KTRR_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) o.output.append(buf, got);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / (std::string("ktrr_cli_") +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    config_ = dir_ / "config.json";
    std::ofstream(config_) << R"({
  "dataset": {"format": "circles", "per_cluster": 15},
  "kmeans": {"restarts": 5},
  "corruption": {"low": "data", "high": "data"},
  "curve": {"snr_db": [20, 40], "ratio": [0.1]},
  "runs": 2,
  "seed": 3
})";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string common() const { return config_.string() + " --out " + (dir_ / "out").string() + " -q"; }

  fs::path dir_, config_;
};

TEST_F(Cli, HelpListsEveryConfigKeyAndTheThreadVariable) {
  const auto o = run("--help");
  EXPECT_EQ(o.status, 0);
  for (const char* key : {"dataset.format", "kernel.kind", "kernel.sigma", "lambda", "eta", "threshold.mode",
                          "embedding.skip_zero_eigs", "kmeans.restarts", "corruption.snr_db", "metrics.nmi_norm",
                          "sweep.lambda", "curve.ratio", "runs", "seed"}) {
    EXPECT_NE(o.output.find(key), std::string::npos) << key;
  }
  EXPECT_NE(o.output.find("KTRR_NUM_THREADS"), std::string::npos);
}

TEST_F(Cli, RunWritesReports) {
  const auto o = run("run " + common());
  ASSERT_EQ(o.status, 0) << o.output;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "affinity.csv"));
  EXPECT_NE(slurp(dir_ / "out" / "report.json").find("\"mode\": \"run\""), std::string::npos);
}

TEST_F(Cli, DumpMatrices) {
  const auto o = run("run " + common() + " --dump-matrices");
  ASSERT_EQ(o.status, 0) << o.output;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "affinity.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "embedding.csv"));
}

TEST_F(Cli, SweepWithOverrides) {
  const auto o = run("sweep " + common() + " --set sweep.eta=[2,3] --set kernel.kind=heat --runs 1");
  ASSERT_EQ(o.status, 0) << o.output;
  const std::string csv = slurp(dir_ / "out" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(slurp(dir_ / "out" / "report.json").find("\"heat\""), std::string::npos);
}

TEST_F(Cli, CorruptCurve) {
  const auto o = run("corrupt-curve " + common());
  ASSERT_EQ(o.status, 0) << o.output;
  const std::string csv = slurp(dir_ / "out" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 2);
}

TEST_F(Cli, SameSeedSameReport) {
  ASSERT_EQ(run("run " + common()).status, 0);
  const std::string first = slurp(dir_ / "out" / "report.json");
  ASSERT_EQ(run("run " + common()).status, 0);
  const std::string second = slurp(dir_ / "out" / "report.json");
  const auto cut = [](const std::string& s) { return s.substr(0, s.find("\"timing\"")); };
  EXPECT_EQ(cut(first), cut(second));
}

TEST_F(Cli, FailuresExitNonzeroWithTheStep) {
  const auto o = run("run " + common() + " --set eta=500");
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.output.find("solver:"), std::string::npos) << o.output;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
}

TEST_F(Cli, BadConfigIsRejected) {
  std::ofstream(dir_ / "bad.json") << R"({"lamda": 1})";
  const auto o = run("run " + (dir_ / "bad.json").string());
  EXPECT_EQ(o.status, 1);
  EXPECT_NE(o.output.find("lamda"), std::string::npos);
  EXPECT_NE(run("run " + (dir_ / "missing.json").string()).status, 0);
  EXPECT_NE(run("frobnicate").status, 0);
}

TEST_F(Cli, Selfcheck) {
  const auto o = run("selfcheck");
  EXPECT_EQ(o.status, 0) << o.output;
  EXPECT_EQ(o.output.find("[FAIL]"), std::string::npos);
}

}  // namespace
