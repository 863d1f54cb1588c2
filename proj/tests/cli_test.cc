#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"

namespace {

namespace fs = std::filesystem;
using pdfl::testing::TempDir;

struct Result {
  int code = -1;
  std::string output;  // stdout and stderr
};

Result Cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + PDFL_CLI_PATH + " " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 512> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Config(const std::string& run, const std::string& privacy,
                   const std::string& out) {
  return R"({"schema_version": 1, "name": "cli",
    "dataset": {"n": 400, "input_dim": 4, "num_classes": 2},
    "run": )" + run + R"(, "unlearning": {"probability": 0.5, "seed": 2},
    "privacy": )" + privacy + R"(, "output": {"dir": ")" + out + R"("}})";
}

void Write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::string kRun = R"({"num_clients": 8, "rounds": 4, "k": 4, "x": 2, "delta": 2.0})";

TEST(Cli, RunWritesArtifactsUnderOutputRoot) {
  TempDir dir("cli");
  Write(dir.path() / "c.json", Config(kRun, R"({"sigma": 0.5})", "out"));
  const auto r = Cli("run " + (dir.path() / "c.json").string(),
                     "PDFL_OUTPUT_ROOT=" + dir.path().string());
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"accuracy.csv", "timing.csv", "storage.csv", "summary.json",
                        "histories/manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "out" / f)) << f;
  }
}

TEST(Cli, SchemaErrorsExitTwoWithFieldPath) {
  TempDir dir("cli");
  Write(dir.path() / "xk.json",
        Config(R"({"num_clients": 8, "k": 2, "x": 3})", R"({"sigma": 1})", "o"));
  auto r = Cli("run " + (dir.path() / "xk.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("run.x"), std::string::npos) << r.output;

  Write(dir.path() / "both.json",
        Config(kRun, R"({"sigma": 1, "epsilon": 8, "delta": 1e-5})", "o"));
  r = Cli("run " + (dir.path() / "both.json").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("privacy"), std::string::npos) << r.output;
}

TEST(Cli, RuntimeFailureExitsOne) {
  EXPECT_EQ(Cli("run /nonexistent/config.json").code, 1);
  TempDir dir("cli");
  // Three clients with k = 3: the first removal leaves too few to cluster.
  Write(dir.path() / "abort.json",
        R"({"schema_version": 1, "dataset": {"n": 300, "input_dim": 3},
            "run": {"num_clients": 3, "rounds": 30, "k": 3, "x": 1},
            "unlearning": {"probability": 1.0}, "privacy": {"sigma": 0},
            "output": {"dir": ")" + (dir.path() / "o").string() + R"("}})");
  const auto r = Cli("run " + (dir.path() / "abort.json").string());
  EXPECT_EQ(r.code, 1) << r.output;
}

TEST(Cli, VerifyPodExitCodes) {
  TempDir dir("cli");
  Write(dir.path() / "c.json", Config(kRun, R"({"sigma": 0.5})",
                                      (dir.path() / "out").string()));
  ASSERT_EQ(Cli("run " + (dir.path() / "c.json").string()).code, 0);
  fs::path pod;
  for (const auto& e : fs::directory_iterator(dir.path() / "out" / "pods")) {
    if (e.path().extension() == ".json") pod = e.path();
  }
  ASSERT_FALSE(pod.empty());
  fs::path hist = pod;
  hist.replace_extension(".history");
  auto r = Cli("verify-pod " + pod.string() + " " + hist.string());
  EXPECT_EQ(r.code, 0) << r.output;

  std::ifstream in(pod);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  const auto at = text.find("\"x\":2");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 5, "\"x\":1");
  Write(pod, text);
  r = Cli("verify-pod " + pod.string() + " " + hist.string());
  EXPECT_EQ(r.code, 1) << r.output;
  EXPECT_NE(r.output.find("REJECTED"), std::string::npos);

  Write(pod, "{broken");
  EXPECT_EQ(Cli("verify-pod " + pod.string() + " " + hist.string()).code, 2);
}

TEST(Cli, Calibrate) {
  auto r = Cli("calibrate --epsilon 8 --delta 1e-5 --rounds 50");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("sigma"), std::string::npos);
  r = Cli("calibrate --epsilon 100 --delta 1e-5 --rounds 50");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("8*ln(1/delta)"), std::string::npos) << r.output;
}

TEST(Cli, SweepWritesCombinedReport) {
  TempDir dir("cli");
  fs::create_directories(dir.path() / "cfg");
  for (int k : {2, 4}) {
    const std::string run = R"({"num_clients": 8, "rounds": 3, "k": )" +
                            std::to_string(k) + R"(, "x": 2})";
    Write(dir.path() / "cfg" / ("k" + std::to_string(k) + ".json"),
          Config(run, R"({"sigma": 0.5})", "unused"));
  }
  const auto r = Cli("sweep " + (dir.path() / "cfg").string() + " --out " +
                     (dir.path() / "sweep").string());
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream acc(dir.path() / "sweep" / "accuracy.csv");
  int lines = 0;
  for (std::string l; std::getline(acc, l);) ++lines;
  EXPECT_EQ(lines, 1 + 2 * 3);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("calibrate --epsilon 1").code, 2);
}

}  // namespace
