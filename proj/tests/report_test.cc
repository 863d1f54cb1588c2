#include <algorithm>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pdfl/config.h"
#include "pdfl/experiment.h"
#include "test_util.h"

namespace pdfl {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig Small(int k, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.name = "small-k" + std::to_string(k);
  c.dataset.n = 600;
  c.dataset.input_dim = 5;
  c.dataset.num_classes = 3;
  c.run.num_clients = 12;
  c.run.rounds = 6;
  c.run.k = k;
  c.run.x = 2;
  c.run.master_seed = seed;
  c.unlearn_probability = 0.3;
  c.unlearn_seed = seed;
  c.privacy.sigma = 1.0;
  c.record_wall_clock = false;
  return c;
}

TEST(EmitReport, EmptyRunGivesHeaderOnlyCsvs) {
  TempDir dir("report");
  EmitReport({}, dir.path());
  EXPECT_EQ(Slurp(dir.path() / "accuracy.csv"), "round,algorithm,k,x,acc\n");
  EXPECT_EQ(Lines(Slurp(dir.path() / "timing.csv")).size(), 1u);
  EXPECT_EQ(Slurp(dir.path() / "storage.csv"),
            "algorithm,k,x,index_only_bytes,full_updates_bytes,ratio\n");
  EXPECT_NE(Slurp(dir.path() / "summary.json").find("\"runs\": []"), std::string::npos);
}

TEST(EmitReport, UnwritableDirectoryThrows) {
  TempDir dir("report");
  std::ofstream(dir.path() / "file") << "x";
  EXPECT_ANY_THROW(EmitReport({}, dir.path() / "file" / "sub"));
}

TEST(RunExperiment, TwoIdenticalRunsAreByteIdentical) {
  TempDir a("run"), b("run");
  const auto cfg = Small(3);
  const auto ra = RunExperiment(cfg, a.path());
  EmitReport(std::span(&ra, 1), a.path());
  const auto rb = RunExperiment(cfg, b.path());
  EmitReport(std::span(&rb, 1), b.path());

  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a.path())) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a.path()));
  }
  std::sort(files.begin(), files.end());
  ASSERT_GT(files.size(), 4u);
  for (const auto& f : files) {
    EXPECT_EQ(Slurp(a.path() / f), Slurp(b.path() / f)) << f;
  }
  EXPECT_EQ(ra.final_model_hash, rb.final_model_hash);
}

TEST(RunExperiment, ArtifactsAreConsistent) {
  TempDir dir("run");
  auto cfg = Small(3, 5);
  cfg.unlearn_probability = 0.5;
  const auto r = RunExperiment(cfg, dir.path());
  EmitReport(std::span(&r, 1), dir.path());

  int pods = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "pods")) {
    if (e.path().extension() == ".json") ++pods;
  }
  EXPECT_EQ(pods, r.metrics.requests_served);
  EXPECT_EQ(r.pods_written, r.metrics.requests_served);

  const auto timing = Lines(Slurp(dir.path() / "timing.csv"));
  EXPECT_EQ(static_cast<int>(timing.size()) - 1, r.metrics.retrain_count());
  for (const auto& ev : r.metrics.retrains) {
    EXPECT_GE(ev.violation_round, 1);
    EXPECT_LT(ev.violation_round, ev.request_round);
  }
  EXPECT_EQ(Lines(Slurp(dir.path() / "accuracy.csv")).size(), 1u + cfg.run.rounds);
  EXPECT_EQ(StorageAccountingFromDisk(dir.path() / "histories"), r.storage);

  for (const auto& f : {"accuracy.csv", "timing.csv", "storage.csv", "summary.json"}) {
    EXPECT_EQ(Slurp(dir.path() / f).find('\r'), std::string::npos) << f;
  }
}

TEST(EmitReport, SweepRowCounts) {
  TempDir dir("sweep");
  std::vector<ExperimentResult> results;
  for (int k : {4, 6, 8, 10}) {
    auto cfg = Small(k);
    cfg.run.num_clients = 20;
    cfg.unlearn_probability = 0.0;
    results.push_back(RunExperiment(cfg, dir.path() / cfg.name));
  }
  EmitReport(results, dir.path());
  const auto acc = Lines(Slurp(dir.path() / "accuracy.csv"));
  EXPECT_EQ(acc.size(), 1u + 4 * 6);
  EXPECT_EQ(Lines(Slurp(dir.path() / "storage.csv")).size(), 5u);
  EXPECT_EQ(acc[1].rfind("1,k-ipfedavg,4,2,", 0), 0u) << acc[1];
}

}  // namespace
}  // namespace pdfl
