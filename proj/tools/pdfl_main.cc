// Copyright 2026 The pdfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pdfl command-line driver.
//
// Exit codes: 0 success, 1 runtime failure (or a rejected proof), 2 schema or
// usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdfl/config.h"
#include "pdfl/errors.h"
#include "pdfl/experiment.h"
#include "pdfl/history.h"
#include "pdfl/pod.h"
#include "pdfl/privacy.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitSchema = 2;

int ReportSchema(const pdfl::SchemaError& e) {
  std::cerr << "schema error at '" << e.field_path() << "': " << e.detail() << "\n";
  return kExitSchema;
}

void PrintSummary(const pdfl::ExperimentResult& r, const fs::path& out) {
  const auto& m = r.metrics;
  std::printf("%s: %s k=%d x=%d sigma=%.6g\n", r.config.name.c_str(),
              pdfl::AlgorithmName(r.config.run.algorithm), r.config.run.k,
              r.config.run.x, r.sigma);
  if (!m.accuracy.empty()) std::printf("  final accuracy  %.4f\n", m.accuracy.back());
  std::printf("  requests served %d, retrains %d (%.3f s)\n", m.requests_served,
              m.retrain_count(), m.retrain_seconds());
  if (r.epsilon) {
    std::printf("  privacy         eps=%.6g delta=%.3g alpha=%.6g\n", *r.epsilon,
                *r.delta, *r.alpha);
  }
  std::printf("  storage         index-only %llu B, full-updates %llu B (x%.2f)\n",
              static_cast<unsigned long long>(r.storage.index_only_bytes),
              static_cast<unsigned long long>(r.storage.full_updates_bytes),
              r.storage.ratio);
  std::printf("  output          %s\n", out.string().c_str());
}

int CmdRun(const std::string& config_path) {
  pdfl::ExperimentConfig cfg;
  try {
    cfg = pdfl::LoadConfig(config_path);
  } catch (const pdfl::SchemaError& e) {
    return ReportSchema(e);
  }
  const fs::path out = pdfl::ResolveOutputDir(cfg);
  pdfl::ExperimentResult res = pdfl::RunExperiment(cfg, out);
  pdfl::EmitReport(std::span(&res, 1), out);
  PrintSummary(res, out);
  return kExitOk;
}

int CmdVerify(const std::string& pod_path, const std::string& history_dir) {
  pdfl::SignedPod signed_pod;
  try {
    signed_pod = pdfl::ReadPod(pod_path);
  } catch (const pdfl::FormatError& e) {
    std::cerr << "malformed proof: " << e.what() << "\n";
    return kExitSchema;
  }
  const pdfl::HistoryStore store = pdfl::HistoryStore::Load(history_dir);
  const pdfl::PodCheck check =
      pdfl::CheckPod(signed_pod.pod, signed_pod.digest, store.rounds());
  if (!check.ok) {
    std::printf("REJECTED: %s\n", check.reason.c_str());
    return kExitRuntime;
  }
  std::printf("VALID: target c%d, %zu rounds, x=%d delta=%.17g\n",
              signed_pod.pod.target_id, signed_pod.pod.entries.size(),
              signed_pod.pod.x, signed_pod.pod.delta);
  return kExitOk;
}

int CmdSweep(const std::string& config_dir, const std::string& out_opt) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no *.json configs in " << config_dir << "\n";
    return kExitRuntime;
  }
  // Validate everything before the first run starts.
  std::vector<pdfl::ExperimentConfig> configs;
  for (const auto& f : files) {
    try {
      configs.push_back(pdfl::LoadConfig(f));
    } catch (const pdfl::SchemaError& e) {
      std::cerr << f.string() << ": ";
      return ReportSchema(e);
    }
  }
  pdfl::ExperimentConfig root_cfg;
  root_cfg.output_dir = out_opt;
  const fs::path out = pdfl::ResolveOutputDir(root_cfg);

  std::vector<pdfl::ExperimentResult> results;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const fs::path run_out = out / files[i].stem();
    results.push_back(pdfl::RunExperiment(configs[i], run_out));
    pdfl::EmitReport(std::span(&results.back(), 1), run_out);
    PrintSummary(results.back(), run_out);
  }
  pdfl::EmitReport(results, out);
  std::printf("combined report: %s\n", out.string().c_str());
  return kExitOk;
}

int CmdCalibrate(double epsilon, double delta, int rounds) {
  pdfl::PrivacyBudget b;
  try {
    b = pdfl::CalibrateBudget(epsilon, delta, rounds);
  } catch (const pdfl::DomainError& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return kExitSchema;
  }
  const double eps_back = pdfl::AccountEpsilon(b.sigma, b.alpha, delta, rounds);
  std::printf("sigma        %.17g\n", b.sigma);
  std::printf("sigma^2      %.17g\n", b.sigma * b.sigma);
  std::printf("alpha        %.17g\n", b.alpha);
  std::printf("rdp/round    %.17g\n", b.rho_per_round);
  std::printf("epsilon'     %.17g\n", eps_back);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated unlearning with plausible deniability"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config file (JSON)")->required();

  std::string pod_path, history_dir;
  auto* verify = app.add_subcommand("verify-pod", "Check a proof against a history");
  verify->add_option("pod-file", pod_path)->required();
  verify->add_option("history-dir", history_dir)->required();

  std::string config_dir, sweep_out = "sweep";
  auto* sweep = app.add_subcommand("sweep", "Run every config in a directory");
  sweep->add_option("config-dir", config_dir)->required();
  sweep->add_option("--out", sweep_out, "Combined report directory")
      ->capture_default_str();

  double epsilon = 0.0, delta = 0.0;
  int rounds = 0;
  auto* calibrate = app.add_subcommand("calibrate", "Noise multiplier for a budget");
  calibrate->add_option("--epsilon", epsilon)->required();
  calibrate->add_option("--delta", delta)->required();
  calibrate->add_option("--rounds", rounds)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*run) return CmdRun(config_path);
    if (*verify) return CmdVerify(pod_path, history_dir);
    if (*sweep) return CmdSweep(config_dir, sweep_out);
    if (*calibrate) return CmdCalibrate(epsilon, delta, rounds);
  } catch (const pdfl::SchemaError& e) {
    return ReportSchema(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
