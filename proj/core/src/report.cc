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

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "canonical_json.h"
#include "pdfl/experiment.h"

namespace pdfl {
namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string RunKey(const ExperimentResult& r) {
  return std::string(AlgorithmName(r.config.run.algorithm)) + "," +
         std::to_string(r.config.run.k) + "," + std::to_string(r.config.run.x);
}

nlohmann::json Optional(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json Summary(const ExperimentResult& r) {
  const auto& run = r.config.run;
  const auto& m = r.metrics;
  return {
      {"name", r.config.name},
      {"algorithm", AlgorithmName(run.algorithm)},
      {"num_clients", run.num_clients},
      {"rounds", run.rounds},
      {"k", run.k},
      {"x", run.x},
      {"delta", run.delta},
      {"metric", MetricName(run.metric)},
      {"storage_mode", StorageModeName(run.storage_mode)},
      {"noise_convention", NoiseConventionName(run.noise_convention)},
      {"sigma", r.sigma},
      {"epsilon", Optional(r.epsilon)},
      {"dp_delta", Optional(r.delta)},
      {"rdp_alpha", Optional(r.alpha)},
      {"final_accuracy", m.accuracy.empty() ? nlohmann::json(nullptr)
                                            : nlohmann::json(m.accuracy.back())},
      {"requests_served", m.requests_served},
      {"retrain_count", m.retrain_count()},
      {"retrain_seconds", m.retrain_seconds()},
      {"rounds_executed", m.rounds_executed},
      {"pods_written", r.pods_written},
      {"dim", r.dim},
      {"index_only_bytes", r.storage.index_only_bytes},
      {"full_updates_bytes", r.storage.full_updates_bytes},
      {"storage_ratio", r.storage.ratio},
      {"final_model_sha256", r.final_model_hash},
  };
}

}  // namespace

void EmitReport(std::span<const ExperimentResult> results,
                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::string acc = "round,algorithm,k,x,acc\n";
  std::string timing =
      "algorithm,k,x,request_round,target,violation_round,violation_cluster,"
      "kind,rounds_reexecuted,seconds\n";
  std::string storage = "algorithm,k,x,index_only_bytes,full_updates_bytes,ratio\n";
  nlohmann::json runs = nlohmann::json::array();

  for (const auto& r : results) {
    const std::string key = RunKey(r);
    for (std::size_t t = 0; t < r.metrics.accuracy.size(); ++t) {
      acc += std::to_string(t + 1) + "," + key + "," + Num(r.metrics.accuracy[t]) +
             "\n";
    }
    for (const auto& ev : r.metrics.retrains) {
      timing += key + "," + std::to_string(ev.request_round) + "," +
                std::to_string(ev.target_id) + "," +
                std::to_string(ev.violation_round) + "," +
                std::to_string(ev.violation_cluster) + "," +
                ViolationKindName(ev.kind) + "," +
                std::to_string(ev.rounds_reexecuted) + "," + Num(ev.seconds) + "\n";
    }
    storage += key + "," + std::to_string(r.storage.index_only_bytes) + "," +
               std::to_string(r.storage.full_updates_bytes) + "," +
               Num(r.storage.ratio) + "\n";
    runs.push_back(Summary(r));
  }

  internal::WriteTextFile(out_dir / "accuracy.csv", acc);
  internal::WriteTextFile(out_dir / "timing.csv", timing);
  internal::WriteTextFile(out_dir / "storage.csv", storage);
  nlohmann::json summary = {{"format_version", 1}, {"runs", runs}};
  internal::WriteTextFile(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace pdfl
