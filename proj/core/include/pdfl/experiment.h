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

#ifndef PDFL_EXPERIMENT_H_
#define PDFL_EXPERIMENT_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdfl/config.h"
#include "pdfl/data.h"
#include "pdfl/storage.h"
#include "pdfl/trainer.h"

namespace pdfl {

struct PreparedData {
  std::vector<Dataset> shards;
  Dataset test;
  ModelSpec spec;
};

// Loads or synthesizes the dataset, holds out the test split and partitions
// the rest across run.num_clients clients.
PreparedData PrepareData(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentConfig config;
  MetricsLog metrics;
  StorageReport storage;
  double sigma = 0.0;
  std::optional<double> epsilon;  // accountant output; empty when sigma == 0
  std::optional<double> delta;
  std::optional<double> alpha;
  std::string final_model_hash;
  std::size_t dim = 0;
  int pods_written = 0;
};

// Runs one configured experiment and writes histories/, pods/ and the report
// files under out_dir.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::filesystem::path& out_dir);

// accuracy.csv, timing.csv, storage.csv (header plus one block per result)
// and summary.json. Outputs are LF-terminated UTF-8 with a fixed column
// order.
void EmitReport(std::span<const ExperimentResult> results,
                const std::filesystem::path& out_dir);

}  // namespace pdfl

#endif  // PDFL_EXPERIMENT_H_
