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

#ifndef PDFL_CONFIG_H_
#define PDFL_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pdfl/data.h"
#include "pdfl/errors.h"
#include "pdfl/federated.h"
#include "pdfl/model.h"

namespace pdfl {

inline constexpr int kConfigSchemaVersion = 1;

// Config rejected by the schema; field_path() is a dotted path such as
// "run.x".
class SchemaError : public ConfigError {
 public:
  SchemaError(std::string field_path, const std::string& message);
  const std::string& field_path() const { return field_path_; }
  // The message without the field path prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string field_path_;
  std::string detail_;
};

enum class DataSource { kSynthetic, kIdx };

struct DatasetConfig {
  DataSource source = DataSource::kSynthetic;
  // synthetic
  std::size_t n = 2000;
  std::size_t input_dim = 20;
  int num_classes = 2;
  std::uint64_t seed = 0;
  double class_separation = 3.0;
  double noise_stddev = 1.0;
  // idx
  std::string images;
  std::string labels;
  std::size_t subset = 0;  // 0 keeps every example
  double holdout_fraction = 0.2;

  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

// Exactly one of sigma or (epsilon, delta) is set.
struct PrivacyTarget {
  std::optional<double> sigma;
  std::optional<double> epsilon;
  std::optional<double> delta;

  friend bool operator==(const PrivacyTarget&, const PrivacyTarget&) = default;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "experiment";
  DatasetConfig dataset;
  PartitionMode partition_mode = PartitionMode::kIid;
  int classes_per_client = 1;
  std::uint64_t partition_seed = 0;
  ModelKind model_kind = ModelKind::kLogisticRegression;
  std::size_t hidden_dim = 0;
  // run.sigma is filled from `privacy` by ResolveSigma.
  RunConfig run;
  double unlearn_probability = 0.2;
  std::uint64_t unlearn_seed = 0;
  PrivacyTarget privacy;
  std::string output_dir = "out";
  bool record_wall_clock = true;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) =
      default;
};

// Parses and validates a JSON config. Throws SchemaError.
ExperimentConfig ParseConfig(std::string_view json_text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
std::string SerializeConfig(const ExperimentConfig& config);

// Explicit sigma, or CalibrateSigma(epsilon, delta, run.rounds).
double ResolveSigma(const ExperimentConfig& config);

// Output directory with the PDFL_OUTPUT_ROOT override applied to relative
// paths.
std::filesystem::path ResolveOutputDir(const ExperimentConfig& config);

inline constexpr const char* kOutputRootEnv = "PDFL_OUTPUT_ROOT";

}  // namespace pdfl

#endif  // PDFL_CONFIG_H_
