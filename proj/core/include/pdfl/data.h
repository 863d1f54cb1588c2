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

#ifndef PDFL_DATA_H_
#define PDFL_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace pdfl {

// Labeled examples, features stored row-major (size() x input_dim).
struct Dataset {
  std::size_t input_dim = 0;
  int num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::span<const double> Row(std::size_t i) const {
    return {features.data() + i * input_dim, input_dim};
  }

  Dataset Subset(std::span<const std::size_t> rows) const;

  // Throws ConfigError when shapes disagree or a label is out of range.
  void Validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SynthOptions {
  // Class means are drawn from N(0, separation^2 I); within-class noise is
  // N(0, noise_stddev^2 I).
  double class_separation = 3.0;
  double noise_stddev = 1.0;
};

// Gaussian class-cluster data. Labels cycle through every class before being
// shuffled, so each class is present whenever n >= num_classes.
Dataset SynthClassification(std::size_t n, std::size_t input_dim,
                            int num_classes, std::uint64_t seed,
                            const SynthOptions& options = {});

// Reads an IDX image/label pair (magic 0x00000803 / 0x00000801). Pixels are
// scaled to [0, 1]; images are flattened row-major.
Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path);

enum class PartitionMode { kIid, kLabelSkew };

struct PartitionPlan {
  PartitionMode mode = PartitionMode::kIid;
  int num_clients = 1;
  int skew_classes_per_client = 1;
  std::uint64_t seed = 0;
};

// Row indices per client. Shards are disjoint and cover every row.
std::vector<std::vector<std::size_t>> PartitionIndices(
    const Dataset& ds, const PartitionPlan& plan);

std::vector<Dataset> Partition(const Dataset& ds, const PartitionPlan& plan);

// Splits off a held-out evaluation set. Returns (train, holdout).
std::pair<Dataset, Dataset> SplitHoldout(const Dataset& ds, double fraction,
                                         std::uint64_t seed);

// First n rows after a seeded shuffle; used for the 10k MNIST subsets.
Dataset SampleSubset(const Dataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace pdfl

#endif  // PDFL_DATA_H_
