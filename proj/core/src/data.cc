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

#include "pdfl/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "pdfl/errors.h"
#include "pdfl/seeds.h"

namespace pdfl {
namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string Hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

// Big-endian u32 at `offset`; the caller has checked the length.
std::uint32_t ReadBigEndian32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + i]);
  }
  return v;
}

void RequireLength(const std::string& bytes, std::size_t expected,
                   const std::filesystem::path& path) {
  if (bytes.size() < expected) {
    throw FormatError(path.string() + ": truncated at byte " +
                      std::to_string(bytes.size()) + ", expected " +
                      std::to_string(expected) + " bytes, actual " +
                      std::to_string(bytes.size()));
  }
}

void RequireMagic(const std::string& bytes, std::uint32_t expected,
                  const std::filesystem::path& path) {
  RequireLength(bytes, 4, path);
  std::uint32_t magic = ReadBigEndian32(bytes, 0);
  if (magic != expected) {
    throw FormatError(path.string() + ": bad magic at byte 0: expected " +
                      Hex32(expected) + ", got " + Hex32(magic));
  }
}

std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.input_dim = input_dim;
  out.num_classes = num_classes;
  out.features.reserve(rows.size() * input_dim);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    auto row = Row(r);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(labels[r]);
  }
  return out;
}

void Dataset::Validate() const {
  if (input_dim == 0) throw ConfigError("dataset input_dim must be positive");
  if (num_classes < 1) throw ConfigError("dataset num_classes must be >= 1");
  if (features.size() != labels.size() * input_dim) {
    throw ConfigError("dataset feature matrix has " +
                      std::to_string(features.size()) + " entries, expected " +
                      std::to_string(labels.size() * input_dim));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw ConfigError("label " + std::to_string(labels[i]) + " at row " +
                        std::to_string(i) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    }
  }
}

Dataset SynthClassification(std::size_t n, std::size_t input_dim,
                            int num_classes, std::uint64_t seed,
                            const SynthOptions& options) {
  if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
  if (input_dim == 0) throw ConfigError("input_dim must be positive");
  if (n < static_cast<std::size_t>(num_classes)) {
    throw ConfigError("synthetic dataset needs n >= num_classes (n=" +
                      std::to_string(n) + ", num_classes=" +
                      std::to_string(num_classes) + ")");
  }
  std::mt19937_64 rng(DeriveSeed(seed, SeedStream::kData, {}));
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> means(static_cast<std::size_t>(num_classes) * input_dim);
  for (double& m : means) m = options.class_separation * normal(rng);

  Dataset ds;
  ds.input_dim = input_dim;
  ds.num_classes = num_classes;
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = static_cast<int>(i % static_cast<std::size_t>(num_classes));
  }
  std::shuffle(ds.labels.begin(), ds.labels.end(), rng);

  ds.features.resize(n * input_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double* mean = means.data() + ds.labels[i] * input_dim;
    for (std::size_t j = 0; j < input_dim; ++j) {
      ds.features[i * input_dim + j] =
          mean[j] + options.noise_stddev * normal(rng);
    }
  }
  return ds;
}

Dataset LoadIdx(const std::filesystem::path& images_path,
                const std::filesystem::path& labels_path) {
  const std::string images = ReadFile(images_path);
  const std::string labels = ReadFile(labels_path);

  RequireMagic(images, kIdxImagesMagic, images_path);
  RequireMagic(labels, kIdxLabelsMagic, labels_path);
  RequireLength(images, 16, images_path);
  RequireLength(labels, 8, labels_path);

  const std::size_t count = ReadBigEndian32(images, 4);
  const std::size_t rows = ReadBigEndian32(images, 8);
  const std::size_t cols = ReadBigEndian32(images, 12);
  const std::size_t label_count = ReadBigEndian32(labels, 4);
  if (count != label_count) {
    throw FormatError("image count " + std::to_string(count) +
                      " (byte 4 of " + images_path.string() +
                      ") does not match label count " +
                      std::to_string(label_count) + " (byte 4 of " +
                      labels_path.string() + ")");
  }
  const std::size_t dim = rows * cols;
  if (dim == 0) {
    throw FormatError(images_path.string() +
                      ": zero image dimensions at byte 8");
  }
  RequireLength(images, 16 + count * dim, images_path);
  RequireLength(labels, 8 + count, labels_path);

  Dataset ds;
  ds.input_dim = dim;
  ds.features.resize(count * dim);
  ds.labels.resize(count);
  int max_label = 0;
  for (std::size_t i = 0; i < count; ++i) {
    int label = static_cast<unsigned char>(labels[8 + i]);
    ds.labels[i] = label;
    max_label = std::max(max_label, label);
  }
  for (std::size_t i = 0; i < count * dim; ++i) {
    ds.features[i] = static_cast<unsigned char>(images[16 + i]) / 255.0;
  }
  ds.num_classes = max_label + 1;
  return ds;
}

std::vector<std::vector<std::size_t>> PartitionIndices(
    const Dataset& ds, const PartitionPlan& plan) {
  const std::size_t n = ds.size();
  if (plan.num_clients < 1) throw PartitionError("num_clients must be >= 1");
  const auto clients = static_cast<std::size_t>(plan.num_clients);
  if (n < clients) {
    throw PartitionError("cannot split " + std::to_string(n) +
                         " examples across " + std::to_string(clients) +
                         " clients");
  }
  std::vector<std::vector<std::size_t>> shards(clients);

  if (plan.mode == PartitionMode::kIid) {
    auto order = ShuffledIndices(n, DeriveSeed(plan.seed, SeedStream::kPartition, {0}));
    const std::size_t base = n / clients;
    const std::size_t extra = n % clients;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < clients; ++c) {
      std::size_t len = base + (c < extra ? 1 : 0);
      shards[c].assign(order.begin() + pos, order.begin() + pos + len);
      std::sort(shards[c].begin(), shards[c].end());
      pos += len;
    }
    return shards;
  }

  const int num_classes = ds.num_classes;
  const int per_client = plan.skew_classes_per_client;
  if (per_client < 1 || per_client > num_classes) {
    throw PartitionError("classes_per_client must lie in [1, " +
                         std::to_string(num_classes) + "], got " +
                         std::to_string(per_client));
  }
  if (static_cast<long long>(plan.num_clients) * per_client < num_classes) {
    throw PartitionError("label skew leaves classes unassigned: " +
                         std::to_string(plan.num_clients) + " clients x " +
                         std::to_string(per_client) + " classes < " +
                         std::to_string(num_classes) + " classes");
  }

  std::vector<int> class_order(num_classes);
  std::iota(class_order.begin(), class_order.end(), 0);
  std::mt19937_64 rng(DeriveSeed(plan.seed, SeedStream::kPartition, {1}));
  std::shuffle(class_order.begin(), class_order.end(), rng);

  // Client c takes `per_client` consecutive classes (mod C) from class_order.
  std::vector<std::vector<std::size_t>> demanders(num_classes);
  for (std::size_t c = 0; c < clients; ++c) {
    for (int j = 0; j < per_client; ++j) {
      int cls = class_order[(c * per_client + j) % num_classes];
      demanders[cls].push_back(c);
    }
  }

  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) by_class[ds.labels[i]].push_back(i);

  for (int cls = 0; cls < num_classes; ++cls) {
    auto& rows = by_class[cls];
    const auto& who = demanders[cls];
    if (rows.size() < who.size()) {
      throw PartitionError("class " + std::to_string(cls) + " has " +
                           std::to_string(rows.size()) +
                           " examples but is demanded by " +
                           std::to_string(who.size()) + " clients");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t base = rows.size() / who.size();
    const std::size_t extra = rows.size() % who.size();
    std::size_t pos = 0;
    for (std::size_t j = 0; j < who.size(); ++j) {
      std::size_t len = base + (j < extra ? 1 : 0);
      auto& shard = shards[who[j]];
      shard.insert(shard.end(), rows.begin() + pos, rows.begin() + pos + len);
      pos += len;
    }
  }
  for (auto& shard : shards) std::sort(shard.begin(), shard.end());
  return shards;
}

std::vector<Dataset> Partition(const Dataset& ds, const PartitionPlan& plan) {
  std::vector<Dataset> out;
  for (const auto& rows : PartitionIndices(ds, plan)) {
    out.push_back(ds.Subset(rows));
  }
  return out;
}

std::pair<Dataset, Dataset> SplitHoldout(const Dataset& ds, double fraction,
                                         std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ConfigError("holdout fraction must lie in [0, 1)");
  }
  auto order = ShuffledIndices(ds.size(), DeriveSeed(seed, SeedStream::kHoldout, {}));
  auto holdout_n = static_cast<std::size_t>(std::llround(fraction * ds.size()));
  std::vector<std::size_t> test(order.begin(), order.begin() + holdout_n);
  std::vector<std::size_t> train(order.begin() + holdout_n, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {ds.Subset(train), ds.Subset(test)};
}

Dataset SampleSubset(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  if (n >= ds.size()) return ds;
  auto order = ShuffledIndices(ds.size(), seed);
  order.resize(n);
  std::sort(order.begin(), order.end());
  return ds.Subset(order);
}

}  // namespace pdfl
