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

#ifndef PDFL_MODEL_H_
#define PDFL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "pdfl/data.h"
#include "pdfl/param_vector.h"

namespace pdfl {

enum class ModelKind { kLogisticRegression, kMlpOneHidden };

// Desk-scale model family. Parameters are laid out as
//   logistic: W[num_classes][input_dim], b[num_classes]
//   mlp:      W1[hidden][input_dim], b1[hidden], W2[num_classes][hidden],
//             b2[num_classes]
// The hidden layer uses tanh.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogisticRegression;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  int num_classes = 2;

  std::size_t ParamCount() const;
  void Validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct TrainConfig {
  int local_epochs = 3;
  double learning_rate = 0.1;
  std::size_t batch_size = 16;

  void Validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy over the batch
  ParamVector grad;   // mean per-example gradient
};

LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamVector& w,
                            const Dataset& batch);
LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamVector& w,
                            const Dataset& data,
                            std::span<const std::size_t> rows);

// Minibatch SGD for cfg.local_epochs epochs starting from w_t. Each epoch
// visits the shard once in an order shuffled by an RNG seeded with `seed`.
// Throws ClientSkipped when the shard is empty.
ParamVector ClientUpdate(const ModelSpec& spec, const ParamVector& w_t,
                         const Dataset& shard, const TrainConfig& cfg,
                         std::uint64_t seed);

ParamVector InitParams(const ModelSpec& spec, std::uint64_t seed);

int Predict(const ModelSpec& spec, const ParamVector& w,
            std::span<const double> x);
double Accuracy(const ModelSpec& spec, const ParamVector& w,
                const Dataset& data);

enum class Metric { kCosine, kL2 };

// Cosine distance is 1 - cos(a, b) in [0, 2]; throws MetricError when either
// vector is zero. Throws ConfigError on a length mismatch.
double ModelDistance(const ParamVector& a, const ParamVector& b, Metric metric);

// True iff ModelDistance(a, b) <= eps.
bool FunctionallyEquivalent(const ParamVector& a, const ParamVector& b,
                            double eps, Metric metric);

const char* MetricName(Metric metric);
Metric ParseMetric(std::string_view name);
const char* ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

}  // namespace pdfl

#endif  // PDFL_MODEL_H_
