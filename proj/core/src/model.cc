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

#include "pdfl/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pdfl/errors.h"
#include "pdfl/seeds.h"

namespace pdfl {
namespace {

// Softmax of `logits` in place; returns log-sum-exp.
double SoftmaxInPlace(std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& z : logits) {
    z = std::exp(z - top);
    sum += z;
  }
  for (double& z : logits) z /= sum;
  return top + std::log(sum);
}

void CheckShapes(const ModelSpec& spec, const ParamVector& w,
                 std::size_t feature_dim) {
  if (w.size() != spec.ParamCount()) {
    throw ConfigError("parameter vector has " + std::to_string(w.size()) +
                      " entries, model expects " +
                      std::to_string(spec.ParamCount()));
  }
  if (feature_dim != spec.input_dim) {
    throw ConfigError("feature dimension " + std::to_string(feature_dim) +
                      " does not match model input_dim " +
                      std::to_string(spec.input_dim));
  }
}

// Forward pass for one example. Fills `hidden` (mlp only) and `probs`, returns
// the log-sum-exp of the logits.
double Forward(const ModelSpec& spec, const double* w,
               std::span<const double> x, std::vector<double>& hidden,
               std::vector<double>& probs,
               std::vector<double>* logits = nullptr) {
  const std::size_t in = spec.input_dim;
  const auto classes = static_cast<std::size_t>(spec.num_classes);
  probs.assign(classes, 0.0);
  if (spec.kind == ModelKind::kLogisticRegression) {
    const double* bias = w + classes * in;
    for (std::size_t c = 0; c < classes; ++c) {
      const double* row = w + c * in;
      double z = bias[c];
      for (std::size_t j = 0; j < in; ++j) z += row[j] * x[j];
      probs[c] = z;
    }
    if (logits) *logits = probs;
    return SoftmaxInPlace(probs);
  }
  const std::size_t h = spec.hidden_dim;
  const double* w1 = w;
  const double* b1 = w1 + h * in;
  const double* w2 = b1 + h;
  const double* b2 = w2 + classes * h;
  hidden.assign(h, 0.0);
  for (std::size_t u = 0; u < h; ++u) {
    const double* row = w1 + u * in;
    double z = b1[u];
    for (std::size_t j = 0; j < in; ++j) z += row[j] * x[j];
    hidden[u] = std::tanh(z);
  }
  for (std::size_t c = 0; c < classes; ++c) {
    const double* row = w2 + c * h;
    double z = b2[c];
    for (std::size_t u = 0; u < h; ++u) z += row[u] * hidden[u];
    probs[c] = z;
  }
  if (logits) *logits = probs;
  return SoftmaxInPlace(probs);
}

}  // namespace

std::size_t ModelSpec::ParamCount() const {
  const auto classes = static_cast<std::size_t>(num_classes);
  if (kind == ModelKind::kLogisticRegression) {
    return classes * input_dim + classes;
  }
  return hidden_dim * input_dim + hidden_dim + classes * hidden_dim + classes;
}

void ModelSpec::Validate() const {
  if (input_dim == 0) throw ConfigError("model input_dim must be positive");
  if (num_classes < 2) throw ConfigError("model needs at least 2 classes");
  if (kind == ModelKind::kMlpOneHidden && hidden_dim == 0) {
    throw ConfigError("mlp-one-hidden needs hidden_dim > 0");
  }
  if (kind == ModelKind::kLogisticRegression && hidden_dim != 0) {
    throw ConfigError("logistic-regression takes hidden_dim = 0");
  }
}

void TrainConfig::Validate() const {
  if (local_epochs < 1) throw ConfigError("local_epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamVector& w,
                            const Dataset& batch) {
  std::vector<std::size_t> rows(batch.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return LossAndGrad(spec, w, batch, rows);
}

LossAndGradient LossAndGrad(const ModelSpec& spec, const ParamVector& w,
                            const Dataset& data,
                            std::span<const std::size_t> rows) {
  CheckShapes(spec, w, data.input_dim);
  if (rows.empty()) throw ConfigError("loss requires a nonempty batch");

  const std::size_t in = spec.input_dim;
  const auto classes = static_cast<std::size_t>(spec.num_classes);
  LossAndGradient out{0.0, ParamVector(w.size())};
  double* g = out.grad.values().data();
  const double* wp = w.values().data();
  std::vector<double> hidden, probs, logits, dhidden;

  for (std::size_t r : rows) {
    const auto x = data.Row(r);
    const int y = data.labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw ConfigError("label " + std::to_string(y) + " outside model classes");
    }
    const double lse = Forward(spec, wp, x, hidden, probs, &logits);
    out.loss += lse - logits[y];
    probs[y] -= 1.0;  // dL/dlogits

    if (spec.kind == ModelKind::kLogisticRegression) {
      double* gb = g + classes * in;
      for (std::size_t c = 0; c < classes; ++c) {
        double* row = g + c * in;
        for (std::size_t j = 0; j < in; ++j) row[j] += probs[c] * x[j];
        gb[c] += probs[c];
      }
      continue;
    }
    const std::size_t h = spec.hidden_dim;
    const double* w2 = wp + h * in + h;
    double* g1 = g;
    double* gb1 = g1 + h * in;
    double* g2 = gb1 + h;
    double* gb2 = g2 + classes * h;
    dhidden.assign(h, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
      const double dz = probs[c];
      double* row = g2 + c * h;
      const double* wrow = w2 + c * h;
      for (std::size_t u = 0; u < h; ++u) {
        row[u] += dz * hidden[u];
        dhidden[u] += dz * wrow[u];
      }
      gb2[c] += dz;
    }
    for (std::size_t u = 0; u < h; ++u) {
      const double dz = dhidden[u] * (1.0 - hidden[u] * hidden[u]);
      double* row = g1 + u * in;
      for (std::size_t j = 0; j < in; ++j) row[j] += dz * x[j];
      gb1[u] += dz;
    }
  }

  const double inv = 1.0 / static_cast<double>(rows.size());
  out.loss *= inv;
  for (double& v : out.grad) v *= inv;
  return out;
}

ParamVector ClientUpdate(const ModelSpec& spec, const ParamVector& w_t,
                         const Dataset& shard, const TrainConfig& cfg,
                         std::uint64_t seed) {
  if (shard.empty()) throw ClientSkipped("client shard is empty");
  // A zero step size is accepted here (it returns w_t); configs require > 0.
  if (cfg.learning_rate == 0.0) {
    TrainConfig probe = cfg;
    probe.learning_rate = 1.0;
    probe.Validate();
  } else {
    cfg.Validate();
  }
  CheckShapes(spec, w_t, shard.input_dim);

  ParamVector w = w_t;
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      auto step = LossAndGrad(spec, w, shard,
                              std::span<const std::size_t>(order).subspan(start, len));
      w.AddScaled(-cfg.learning_rate, step.grad);
    }
  }
  if (!w.AllFinite()) {
    throw ConfigError("client update diverged to non-finite weights; lower "
                      "the learning rate");
  }
  return w;
}

ParamVector InitParams(const ModelSpec& spec, std::uint64_t seed) {
  spec.Validate();
  ParamVector w(spec.ParamCount());
  if (spec.kind == ModelKind::kLogisticRegression) return w;

  std::mt19937_64 rng(DeriveSeed(seed, SeedStream::kInit, {}));
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t in = spec.input_dim;
  const std::size_t h = spec.hidden_dim;
  const auto classes = static_cast<std::size_t>(spec.num_classes);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(h));
  for (std::size_t i = 0; i < h * in; ++i) w[i] = s1 * normal(rng);
  const std::size_t w2 = h * in + h;
  for (std::size_t i = 0; i < classes * h; ++i) w[w2 + i] = s2 * normal(rng);
  return w;
}

int Predict(const ModelSpec& spec, const ParamVector& w,
            std::span<const double> x) {
  CheckShapes(spec, w, x.size());
  std::vector<double> hidden, probs;
  Forward(spec, w.values().data(), x, hidden, probs);
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                          probs.begin());
}

double Accuracy(const ModelSpec& spec, const ParamVector& w,
                const Dataset& data) {
  if (data.empty()) return 0.0;
  CheckShapes(spec, w, data.input_dim);
  std::vector<double> hidden, probs;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(spec, w.values().data(), data.Row(i), hidden, probs);
    auto best = std::max_element(probs.begin(), probs.end()) - probs.begin();
    if (best == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double ModelDistance(const ParamVector& a, const ParamVector& b,
                     Metric metric) {
  if (a.size() != b.size()) {
    throw ConfigError("distance between vectors of length " +
                      std::to_string(a.size()) + " and " +
                      std::to_string(b.size()));
  }
  if (metric == Metric::kL2) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  const double na = L2Norm(a);
  const double nb = L2Norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw MetricError("cosine distance is undefined for a zero vector");
  }
  if (a == b) return 0.0;
  const double cos = Dot(a, b) / (na * nb);
  return std::clamp(1.0 - cos, 0.0, 2.0);
}

bool FunctionallyEquivalent(const ParamVector& a, const ParamVector& b,
                            double eps, Metric metric) {
  if (!(eps >= 0.0)) throw DomainError("equivalence threshold must be >= 0");
  return ModelDistance(a, b, metric) <= eps;
}

const char* MetricName(Metric metric) {
  return metric == Metric::kCosine ? "cosine" : "l2";
}

Metric ParseMetric(std::string_view name) {
  if (name == "cosine") return Metric::kCosine;
  if (name == "l2") return Metric::kL2;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

const char* ModelKindName(ModelKind kind) {
  return kind == ModelKind::kLogisticRegression ? "logistic-regression"
                                                : "mlp-one-hidden";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "logistic-regression") return ModelKind::kLogisticRegression;
  if (name == "mlp-one-hidden") return ModelKind::kMlpOneHidden;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

}  // namespace pdfl
