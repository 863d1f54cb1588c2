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

#include "pdfl/experiment.h"

#include <cmath>
#include <cstdio>

#include "pdfl/digest.h"
#include "pdfl/privacy.h"
#include "pdfl/seeds.h"

namespace pdfl {
namespace {

// Accountant reporting delta when only sigma is configured.
constexpr double kDefaultReportDelta = 1e-5;

Dataset LoadSource(const DatasetConfig& d) {
  if (d.source == DataSource::kSynthetic) {
    SynthOptions opts;
    opts.class_separation = d.class_separation;
    opts.noise_stddev = d.noise_stddev;
    return SynthClassification(d.n, d.input_dim, d.num_classes,
                               DeriveSeed(d.seed, SeedStream::kData, {}), opts);
  }
  Dataset ds = LoadIdx(d.images, d.labels);
  if (d.subset > 0 && d.subset < ds.size()) {
    ds = SampleSubset(ds, d.subset, DeriveSeed(d.seed, SeedStream::kData, {1}));
  }
  return ds;
}

std::string PodName(int index, const ServedRequest& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "pod_%03d_r%04d_c%d", index, s.request.round,
                s.request.target_id);
  return buf;
}

}  // namespace

PreparedData PrepareData(const ExperimentConfig& config) {
  Dataset all = LoadSource(config.dataset);
  auto [train, test] = SplitHoldout(all, config.dataset.holdout_fraction,
                                    DeriveSeed(config.dataset.seed,
                                               SeedStream::kHoldout, {}));
  PartitionPlan plan;
  plan.mode = config.partition_mode;
  plan.num_clients = config.run.num_clients;
  plan.skew_classes_per_client = config.classes_per_client;
  plan.seed = DeriveSeed(config.partition_seed, SeedStream::kPartition, {});

  PreparedData out;
  out.shards = Partition(train, plan);
  out.test = std::move(test);
  out.spec.kind = config.model_kind;
  out.spec.input_dim = all.input_dim;
  out.spec.hidden_dim = config.hidden_dim;
  out.spec.num_classes = all.num_classes;
  out.spec.Validate();
  return out;
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const std::filesystem::path& out_dir) {
  ExperimentResult res;
  res.config = config;
  res.sigma = ResolveSigma(config);

  PreparedData data = PrepareData(config);
  RunConfig cfg = config.run;
  cfg.sigma = res.sigma;
  cfg.Validate();

  std::filesystem::create_directories(out_dir / "pods");
  RequestStream requests(config.unlearn_probability, config.unlearn_seed);

  TrainInputs in;
  in.spec = data.spec;
  in.cfg = cfg;
  in.clients = MakeClients(std::move(data.shards), cfg.master_seed);
  in.requests = &requests;
  in.test_set = data.test.empty() ? nullptr : &data.test;
  int pod_index = 0;
  in.on_served = [&](const ServedRequest& s, const HistoryStore& store) {
    const std::string name = PodName(pod_index++, s);
    WritePod(out_dir / "pods" / (name + ".json"), s.pod);
    store.Save(out_dir / "pods" / (name + ".history"), StorageMode::kIndexOnly);
  };

  TrainResult tr = Train(std::move(in));
  res.pods_written = pod_index;

  if (!config.record_wall_clock) {
    for (auto& ev : tr.metrics.retrains) ev.seconds = 0.0;
  }
  res.metrics = std::move(tr.metrics);
  res.dim = tr.final_model.size();
  res.final_model_hash = SnapshotDigest(tr.final_model);

  const auto hist_dir = out_dir / "histories";
  tr.history.Save(hist_dir, cfg.storage_mode);
  res.storage = StorageAccountingFromDisk(hist_dir);

  if (res.sigma > 0.0) {
    const int T = cfg.rounds;
    if (config.privacy.epsilon && config.privacy.delta) {
      const double delta = *config.privacy.delta;
      const double alpha = CalibrationAlpha(*config.privacy.epsilon, delta);
      res.delta = delta;
      res.alpha = alpha;
      res.epsilon = AccountEpsilon(res.sigma, alpha, delta, T);
    } else {
      const double delta = kDefaultReportDelta;
      const double alpha =
          1.0 + std::sqrt(8.0 * res.sigma * res.sigma * std::log(1.0 / delta) / T);
      res.delta = delta;
      res.alpha = alpha;
      res.epsilon = AccountEpsilon(res.sigma, alpha, delta, T);
    }
  }
  return res;
}

}  // namespace pdfl
