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

#ifndef PDFL_FEDERATED_H_
#define PDFL_FEDERATED_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "pdfl/data.h"
#include "pdfl/history.h"
#include "pdfl/model.h"
#include "pdfl/param_vector.h"
#include "pdfl/privacy.h"

namespace pdfl {

enum class Algorithm { kFedAvg, kIpFedAvg };

const char* AlgorithmName(Algorithm a);
Algorithm ParseAlgorithm(std::string_view name);

struct ClientRecord {
  ClientId id = 0;
  double weight = 0.0;  // p_l
  std::shared_ptr<const Dataset> shard;
  std::uint64_t seed = 0;
};

struct RunConfig {
  int num_clients = 50;
  int rounds = 50;
  int k = 8;
  int x = 3;
  double delta = 0.05;
  double sigma = 0.0;
  Metric metric = Metric::kCosine;
  Algorithm algorithm = Algorithm::kIpFedAvg;
  StorageMode storage_mode = StorageMode::kIndexOnly;
  NoiseConvention noise_convention = NoiseConvention::kAlgorithm1;
  std::uint64_t master_seed = 0;
  TrainConfig train;
  // Keep perturbed representatives in memory for the audit harness.
  bool retain_representatives = false;

  // Throws ConfigError naming the violated constraint.
  void Validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Identifies which execution a round belongs to. The generation counter is
// bumped on every rollback so re-executed rounds draw fresh seeds.
struct RoundContext {
  int round = 1;
  int generation = 0;
};

// One record per shard with id = index, p_l = n_l / n, and a per-client seed
// derived from the master seed.
std::vector<ClientRecord> MakeClients(std::vector<Dataset> shards,
                                      std::uint64_t master_seed);

// p_l = n_l / sum of n over the given clients.
void RenormalizeWeights(std::span<ClientRecord> clients);

std::uint64_t ClientUpdateSeed(const ClientRecord& client, RoundContext ctx);
std::uint64_t RepresentativeSeed(std::uint64_t master_seed, RoundContext ctx,
                                 int cluster_index);
std::uint64_t NoiseSeed(std::uint64_t master_seed, RoundContext ctx,
                        int cluster_index);

// Local updates for every client, keyed by id. Clients with empty shards are
// omitted.
WeightMap CollectClientUpdates(const ModelSpec& spec, const ParamVector& w_t,
                               std::span<const ClientRecord> clients,
                               const TrainConfig& train, RoundContext ctx);

// w_{t+1} = sum_l p_l * ClientUpdate_l(w_t), summed in ascending id order.
ParamVector RunRoundFedAvg(const ModelSpec& spec, const ParamVector& w_t,
                           std::span<const ClientRecord> clients,
                           const RunConfig& cfg, RoundContext ctx);

struct RoundResult {
  ParamVector global;
  RoundHistory history;
};

// One round of perturbed k-IPfedAvg: cluster the raw client updates, draw a
// representative per cluster, add N(0, stddev^2 I) to it and aggregate with
// p_c = sum of member weights.
RoundResult RunRoundIpFedAvg(const ModelSpec& spec, const ParamVector& w_t,
                             std::span<const ClientRecord> clients,
                             const RunConfig& cfg, RoundContext ctx);

// Dispatches on cfg.algorithm. FedAvg rounds are recorded with every client
// as its own singleton cluster.
RoundResult RunRound(const ModelSpec& spec, const ParamVector& w_t,
                     std::span<const ClientRecord> clients,
                     const RunConfig& cfg, RoundContext ctx);

}  // namespace pdfl

#endif  // PDFL_FEDERATED_H_
