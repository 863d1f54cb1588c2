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

#include "pdfl/federated.h"

#include <cmath>
#include <map>
#include <string>

#include "pdfl/clustering.h"
#include "pdfl/digest.h"
#include "pdfl/errors.h"
#include "pdfl/seeds.h"

namespace pdfl {
namespace {

// p_l for every client that produced an update. If some client was skipped
// the remaining weights are rescaled to sum to one.
std::map<ClientId, double> EffectiveWeights(
    std::span<const ClientRecord> clients, const WeightMap& updates) {
  std::map<ClientId, double> p;
  double total = 0.0;
  for (const auto& c : clients) {
    if (updates.count(c.id)) {
      p[c.id] = c.weight;
      total += c.weight;
    }
  }
  if (p.size() != clients.size() && total > 0.0) {
    for (auto& [id, w] : p) w /= total;
  }
  return p;
}

RoundHistory NewHistory(const RunConfig& cfg, RoundContext ctx) {
  RoundHistory h;
  h.round = ctx.round;
  h.generation = ctx.generation;
  h.delta = cfg.delta;
  return h;
}

void Seal(RoundHistory& h, const ParamVector& global, WeightMap updates,
          const RunConfig& cfg) {
  h.global_snapshot = global;
  h.aggregate_hash = SnapshotDigest(global);
  if (cfg.storage_mode == StorageMode::kFullUpdates) {
    h.client_updates = std::move(updates);
  }
}

}  // namespace

const char* AlgorithmName(Algorithm a) {
  return a == Algorithm::kFedAvg ? "fedavg" : "k-ipfedavg";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "fedavg") return Algorithm::kFedAvg;
  if (name == "k-ipfedavg") return Algorithm::kIpFedAvg;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

void RunConfig::Validate() const {
  if (num_clients < 1) throw ConfigError("num_clients must be >= 1");
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
  if (x < 1) throw ConfigError("x must be >= 1");
  if (x > k) {
    throw ConfigError("x <= k required (x=" + std::to_string(x) +
                      ", k=" + std::to_string(k) + ")");
  }
  if (k > num_clients) {
    throw ConfigError("k <= num_clients required (k=" + std::to_string(k) +
                      ", num_clients=" + std::to_string(num_clients) + ")");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("delta must be positive");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("sigma must be >= 0");
  }
  train.Validate();
}

std::vector<ClientRecord> MakeClients(std::vector<Dataset> shards,
                                      std::uint64_t master_seed) {
  std::vector<ClientRecord> clients;
  clients.reserve(shards.size());
  for (std::size_t i = 0; i < shards.size(); ++i) {
    ClientRecord c;
    c.id = static_cast<ClientId>(i);
    c.shard = std::make_shared<const Dataset>(std::move(shards[i]));
    c.seed = DeriveSeed(master_seed, SeedStream::kClient,
                        {static_cast<std::uint64_t>(i)});
    clients.push_back(std::move(c));
  }
  RenormalizeWeights(clients);
  return clients;
}

void RenormalizeWeights(std::span<ClientRecord> clients) {
  double total = 0.0;
  for (const auto& c : clients) total += c.shard ? c.shard->size() : 0;
  for (auto& c : clients) {
    const double n = c.shard ? c.shard->size() : 0;
    c.weight = total > 0.0 ? n / total : 0.0;
  }
}

std::uint64_t ClientUpdateSeed(const ClientRecord& client, RoundContext ctx) {
  return DeriveSeed(client.seed, SeedStream::kClientUpdate,
                    {static_cast<std::uint64_t>(ctx.generation),
                     static_cast<std::uint64_t>(ctx.round)});
}

namespace {

std::uint64_t RepresentativeBase(std::uint64_t master_seed, RoundContext ctx) {
  return DeriveSeed(master_seed, SeedStream::kRepresentative,
                    {static_cast<std::uint64_t>(ctx.generation),
                     static_cast<std::uint64_t>(ctx.round)});
}

}  // namespace

std::uint64_t RepresentativeSeed(std::uint64_t master_seed, RoundContext ctx,
                                 int cluster_index) {
  return DeriveSeed(RepresentativeBase(master_seed, ctx),
                    {static_cast<std::uint64_t>(cluster_index)});
}

std::uint64_t NoiseSeed(std::uint64_t master_seed, RoundContext ctx,
                        int cluster_index) {
  return DeriveSeed(master_seed, SeedStream::kNoise,
                    {static_cast<std::uint64_t>(ctx.generation),
                     static_cast<std::uint64_t>(ctx.round),
                     static_cast<std::uint64_t>(cluster_index)});
}

WeightMap CollectClientUpdates(const ModelSpec& spec, const ParamVector& w_t,
                               std::span<const ClientRecord> clients,
                               const TrainConfig& train, RoundContext ctx) {
  WeightMap updates;
  for (const auto& c : clients) {
    if (!c.shard) continue;
    try {
      updates.emplace(c.id, ClientUpdate(spec, w_t, *c.shard, train,
                                         ClientUpdateSeed(c, ctx)));
    } catch (const ClientSkipped&) {
    }
  }
  return updates;
}

ParamVector RunRoundFedAvg(const ModelSpec& spec, const ParamVector& w_t,
                           std::span<const ClientRecord> clients,
                           const RunConfig& cfg, RoundContext ctx) {
  return RunRound(spec, w_t, clients,
                  [&] {
                    RunConfig c = cfg;
                    c.algorithm = Algorithm::kFedAvg;
                    return c;
                  }(),
                  ctx)
      .global;
}

RoundResult RunRoundIpFedAvg(const ModelSpec& spec, const ParamVector& w_t,
                             std::span<const ClientRecord> clients,
                             const RunConfig& cfg, RoundContext ctx) {
  RunConfig c = cfg;
  c.algorithm = Algorithm::kIpFedAvg;
  return RunRound(spec, w_t, clients, c, ctx);
}

RoundResult RunRound(const ModelSpec& spec, const ParamVector& w_t,
                     std::span<const ClientRecord> clients,
                     const RunConfig& cfg, RoundContext ctx) {
  if (clients.empty()) throw TrainingAborted("no clients left to train");
  WeightMap updates = CollectClientUpdates(spec, w_t, clients, cfg.train, ctx);
  if (updates.empty()) throw TrainingAborted("every client skipped the round");
  const auto p = EffectiveWeights(clients, updates);

  RoundResult out{ParamVector(w_t.size()), NewHistory(cfg, ctx)};
  RoundHistory& h = out.history;

  if (cfg.algorithm == Algorithm::kFedAvg) {
    for (const auto& [id, u] : updates) {
      out.global.AddScaled(p.at(id), u);
      h.clusters.push_back({{id}, id, 0.0, 0, {}});
    }
    Seal(h, out.global, std::move(updates), cfg);
    return out;
  }

  ClusterParams params{cfg.k, cfg.delta, cfg.metric,
                       RepresentativeBase(cfg.master_seed, ctx)};
  const auto clusters = ClusterWeights(updates, params);
  const double stddev = NoiseStddev(cfg.sigma, cfg.delta, cfg.noise_convention);

  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const Cluster& cl = clusters[ci];
    ClusterRecord rec;
    rec.member_ids = cl.member_ids;
    rec.representative_id = cl.representative_id;
    rec.radius = cl.radius;
    rec.noise_seed = NoiseSeed(cfg.master_seed, ctx, static_cast<int>(ci));
    for (std::size_t a = 0; a < cl.member_ids.size(); ++a) {
      for (std::size_t b = a + 1; b < cl.member_ids.size(); ++b) {
        const ClientId ia = cl.member_ids[a];
        const ClientId ib = cl.member_ids[b];
        rec.distances.push_back(
            {ia, ib, ModelDistance(updates.at(ia), updates.at(ib), cfg.metric)});
      }
    }

    double p_c = 0.0;
    for (ClientId id : cl.member_ids) p_c += p.at(id);
    ParamVector perturbed =
        GaussianPerturb(updates.at(cl.representative_id), stddev, rec.noise_seed);
    out.global.AddScaled(p_c, perturbed);
    if (cfg.retain_representatives) {
      h.perturbed_representatives.push_back(std::move(perturbed));
    }
    h.clusters.push_back(std::move(rec));
  }
  Seal(h, out.global, std::move(updates), cfg);
  return out;
}

}  // namespace pdfl
