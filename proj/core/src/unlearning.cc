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

#include "pdfl/unlearning.h"

#include <algorithm>
#include <random>
#include <string>

#include "pdfl/errors.h"
#include "pdfl/seeds.h"

namespace pdfl {

RequestStream::RequestStream(double p, std::uint64_t seed) : p_(p), seed_(seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("unlearning probability must lie in [0, 1]");
  }
}

std::optional<UnlearnRequest> RequestStream::Poll(
    int round, std::span<const ClientId> active) {
  std::mt19937_64 rng(DeriveSeed(seed_, SeedStream::kUnlearnRequests,
                                 {static_cast<std::uint64_t>(round)}));
  std::bernoulli_distribution fire(p_);
  if (!fire(rng) || active.empty()) return std::nullopt;
  std::vector<ClientId> sorted(active.begin(), active.end());
  std::sort(sorted.begin(), sorted.end());
  std::uniform_int_distribution<std::size_t> pick(0, sorted.size() - 1);
  return UnlearnRequest{round, sorted[pick(rng)]};
}

ScheduledRequests::ScheduledRequests(std::vector<UnlearnRequest> requests)
    : requests_(std::move(requests)) {}

std::optional<UnlearnRequest> ScheduledRequests::Poll(
    int round, std::span<const ClientId> active) {
  for (const auto& r : requests_) {
    if (r.round != round) continue;
    if (std::find(active.begin(), active.end(), r.target_id) != active.end()) {
      return r;
    }
  }
  return std::nullopt;
}

std::vector<UnlearnRequest> GenerateRequests(double p, int rounds,
                                             std::vector<ClientId> active,
                                             std::uint64_t seed) {
  RequestStream stream(p, seed);
  std::vector<UnlearnRequest> out;
  for (int r = 1; r <= rounds; ++r) {
    if (auto req = stream.Poll(r, active)) {
      out.push_back(*req);
      std::erase(active, req->target_id);
    }
  }
  return out;
}

int ScrubHistory(std::vector<RoundHistory>& histories, ClientId target_id) {
  int touched = 0;
  for (auto& h : histories) {
    bool hit = h.client_updates.erase(target_id) > 0;
    for (std::size_t ci = 0; ci < h.clusters.size();) {
      ClusterRecord& c = h.clusters[ci];
      auto it = std::find(c.member_ids.begin(), c.member_ids.end(), target_id);
      if (it == c.member_ids.end()) {
        ++ci;
        continue;
      }
      hit = true;
      c.member_ids.erase(it);
      std::erase_if(c.distances, [target_id](const PairDistance& d) {
        return d.a == target_id || d.b == target_id;
      });
      if (c.member_ids.empty()) {
        h.clusters.erase(h.clusters.begin() + static_cast<std::ptrdiff_t>(ci));
        if (ci < h.perturbed_representatives.size()) {
          h.perturbed_representatives.erase(
              h.perturbed_representatives.begin() +
              static_cast<std::ptrdiff_t>(ci));
        }
        continue;
      }
      if (c.representative_id == target_id) {
        c.representative_id = c.member_ids.front();
      }
      double radius = 0.0;
      for (ClientId m : c.member_ids) {
        if (auto d = c.DistanceBetween(c.representative_id, m)) {
          radius = std::max(radius, *d);
        }
      }
      c.radius = radius;
      ++ci;
    }
    if (hit) ++touched;
  }
  return touched;
}

std::optional<Violation> FindViolation(std::span<const RoundHistory> histories,
                                       int x) {
  if (x < 1) throw ConfigError("x must be >= 1");
  for (const auto& h : histories) {
    for (std::size_t ci = 0; ci < h.clusters.size(); ++ci) {
      if (static_cast<int>(h.clusters[ci].member_ids.size()) < x) {
        return Violation{h.round, static_cast<int>(ci)};
      }
    }
  }
  return std::nullopt;
}

ParamVector RollbackRetrain(HistoryStore& store, int violation_round,
                            int through_round, const ModelSpec& spec,
                            const RunConfig& cfg,
                            std::span<const ClientRecord> remaining,
                            int generation) {
  if (violation_round < 1) {
    throw IntegrityError("violation round must be >= 1, got " +
                         std::to_string(violation_round));
  }
  ParamVector w = store.Snapshot(violation_round - 1);
  store.TruncateFrom(violation_round);

  std::vector<ClientRecord> cohort(remaining.begin(), remaining.end());
  RenormalizeWeights(cohort);
  for (int r = violation_round; r <= through_round; ++r) {
    RoundResult res = RunRound(spec, w, cohort, cfg, {r, generation});
    res.history.retrained = true;
    store.Append(std::move(res.history));
    w = std::move(res.global);
  }
  return w;
}

}  // namespace pdfl
