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

#include "pdfl/clustering.h"

#include <algorithm>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "pdfl/errors.h"
#include "pdfl/seeds.h"

namespace pdfl {
namespace {

const ParamVector& WeightOf(const WeightMap& weights, ClientId id) {
  auto it = weights.find(id);
  if (it == weights.end()) {
    throw LookupError("no weights recorded for client " + std::to_string(id));
  }
  return it->second;
}

}  // namespace

std::vector<Cluster> ClusterWeights(const WeightMap& weights,
                                    const ClusterParams& params) {
  const int n = static_cast<int>(weights.size());
  if (params.k < 1) {
    throw ClusteringError("k must be >= 1, got " + std::to_string(params.k));
  }
  if (n < params.k) {
    throw ClusteringError("cannot form clusters of size k=" +
                          std::to_string(params.k) + " from N=" +
                          std::to_string(n) + " clients");
  }

  std::vector<ClientId> ids;
  std::vector<const ParamVector*> vecs;
  ids.reserve(n);
  vecs.reserve(n);
  for (const auto& [id, w] : weights) {
    ids.push_back(id);
    vecs.push_back(&w);
  }

  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = ModelDistance(*vecs[i], *vecs[j], params.metric);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  const int num_clusters = n / params.k;
  std::vector<bool> assigned(n, false);
  std::vector<int> seeds;
  std::vector<std::vector<int>> members(num_clusters);
  std::vector<int> candidates;

  for (int c = 0; c < num_clusters; ++c) {
    int seed = 0;
    while (assigned[seed]) ++seed;
    assigned[seed] = true;
    seeds.push_back(seed);
    members[c].push_back(seed);

    candidates.clear();
    for (int j = 0; j < n; ++j) {
      if (!assigned[j]) candidates.push_back(j);
    }
    // ids ascend with index, so comparing indices breaks ties by lower id.
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return dist[seed * n + a] < dist[seed * n + b];
    });
    for (int m = 0; m < params.k - 1; ++m) {
      assigned[candidates[m]] = true;
      members[c].push_back(candidates[m]);
    }
  }

  for (int j = 0; j < n; ++j) {
    if (assigned[j]) continue;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < num_clusters; ++c) {
      const double d = dist[seeds[c] * n + j];
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    members[best].push_back(j);
    assigned[j] = true;
  }

  std::vector<Cluster> clusters(num_clusters);
  for (int c = 0; c < num_clusters; ++c) {
    std::sort(members[c].begin(), members[c].end());
    Cluster& cl = clusters[c];
    for (int idx : members[c]) cl.member_ids.push_back(ids[idx]);
    cl.representative_id = SelectRepresentative(
        cl, DeriveSeed(params.seed, {static_cast<std::uint64_t>(c)}));
    const int rep_idx = static_cast<int>(
        std::lower_bound(ids.begin(), ids.end(), cl.representative_id) -
        ids.begin());
    double radius = 0.0;
    for (int idx : members[c]) radius = std::max(radius, dist[rep_idx * n + idx]);
    cl.radius = radius;
  }
  return clusters;
}

ClientId SelectRepresentative(const Cluster& cluster, std::uint64_t seed) {
  if (cluster.member_ids.empty()) {
    throw ClusteringError("cannot select a representative of an empty cluster");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(
      0, cluster.member_ids.size() - 1);
  return cluster.member_ids[pick(rng)];
}

double ClusterRadius(const Cluster& cluster, const WeightMap& weights,
                     Metric metric) {
  const ParamVector& rep = WeightOf(weights, cluster.representative_id);
  double radius = 0.0;
  for (ClientId id : cluster.member_ids) {
    if (id == cluster.representative_id) continue;
    radius = std::max(radius, ModelDistance(rep, WeightOf(weights, id), metric));
  }
  return radius;
}

int DeniabilityCount(const Cluster& cluster, const WeightMap& weights,
                     ClientId target_id, double delta, Metric metric) {
  if (std::find(cluster.member_ids.begin(), cluster.member_ids.end(),
                target_id) == cluster.member_ids.end()) {
    throw LookupError("client " + std::to_string(target_id) +
                      " is not a member of the cluster");
  }
  const ParamVector& target = WeightOf(weights, target_id);
  int count = 0;
  for (ClientId id : cluster.member_ids) {
    if (id == target_id) continue;
    if (ModelDistance(target, WeightOf(weights, id), metric) <= delta) ++count;
  }
  return count;
}

}  // namespace pdfl
