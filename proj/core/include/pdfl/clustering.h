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

#ifndef PDFL_CLUSTERING_H_
#define PDFL_CLUSTERING_H_

#include <cstdint>
#include <map>
#include <vector>

#include "pdfl/model.h"
#include "pdfl/param_vector.h"

namespace pdfl {

using ClientId = int;
using WeightMap = std::map<ClientId, ParamVector>;

struct Cluster {
  std::vector<ClientId> member_ids;  // ascending
  ClientId representative_id = -1;
  double radius = 0.0;  // max distance representative -> member

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct ClusterParams {
  int k = 1;
  double delta = 1.0;
  Metric metric = Metric::kCosine;
  std::uint64_t seed = 0;
};

// Greedy k-nearest grouping into floor(N/k) clusters.
//
// While fewer than floor(N/k) clusters exist, the unassigned client with the
// lowest id becomes a cluster seed and pulls in its k-1 nearest unassigned
// neighbours (ties go to the lower id). Leftover clients then join the cluster
// whose seed is nearest (ties go to the earlier cluster). Clusters are
// returned in seed order, and each gets a representative drawn by
// SelectRepresentative with a seed derived from (params.seed, cluster index).
//
// Delta is not enforced here; callers compare the returned radius against it.
// Throws ClusteringError when N < k or k < 1.
std::vector<Cluster> ClusterWeights(const WeightMap& weights,
                                    const ClusterParams& params);

// Uniform draw over the members.
ClientId SelectRepresentative(const Cluster& cluster, std::uint64_t seed);

// Max distance from the representative to any member.
double ClusterRadius(const Cluster& cluster, const WeightMap& weights,
                     Metric metric);

// Number of members j != target with distance(w_target, w_j) <= delta.
// Throws LookupError if target is not a member.
int DeniabilityCount(const Cluster& cluster, const WeightMap& weights,
                     ClientId target_id, double delta, Metric metric);

}  // namespace pdfl

#endif  // PDFL_CLUSTERING_H_
