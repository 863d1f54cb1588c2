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

#ifndef PDFL_HISTORY_H_
#define PDFL_HISTORY_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdfl/clustering.h"
#include "pdfl/param_vector.h"

namespace pdfl {

enum class StorageMode { kIndexOnly, kFullUpdates };

const char* StorageModeName(StorageMode mode);
StorageMode ParseStorageMode(std::string_view name);

// Distance between two members of a cluster, measured when the round ran.
struct PairDistance {
  ClientId a = -1;  // a < b
  ClientId b = -1;
  double distance = 0.0;

  friend bool operator==(const PairDistance&, const PairDistance&) = default;
};

struct ClusterRecord {
  std::vector<ClientId> member_ids;  // ascending
  ClientId representative_id = -1;
  double radius = 0.0;
  std::uint64_t noise_seed = 0;
  std::vector<PairDistance> distances;

  std::optional<double> DistanceBetween(ClientId a, ClientId b) const;
  bool Contains(ClientId id) const;

  friend bool operator==(const ClusterRecord&, const ClusterRecord&) = default;
};

// What the server keeps for one executed round.
struct RoundHistory {
  int round = 0;
  int generation = 0;  // retrain generation the round was executed under
  bool retrained = false;
  double delta = 0.0;
  std::vector<ClusterRecord> clusters;
  ParamVector global_snapshot;
  std::string aggregate_hash;

  // Raw client updates; kept only in full-updates storage mode.
  WeightMap client_updates;
  // Perturbed representatives in cluster order; kept only when requested for
  // auditing and never written to disk.
  std::vector<ParamVector> perturbed_representatives;

  std::vector<ClientId> Participants() const;
  bool Contains(ClientId id) const;
  bool HashMatches() const;
};

// Per-round history plus the initial model, which serves as the round-0
// snapshot for rollbacks.
class HistoryStore {
 public:
  HistoryStore() = default;
  explicit HistoryStore(ParamVector initial_model);

  // Round 0 is the initial model. Throws IntegrityError when the round is not
  // stored or its digest does not match.
  const ParamVector& Snapshot(int round) const;

  void Append(RoundHistory history);
  // Drops every round >= round.
  void TruncateFrom(int round);

  std::vector<RoundHistory>& rounds() { return rounds_; }
  std::span<const RoundHistory> rounds() const { return rounds_; }
  int last_round() const { return rounds_.empty() ? 0 : rounds_.back().round; }
  const ParamVector& initial_model() const { return initial_; }
  std::size_t dim() const { return initial_.size(); }

  // Directory layout:
  //   manifest.json                    format version, d, storage mode, rounds
  //   initial.bin                      round-0 snapshot
  //   round_NNNN.json                  indices, seeds, distances, digest
  //   round_NNNN.bin                   global snapshot, little-endian f64
  //   round_NNNN.updates.bin           client updates (full-updates only)
  void Save(const std::filesystem::path& dir, StorageMode mode) const;
  // Throws FormatError on malformed records and IntegrityError when a
  // snapshot does not match its recorded digest.
  static HistoryStore Load(const std::filesystem::path& dir);

 private:
  ParamVector initial_;
  std::string initial_hash_;
  std::vector<RoundHistory> rounds_;
};

// JSON record for one round (snapshot payload excluded). Client ids are
// written as "c<id>" strings.
std::string RoundRecordJson(const RoundHistory& history);

std::string ClientIdToken(ClientId id);
ClientId ParseClientIdToken(std::string_view token);

}  // namespace pdfl

#endif  // PDFL_HISTORY_H_
