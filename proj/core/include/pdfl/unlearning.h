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

#ifndef PDFL_UNLEARNING_H_
#define PDFL_UNLEARNING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdfl/federated.h"
#include "pdfl/history.h"
#include "pdfl/model.h"

namespace pdfl {

struct UnlearnRequest {
  int round = 0;  // arrival round
  ClientId target_id = -1;

  friend bool operator==(const UnlearnRequest&, const UnlearnRequest&) =
      default;
};

// Source of unlearning requests polled by the trainer before each round.
class RequestSource {
 public:
  virtual ~RequestSource() = default;
  virtual std::optional<UnlearnRequest> Poll(
      int round, std::span<const ClientId> active) = 0;
};

// With probability p per round, names a uniformly chosen active client. Each
// round's draw depends only on (seed, round) and the active set.
class RequestStream : public RequestSource {
 public:
  RequestStream(double p, std::uint64_t seed);

  std::optional<UnlearnRequest> Poll(
      int round, std::span<const ClientId> active) override;

 private:
  double p_;
  std::uint64_t seed_;
};

// Fixed list of requests; Poll returns the one scheduled for the round, if its
// target is still active.
class ScheduledRequests : public RequestSource {
 public:
  explicit ScheduledRequests(std::vector<UnlearnRequest> requests);

  std::optional<UnlearnRequest> Poll(
      int round, std::span<const ClientId> active) override;

 private:
  std::vector<UnlearnRequest> requests_;
};

// Requests a stream emits over rounds 1..rounds when every named client is
// unlearned on arrival.
std::vector<UnlearnRequest> GenerateRequests(double p, int rounds,
                                             std::vector<ClientId> active,
                                             std::uint64_t seed);

// Removes the target from every cluster of every round. A removed
// representative is replaced by the lowest remaining member id, radius is
// recomputed from the stored pairwise distances, and clusters left empty are
// deleted. Returns the number of rounds touched.
int ScrubHistory(std::vector<RoundHistory>& histories, ClientId target_id);

struct Violation {
  int round = 0;
  int cluster_index = 0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Earliest (round, cluster) with fewer than x members, scanning rounds in
// ascending order and clusters in stored order.
std::optional<Violation> FindViolation(std::span<const RoundHistory> histories,
                                       int x);

// Restores the snapshot of round violation_round - 1, discards every stored
// round from violation_round on, and re-executes rounds
// violation_round..through_round with the remaining clients under
// `generation`. Returns the new global model. Throws IntegrityError if the
// restore snapshot is missing or corrupt.
ParamVector RollbackRetrain(HistoryStore& store, int violation_round,
                            int through_round, const ModelSpec& spec,
                            const RunConfig& cfg,
                            std::span<const ClientRecord> remaining,
                            int generation);

}  // namespace pdfl

#endif  // PDFL_UNLEARNING_H_
