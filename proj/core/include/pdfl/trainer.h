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

#ifndef PDFL_TRAINER_H_
#define PDFL_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdfl/data.h"
#include "pdfl/federated.h"
#include "pdfl/history.h"
#include "pdfl/model.h"
#include "pdfl/pod.h"
#include "pdfl/unlearning.h"

namespace pdfl {

enum class ViolationKind {
  kCardinality,  // a cluster dropped below x members
  kDeniability,  // fewer than x-1 peers within delta of the target
  kNoDeniability,  // fedAvg keeps no clusters, so every removal retrains
};

const char* ViolationKindName(ViolationKind kind);

struct RetrainEvent {
  int request_round = 0;
  ClientId target_id = -1;
  int violation_round = 0;
  int violation_cluster = -1;
  ViolationKind kind = ViolationKind::kCardinality;
  int generation = 0;
  int rounds_reexecuted = 0;
  double seconds = 0.0;  // monotonic wall-clock around the retrain
};

struct ServedRequest {
  UnlearnRequest request;
  int rounds_scrubbed = 0;
  std::optional<RetrainEvent> retrain;
  ProofOfDeniability pod;
};

struct MetricsLog {
  // Test accuracy of the global model after round t, at index t - 1.
  std::vector<double> accuracy;
  std::vector<RetrainEvent> retrains;
  int requests_served = 0;
  int rounds_executed = 0;  // including re-executed rounds
  int clusters_over_delta = 0;

  int retrain_count() const { return static_cast<int>(retrains.size()); }
  double retrain_seconds() const;
};

struct TrainResult {
  ParamVector final_model;
  HistoryStore history;
  MetricsLog metrics;
  std::vector<ServedRequest> served;
};

struct TrainInputs {
  ModelSpec spec;
  RunConfig cfg;
  std::vector<ClientRecord> clients;
  RequestSource* requests = nullptr;      // may be null
  const Dataset* test_set = nullptr;      // may be null
  std::optional<ParamVector> initial_model;  // defaults to InitParams
  // Called after each request is served, with the history the proof was
  // issued against.
  std::function<void(const ServedRequest&, const HistoryStore&)> on_served;
};

// Runs cfg.rounds rounds. Before each round the request source is polled; a
// request is served by scrubbing the target from the history, dropping it
// from the cohort (renormalizing p_l), and rolling back to the earliest round
// that no longer admits (x, delta) deniability. Every served request yields a
// Proof-of-Deniability. Throws TrainingAborted when too few clients remain to
// continue.
TrainResult Train(TrainInputs inputs);

}  // namespace pdfl

#endif  // PDFL_TRAINER_H_
