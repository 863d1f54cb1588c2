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

#include "pdfl/trainer.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "pdfl/errors.h"

namespace pdfl {
namespace {

std::vector<ClientId> ActiveIds(const std::vector<ClientRecord>& clients) {
  std::vector<ClientId> ids;
  ids.reserve(clients.size());
  for (const auto& c : clients) ids.push_back(c.id);
  return ids;
}

ViolationKind ClassifyBreak(const ProofOfDeniability& pod, const RunConfig& cfg) {
  if (cfg.algorithm == Algorithm::kFedAvg) return ViolationKind::kNoDeniability;
  for (const auto& e : pod.entries) {
    if (e.round == pod.verdict.round && e.cluster_index == pod.verdict.cluster &&
        static_cast<int>(e.member_ids.size()) >= pod.x &&
        e.deniability_count < pod.x - 1) {
      return ViolationKind::kDeniability;
    }
  }
  return ViolationKind::kCardinality;
}

class Trainer {
 public:
  explicit Trainer(TrainInputs in) : in_(std::move(in)) {}

  TrainResult Run() {
    in_.spec.Validate();
    in_.cfg.Validate();
    if (in_.clients.empty()) throw ConfigError("no clients supplied");

    ParamVector w = in_.initial_model ? *in_.initial_model
                                      : InitParams(in_.spec, in_.cfg.master_seed);
    result_.history = HistoryStore(w);
    active_ = in_.clients;
    RenormalizeWeights(active_);

    for (int r = 1; r <= in_.cfg.rounds; ++r) {
      if (in_.requests) {
        const auto ids = ActiveIds(active_);
        if (auto req = in_.requests->Poll(r, ids)) Serve(*req, w);
      }
      RequireCohort(r);
      RoundResult rr = RunRound(in_.spec, w, active_, in_.cfg, {r, generation_});
      for (const auto& c : rr.history.clusters) {
        if (c.radius > in_.cfg.delta) ++result_.metrics.clusters_over_delta;
      }
      result_.history.Append(std::move(rr.history));
      w = std::move(rr.global);
      ++result_.metrics.rounds_executed;
      if (in_.test_set) {
        result_.metrics.accuracy.push_back(Accuracy(in_.spec, w, *in_.test_set));
      }
    }
    result_.final_model = std::move(w);
    return std::move(result_);
  }

 private:
  void RequireCohort(int round) const {
    const int needed = in_.cfg.algorithm == Algorithm::kIpFedAvg ? in_.cfg.k : 1;
    if (static_cast<int>(active_.size()) < needed) {
      throw TrainingAborted(
          "round " + std::to_string(round) + ": only " +
          std::to_string(active_.size()) + " clients remain, " +
          std::to_string(needed) + " needed to continue");
    }
  }

  void Serve(const UnlearnRequest& req, ParamVector& w) {
    const RunConfig& cfg = in_.cfg;
    auto& rounds = result_.history.rounds();

    ServedRequest served;
    served.request = req;
    const TargetFootprint footprint =
        CaptureFootprint(rounds, req.target_id, cfg.metric);
    served.rounds_scrubbed = ScrubHistory(rounds, req.target_id);
    std::erase_if(active_, [&](const ClientRecord& c) { return c.id == req.target_id; });
    RenormalizeWeights(active_);

    ProofOfDeniability pod =
        GeneratePod(rounds, footprint, cfg.x, cfg.delta, cfg.metric);
    if (!pod.verdict.valid) {
      RetrainEvent ev;
      ev.request_round = req.round;
      ev.target_id = req.target_id;
      ev.violation_round = pod.verdict.round;
      ev.violation_cluster = pod.verdict.cluster;
      ev.kind = ClassifyBreak(pod, cfg);
      ev.generation = ++generation_;
      ev.rounds_reexecuted = req.round - pod.verdict.round;
      if (active_.empty()) {
        throw TrainingAborted("retrain impossible: every client was removed");
      }
      if (ev.rounds_reexecuted > 0) RequireCohort(pod.verdict.round);

      const auto start = std::chrono::steady_clock::now();
      w = RollbackRetrain(result_.history, pod.verdict.round, req.round - 1,
                          in_.spec, cfg, active_, generation_);
      ev.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
      result_.metrics.rounds_executed += ev.rounds_reexecuted;
      for (const auto& h : rounds) {
        if (h.round < pod.verdict.round) continue;
        for (const auto& c : h.clusters) {
          if (c.radius > cfg.delta) ++result_.metrics.clusters_over_delta;
        }
      }
      result_.metrics.retrains.push_back(ev);
      served.retrain = ev;
      pod = GeneratePod(rounds, footprint, cfg.x, cfg.delta, cfg.metric);
    }
    served.pod = std::move(pod);
    ++result_.metrics.requests_served;
    if (in_.on_served) in_.on_served(served, result_.history);
    result_.served.push_back(std::move(served));
  }

  TrainInputs in_;
  TrainResult result_;
  std::vector<ClientRecord> active_;
  int generation_ = 0;
};

}  // namespace

const char* ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCardinality:
      return "cardinality";
    case ViolationKind::kDeniability:
      return "deniability";
    case ViolationKind::kNoDeniability:
      return "no-deniability";
  }
  return "unknown";
}

double MetricsLog::retrain_seconds() const {
  double total = 0.0;
  for (const auto& e : retrains) total += e.seconds;
  return total;
}

TrainResult Train(TrainInputs inputs) { return Trainer(std::move(inputs)).Run(); }

}  // namespace pdfl
