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

#ifndef PDFL_AUDIT_H_
#define PDFL_AUDIT_H_

#include <span>
#include <string>
#include <string_view>

#include "pdfl/history.h"
#include "pdfl/model.h"
#include "pdfl/param_vector.h"
#include "pdfl/pod.h"

namespace pdfl {

// Adversary of the client-level membership game: given the released model,
// the challenged client's update and the server's history, guess whether the
// client took part in training.
class MembershipAdversary {
 public:
  virtual ~MembershipAdversary() = default;
  virtual int Predict(const ParamVector& global_model,
                      const ParamVector& target_update,
                      std::span<const RoundHistory> histories) const = 0;
};

// Predicts 1 iff some stored perturbed representative is functionally
// equivalent to the target update at threshold eps.
class DistanceAdversary : public MembershipAdversary {
 public:
  DistanceAdversary(double eps, Metric metric);
  int Predict(const ParamVector& global_model, const ParamVector& target_update,
              std::span<const RoundHistory> histories) const override;

 private:
  double eps_;
  Metric metric_;
};

struct AuditOutcome {
  int adversary_prediction = 0;
  bool ground_truth_removed = false;
  bool pod_presented = false;  // a proof was offered and verified
  // The adversary said 1, yet the server holds a verified proof with x >= 2.
  bool deniable = false;
};

struct AuditEvidence {
  const ProofOfDeniability* pod = nullptr;
  std::string pod_digest;
};

AuditOutcome RunAudit(const MembershipAdversary& adversary,
                      const ParamVector& global_model,
                      const ParamVector& target_update,
                      std::span<const RoundHistory> histories,
                      bool ground_truth_removed,
                      const AuditEvidence& evidence = {});

// Game with the built-in DistanceAdversary.
AuditOutcome SgFlAudit(const ParamVector& global_model,
                       const ParamVector& target_update,
                       std::span<const RoundHistory> histories, double eps,
                       Metric metric, bool ground_truth_removed,
                       const AuditEvidence& evidence = {});

}  // namespace pdfl

#endif  // PDFL_AUDIT_H_
