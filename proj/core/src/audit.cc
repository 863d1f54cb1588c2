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

#include "pdfl/audit.h"

#include "pdfl/errors.h"

namespace pdfl {

DistanceAdversary::DistanceAdversary(double eps, Metric metric)
    : eps_(eps), metric_(metric) {
  if (!(eps >= 0.0)) throw DomainError("audit threshold eps must be >= 0");
}

int DistanceAdversary::Predict(const ParamVector& /*global_model*/,
                               const ParamVector& target_update,
                               std::span<const RoundHistory> histories) const {
  for (const auto& h : histories) {
    for (const auto& rep : h.perturbed_representatives) {
      if (FunctionallyEquivalent(rep, target_update, eps_, metric_)) return 1;
    }
  }
  return 0;
}

AuditOutcome RunAudit(const MembershipAdversary& adversary,
                      const ParamVector& global_model,
                      const ParamVector& target_update,
                      std::span<const RoundHistory> histories,
                      bool ground_truth_removed, const AuditEvidence& evidence) {
  AuditOutcome out;
  out.adversary_prediction =
      adversary.Predict(global_model, target_update, histories);
  out.ground_truth_removed = ground_truth_removed;
  out.pod_presented = evidence.pod != nullptr &&
                      VerifyPod(*evidence.pod, evidence.pod_digest, histories);
  out.deniable = out.adversary_prediction == 1 && out.pod_presented &&
                 evidence.pod->x >= 2;
  return out;
}

AuditOutcome SgFlAudit(const ParamVector& global_model,
                       const ParamVector& target_update,
                       std::span<const RoundHistory> histories, double eps,
                       Metric metric, bool ground_truth_removed,
                       const AuditEvidence& evidence) {
  return RunAudit(DistanceAdversary(eps, metric), global_model, target_update,
                  histories, ground_truth_removed, evidence);
}

}  // namespace pdfl
