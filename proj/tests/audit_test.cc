#include <gtest/gtest.h>

#include "pdfl/audit.h"
#include "pdfl/errors.h"
#include "pdfl/federated.h"
#include "pod_fixtures.h"

namespace pdfl {
namespace {

RoundHistory WithRepresentatives(std::vector<ParamVector> reps) {
  RoundHistory h;
  h.round = 1;
  h.perturbed_representatives = std::move(reps);
  return h;
}

TEST(Audit, OwnUpdateStoredAsRepresentativeIsDetected) {
  const ParamVector target{0.3, -0.2, 0.9};
  std::vector<RoundHistory> h{WithRepresentatives({ParamVector{1.0, 0.0, 0.0}, target})};
  const auto out = SgFlAudit(ParamVector(3), target, h, 0.0, Metric::kCosine, false);
  EXPECT_EQ(out.adversary_prediction, 1);
  EXPECT_FALSE(out.pod_presented);
  EXPECT_FALSE(out.deniable);
}

TEST(Audit, OrthogonalTargetIsNotDetected) {
  std::vector<RoundHistory> h{
      WithRepresentatives({ParamVector{1.0, 0.0, 0.0}, ParamVector{0.0, 2.0, 0.0}})};
  const auto out =
      SgFlAudit(ParamVector(3), ParamVector{0.0, 0.0, 1.0}, h, 0.5, Metric::kCosine, true);
  EXPECT_EQ(out.adversary_prediction, 0);
  EXPECT_TRUE(out.ground_truth_removed);
}

TEST(Audit, VerifiedProofMakesDetectionDeniable) {
  auto issued = testing::IdenticalClientsPod(4, 2, 3);
  ASSERT_TRUE(issued.pod.verdict.valid);
  ParamVector target{0.5, 0.5};
  issued.history[0].perturbed_representatives = {target};
  const AuditEvidence ev{&issued.pod, issued.digest};
  const auto out =
      SgFlAudit(ParamVector(2), target, issued.history, 0.0, Metric::kL2, true, ev);
  EXPECT_EQ(out.adversary_prediction, 1);
  EXPECT_TRUE(out.pod_presented);
  EXPECT_TRUE(out.deniable);

  const AuditEvidence forged{&issued.pod, std::string(64, '0')};
  const auto bad =
      SgFlAudit(ParamVector(2), target, issued.history, 0.0, Metric::kL2, true, forged);
  EXPECT_FALSE(bad.pod_presented);
  EXPECT_FALSE(bad.deniable);
}

TEST(Audit, RetainedRepresentativesAreWhatTheServerAggregated) {
  const Dataset ds = SynthClassification(200, 3, 2, 2);
  auto clients = MakeClients(Partition(ds, {PartitionMode::kIid, 4, 1, 2}), 2);
  RunConfig cfg;
  cfg.num_clients = 4;
  cfg.k = 1;
  cfg.x = 1;
  cfg.sigma = 0.0;
  cfg.retain_representatives = true;
  const ModelSpec spec{ModelKind::kLogisticRegression, 3, 0, 2};
  const ParamVector w0(spec.ParamCount());
  const auto r = RunRoundIpFedAvg(spec, w0, clients, cfg, {1, 0});
  ASSERT_EQ(r.history.perturbed_representatives.size(), 4u);
  const auto u2 = ClientUpdate(spec, w0, *clients[2].shard, cfg.train,
                               ClientUpdateSeed(clients[2], {1, 0}));
  std::vector<RoundHistory> h{r.history};
  EXPECT_EQ(SgFlAudit(r.global, u2, h, 0.0, Metric::kL2, false).adversary_prediction, 1);
}

TEST(Audit, NegativeThresholdRejected) {
  EXPECT_THROW(DistanceAdversary(-1.0, Metric::kL2), DomainError);
}

}  // namespace
}  // namespace pdfl
