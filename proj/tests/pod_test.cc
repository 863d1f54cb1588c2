#include <fstream>

#include <gtest/gtest.h>

#include "pdfl/digest.h"
#include "pdfl/errors.h"
#include "pdfl/pod.h"
#include "pdfl/unlearning.h"
#include "pod_fixtures.h"
#include "test_util.h"

namespace pdfl {
namespace {

using testing::IdenticalClientsPod;

// One round, one cluster, 1-D weights with recorded pairwise distances.
RoundHistory HandRound(int t, std::vector<ClientId> members, std::vector<double> xs,
                       double delta) {
  RoundHistory h;
  h.round = t;
  h.delta = delta;
  ClusterRecord c;
  c.member_ids = members;
  c.representative_id = members.front();
  for (std::size_t a = 0; a < members.size(); ++a) {
    c.radius = std::max(c.radius, std::abs(xs[a] - xs[0]));
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      c.distances.push_back({members[a], members[b], std::abs(xs[a] - xs[b])});
    }
  }
  h.clusters.push_back(c);
  h.global_snapshot = ParamVector{1.0};
  h.aggregate_hash = SnapshotDigest(h.global_snapshot);
  return h;
}

ProofOfDeniability Issue(std::vector<RoundHistory>& h, ClientId target, int x,
                         double delta) {
  const auto fp = CaptureFootprint(h, target, Metric::kL2);
  ScrubHistory(h, target);
  return GeneratePod(h, fp, x, delta, Metric::kL2);
}

TEST(GeneratePod, FourIdenticalWeights) {
  for (int x : {2, 3, 4}) {
    std::vector<RoundHistory> h{HandRound(1, {0, 1, 2, 3}, {0.5, 0.5, 0.5, 0.5}, 0.1)};
    const auto pod = Issue(h, 2, x, 0.1);
    ASSERT_EQ(pod.entries.size(), 1u);
    EXPECT_EQ(pod.entries[0].deniability_count, 3);
    // Three identical peers always satisfy the deniability count; x = 4 also
    // requires four members to remain, which a four-member cluster cannot
    // keep after a removal.
    if (x < 4) {
      EXPECT_TRUE(pod.verdict.valid) << x;
      EXPECT_TRUE(VerifyPod(pod, PodDigest(pod), h)) << x;
    } else {
      EXPECT_EQ(pod.verdict, (PodVerdict{false, 1, 0}));
    }
  }
}

TEST(GeneratePod, ClusterShrinksBelowX) {
  std::vector<RoundHistory> h{HandRound(1, {0, 1, 2, 3, 4, 5}, {0, 0, 0, 0, 0, 0}, 0.1),
                              HandRound(2, {0, 1, 2}, {0, 0, 0}, 0.1)};
  const auto pod = Issue(h, 1, 3, 0.1);
  EXPECT_EQ(pod.verdict, (PodVerdict{false, 2, 0}));
  EXPECT_FALSE(VerifyPod(pod, PodDigest(pod), h));
}

TEST(GeneratePod, DeniabilityShortfall) {
  std::vector<RoundHistory> h{HandRound(1, {0, 1, 2, 3}, {0.0, 0.1, 0.5, 0.9}, 0.2)};
  const auto pod = Issue(h, 0, 3, 0.2);
  ASSERT_EQ(pod.entries.size(), 1u);
  EXPECT_EQ(pod.entries[0].deniability_count, 1);
  EXPECT_EQ(pod.entries[0].witnesses[0].id, 1);
  EXPECT_FALSE(pod.verdict.valid);
}

TEST(GeneratePod, TargetNeverParticipated) {
  std::vector<RoundHistory> h{HandRound(1, {0, 1, 2}, {0, 0, 0}, 0.1)};
  const auto pod = Issue(h, 7, 2, 0.1);
  EXPECT_TRUE(pod.entries.empty());
  EXPECT_TRUE(pod.verdict.valid);
  EXPECT_TRUE(VerifyPod(pod, PodDigest(pod), h));
}

TEST(VerifyPod, AcceptsIssuedProofAndRejectsTampering) {
  const auto issued = IdenticalClientsPod(4, 3, 1);
  ASSERT_FALSE(issued.retrained);
  ASSERT_TRUE(issued.pod.verdict.valid);
  ASSERT_FALSE(issued.pod.entries.empty());
  EXPECT_TRUE(VerifyPod(issued.pod, issued.digest, issued.history));

  auto far = issued.pod;
  far.entries[0].witnesses[0].distance = far.delta + 0.001;
  EXPECT_FALSE(VerifyPod(far, issued.digest, issued.history));
  EXPECT_EQ(CheckPod(far, PodDigest(far), issued.history).reason,
            "round 1: witness distance exceeds delta");

  auto small = issued.pod;
  small.entries[0].member_ids.resize(small.x - 1);
  EXPECT_FALSE(VerifyPod(small, PodDigest(small), issued.history));

  auto present = issued.history;
  present[0].clusters[0].member_ids.push_back(issued.pod.target_id);
  EXPECT_FALSE(VerifyPod(issued.pod, issued.digest, present));
}

TEST(VerifyPod, CompletenessOverTheParameterGrid) {
  for (int k : {4, 6, 8, 10}) {
    for (int x : {2, 3, 4}) {
      const auto issued = IdenticalClientsPod(k, x, 100 + k * 10 + x);
      EXPECT_FALSE(issued.retrained) << "k=" << k << " x=" << x;
      EXPECT_TRUE(VerifyPod(issued.pod, issued.digest, issued.history))
          << "k=" << k << " x=" << x << ": "
          << CheckPod(issued.pod, issued.digest, issued.history).reason;
    }
  }
}

TEST(VerifyPod, FuzzedMutationsRejected) {
  std::vector<testing::IssuedPod> pods{IdenticalClientsPod(4, 2, 5),
                                       IdenticalClientsPod(6, 3, 6)};
  const auto report = testing::FuzzPods(pods, 300, 9);
  EXPECT_EQ(report.rejected, report.mutations)
      << "first accepted: " << (report.accepted.empty() ? "" : report.accepted[0]);
}

TEST(PodDocument, CanonicalRoundTrip) {
  const auto issued = IdenticalClientsPod(4, 2, 7);
  const std::string text = SerializePod(issued.pod);
  EXPECT_EQ(ParsePod(text), issued.pod);
  EXPECT_EQ(SerializePod(ParsePod(text)), text);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find(' '), std::string::npos);
  EXPECT_NE(text.find("\"delta\":0.050000000000000003"), std::string::npos) << text;
  // Keys appear in sorted order at the top level.
  EXPECT_LT(text.find("\"delta\""), text.find("\"entries\""));
  EXPECT_LT(text.find("\"entries\""), text.find("\"metric\""));
  EXPECT_LT(text.find("\"target\""), text.find("\"verdict\""));
}

TEST(PodDocument, MalformedInputs) {
  EXPECT_THROW(ParsePod("not json"), FormatError);
  EXPECT_THROW(ParsePod("{}"), FormatError);
  EXPECT_THROW(ParsePod(R"({"target":"c1","x":2,"delta":0.1,"metric":"cosine",)"
                        R"("entries":[{"round":1}],"verdict":{}})"),
               FormatError);
}

TEST(PodDocument, WriteAndReadWithDetachedDigest) {
  testing::TempDir dir("pod");
  const auto issued = IdenticalClientsPod(4, 2, 8);
  const auto path = dir.path() / "proof.json";
  WritePod(path, issued.pod);
  const SignedPod back = ReadPod(path);
  EXPECT_EQ(back.pod, issued.pod);
  EXPECT_EQ(back.digest, issued.digest);
  std::ofstream(path.string() + ".sha256") << "abc\n";
  EXPECT_THROW(ReadPod(path), FormatError);
}

}  // namespace
}  // namespace pdfl
