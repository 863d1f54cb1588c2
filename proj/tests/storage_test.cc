#include <gtest/gtest.h>

#include "pdfl/digest.h"
#include "pdfl/storage.h"
#include "test_util.h"

namespace pdfl {
namespace {

// T rounds of N clients split into floor(N/k) clusters, leftovers in the last.
std::vector<RoundHistory> Table1Rounds(int n, int k, int rounds, std::size_t d) {
  std::vector<RoundHistory> out;
  for (int t = 1; t <= rounds; ++t) {
    RoundHistory h;
    h.round = t;
    h.delta = 0.05;
    const int clusters = n / k;
    for (int c = 0; c < clusters; ++c) {
      ClusterRecord rec;
      const int end = c == clusters - 1 ? n : (c + 1) * k;
      for (int id = c * k; id < end; ++id) rec.member_ids.push_back(id);
      rec.representative_id = rec.member_ids.front();
      rec.noise_seed = static_cast<std::uint64_t>(t * 100 + c);
      h.clusters.push_back(rec);
    }
    h.global_snapshot = ParamVector(d, 0.25 * t);
    h.aggregate_hash = SnapshotDigest(h.global_snapshot);
    out.push_back(std::move(h));
  }
  return out;
}

TEST(StorageAccounting, ClientUpdateComponentAtTableOneScale) {
  const auto h = Table1Rounds(50, 8, 50, 1000);
  const auto r = StorageAccounting(h, 1000);
  EXPECT_EQ(r.full_updates_bytes - r.index_only_bytes, 20000000u);
  // Per round: 50 member ids + 6 representative ids, 6 seeds, one snapshot.
  EXPECT_EQ(r.index_only_bytes, 50u * ((50 + 6) * 4 + 6 * 8 + 1000 * 8));
}

TEST(StorageAccounting, EmptyHistory) {
  const auto r = StorageAccounting({}, 1000);
  EXPECT_EQ(r.index_only_bytes, 0u);
  EXPECT_EQ(r.full_updates_bytes, 0u);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(StorageAccounting, RatioAtConvNetScale) {
  const auto r = StorageAccounting(Table1Rounds(50, 8, 50, 26474), 26474);
  EXPECT_GE(r.ratio, 10.0);
}

TEST(StorageAccounting, RecomputedFromDiskMatchesExactly) {
  for (auto mode : {StorageMode::kIndexOnly, StorageMode::kFullUpdates}) {
    testing::TempDir dir("storage");
    HistoryStore store(ParamVector(300));
    for (auto& h : Table1Rounds(20, 4, 7, 300)) store.Append(std::move(h));
    store.Save(dir.path(), mode);
    EXPECT_EQ(StorageAccountingFromDisk(dir.path()),
              StorageAccounting(store.rounds(), store.dim()));
  }
}

}  // namespace
}  // namespace pdfl
