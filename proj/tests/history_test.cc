#include <cstring>
#include <fstream>

#include <gtest/gtest.h>

#include "pdfl/errors.h"
#include "pdfl/federated.h"
#include "pdfl/history.h"
#include "pdfl/trainer.h"
#include "test_util.h"

namespace pdfl {
namespace {

using testing::TempDir;

TrainResult SmallRun(StorageMode mode) {
  const Dataset ds = SynthClassification(240, 3, 2, 4);
  TrainInputs in;
  in.spec = {ModelKind::kLogisticRegression, 3, 0, 2};
  in.cfg.num_clients = 6;
  in.cfg.rounds = 3;
  in.cfg.k = 2;
  in.cfg.x = 2;
  in.cfg.sigma = 0.5;
  in.cfg.storage_mode = mode;
  in.cfg.master_seed = 4;
  in.clients = MakeClients(Partition(ds, {PartitionMode::kIid, 6, 1, 4}), 4);
  return Train(std::move(in));
}

void ExpectSameRecords(const HistoryStore& a, const HistoryStore& b, bool updates) {
  ASSERT_EQ(a.rounds().size(), b.rounds().size());
  EXPECT_EQ(a.initial_model(), b.initial_model());
  for (std::size_t i = 0; i < a.rounds().size(); ++i) {
    const auto& x = a.rounds()[i];
    const auto& y = b.rounds()[i];
    EXPECT_EQ(x.round, y.round);
    EXPECT_EQ(x.generation, y.generation);
    EXPECT_EQ(x.retrained, y.retrained);
    EXPECT_EQ(x.delta, y.delta);
    EXPECT_EQ(x.clusters, y.clusters);
    EXPECT_EQ(x.global_snapshot, y.global_snapshot);
    EXPECT_EQ(x.aggregate_hash, y.aggregate_hash);
    if (updates) {
      EXPECT_EQ(x.client_updates, y.client_updates);
    }
  }
}

TEST(HistoryStore, SaveLoadRoundTripIndexOnly) {
  TempDir dir("hist");
  const auto r = SmallRun(StorageMode::kIndexOnly);
  r.history.Save(dir.path(), StorageMode::kIndexOnly);
  const auto loaded = HistoryStore::Load(dir.path());
  ExpectSameRecords(r.history, loaded, false);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "round_0001.updates.bin"));
  for (const auto& h : loaded.rounds()) EXPECT_TRUE(h.client_updates.empty());
}

TEST(HistoryStore, SaveLoadRoundTripFullUpdates) {
  TempDir dir("hist");
  const auto r = SmallRun(StorageMode::kFullUpdates);
  r.history.Save(dir.path(), StorageMode::kFullUpdates);
  ExpectSameRecords(r.history, HistoryStore::Load(dir.path()), true);
  EXPECT_EQ(std::filesystem::file_size(dir.path() / "round_0002.updates.bin"),
            6u * r.history.dim() * 8);
}

TEST(HistoryStore, SnapshotFilesAreRawLittleEndian) {
  TempDir dir("hist");
  const auto r = SmallRun(StorageMode::kIndexOnly);
  r.history.Save(dir.path(), StorageMode::kIndexOnly);
  std::ifstream in(dir.path() / "round_0003.bin", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), r.history.dim() * 8);
  double first = 0.0;
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(bytes[i]);
  std::memcpy(&first, &bits, 8);
  EXPECT_EQ(first, r.final_model[0]);
}

TEST(HistoryStore, TamperedSnapshotIsAnIntegrityError) {
  TempDir dir("hist");
  SmallRun(StorageMode::kIndexOnly).history.Save(dir.path(), StorageMode::kIndexOnly);
  {
    std::fstream f(dir.path() / "round_0002.bin",
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(3);
    f.put('\x7f');
  }
  EXPECT_THROW(HistoryStore::Load(dir.path()), IntegrityError);
}

TEST(HistoryStore, MalformedRecordIsAFormatError) {
  TempDir dir("hist");
  SmallRun(StorageMode::kIndexOnly).history.Save(dir.path(), StorageMode::kIndexOnly);
  std::ofstream(dir.path() / "round_0001.json") << "{\"round\": 1,";
  EXPECT_THROW(HistoryStore::Load(dir.path()), FormatError);
  EXPECT_THROW(HistoryStore::Load(dir.path() / "missing"), FormatError);
}

TEST(HistoryStore, SnapshotsAndTruncation) {
  auto r = SmallRun(StorageMode::kIndexOnly);
  HistoryStore& s = r.history;
  EXPECT_EQ(s.Snapshot(0), s.initial_model());
  EXPECT_EQ(s.last_round(), 3);
  s.TruncateFrom(2);
  EXPECT_EQ(s.last_round(), 1);
  EXPECT_THROW(s.Snapshot(2), IntegrityError);
  RoundHistory skip;
  skip.round = 3;
  EXPECT_THROW(s.Append(skip), IntegrityError);
  s.rounds()[0].global_snapshot[0] += 1.0;
  EXPECT_THROW(s.Snapshot(1), IntegrityError);
}

TEST(ClientIdToken, RoundTrip) {
  EXPECT_EQ(ClientIdToken(17), "c17");
  EXPECT_EQ(ParseClientIdToken("c17"), 17);
  EXPECT_THROW(ParseClientIdToken("17"), FormatError);
  EXPECT_THROW(ParseClientIdToken("cx"), FormatError);
}

TEST(StorageModeName, RoundTrip) {
  EXPECT_EQ(ParseStorageMode("index-only"), StorageMode::kIndexOnly);
  EXPECT_EQ(ParseStorageMode("full-updates"), StorageMode::kFullUpdates);
  EXPECT_THROW(ParseStorageMode("other"), ConfigError);
}

}  // namespace
}  // namespace pdfl
