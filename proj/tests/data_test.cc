#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "pdfl/data.h"
#include "pdfl/errors.h"
#include "test_util.h"

namespace pdfl {
namespace {

using testing::TempDir;

void PutBigEndian32(std::string& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
}

void WriteBytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary).write(bytes.data(), bytes.size());
}

std::string IdxImages(std::uint32_t magic, std::uint32_t n, std::uint32_t rows,
                      std::uint32_t cols) {
  std::string s;
  PutBigEndian32(s, magic);
  PutBigEndian32(s, n);
  PutBigEndian32(s, rows);
  PutBigEndian32(s, cols);
  for (std::uint32_t i = 0; i < n * rows * cols; ++i) {
    s.push_back(static_cast<char>(i % 256));
  }
  return s;
}

std::string IdxLabels(std::uint32_t magic, std::uint32_t n) {
  std::string s;
  PutBigEndian32(s, magic);
  PutBigEndian32(s, n);
  for (std::uint32_t i = 0; i < n; ++i) s.push_back(static_cast<char>(i % 3));
  return s;
}

std::string ErrorOf(const std::filesystem::path& img, const std::filesystem::path& lbl) {
  try {
    LoadIdx(img, lbl);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

TEST(Synth, DeterministicPerSeed) {
  EXPECT_EQ(SynthClassification(100, 4, 2, 7), SynthClassification(100, 4, 2, 7));
  EXPECT_NE(SynthClassification(100, 4, 2, 7), SynthClassification(100, 4, 2, 8));
}

TEST(Synth, EveryClassPresent) {
  const Dataset ds = SynthClassification(10, 3, 10, 1);
  std::set<int> labels(ds.labels.begin(), ds.labels.end());
  EXPECT_EQ(labels.size(), 10u);
  EXPECT_THROW(SynthClassification(9, 3, 10, 1), ConfigError);
}

TEST(Idx, LoadsAndScales) {
  TempDir dir("idx");
  WriteBytes(dir.path() / "img", IdxImages(0x803, 5, 2, 3));
  WriteBytes(dir.path() / "lbl", IdxLabels(0x801, 5));
  const Dataset ds = LoadIdx(dir.path() / "img", dir.path() / "lbl");
  EXPECT_EQ(ds.size(), 5u);
  EXPECT_EQ(ds.input_dim, 6u);
  EXPECT_EQ(ds.num_classes, 3);
  EXPECT_DOUBLE_EQ(ds.features[7], 7.0 / 255.0);
  EXPECT_EQ(ds.labels[4], 1);
}

TEST(Idx, WrongLabelMagic) {
  TempDir dir("idx");
  WriteBytes(dir.path() / "img", IdxImages(0x803, 2, 2, 2));
  WriteBytes(dir.path() / "lbl", IdxLabels(0x803, 2));
  const std::string err = ErrorOf(dir.path() / "img", dir.path() / "lbl");
  EXPECT_NE(err.find("magic at byte 0"), std::string::npos) << err;
  EXPECT_NE(err.find("0x00000801"), std::string::npos) << err;
}

TEST(Idx, TruncatedImagesNameBothLengths) {
  TempDir dir("idx");
  std::string img = IdxImages(0x803, 4, 2, 2);
  img.resize(img.size() - 3);
  WriteBytes(dir.path() / "img", img);
  WriteBytes(dir.path() / "lbl", IdxLabels(0x801, 4));
  const std::string err = ErrorOf(dir.path() / "img", dir.path() / "lbl");
  EXPECT_NE(err.find("expected 32 bytes"), std::string::npos) << err;
  EXPECT_NE(err.find("actual 29"), std::string::npos) << err;
}

TEST(Idx, CountMismatch) {
  TempDir dir("idx");
  WriteBytes(dir.path() / "img", IdxImages(0x803, 4, 2, 2));
  WriteBytes(dir.path() / "lbl", IdxLabels(0x801, 3));
  EXPECT_NE(ErrorOf(dir.path() / "img", dir.path() / "lbl").find("byte 4"),
            std::string::npos);
}

TEST(Idx, OfficialMnistIfAvailable) {
  const char* root = std::getenv("PDFL_MNIST_DIR");
  if (!root) GTEST_SKIP() << "PDFL_MNIST_DIR not set";
  const std::filesystem::path dir(root);
  const Dataset ds =
      LoadIdx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
  EXPECT_EQ(ds.size(), 60000u);
  EXPECT_EQ(ds.input_dim, 784u);
}

// Multiset of rows, keyed by (label, features).
std::multiset<std::pair<int, std::vector<double>>> Rows(const Dataset& ds) {
  std::multiset<std::pair<int, std::vector<double>>> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto r = ds.Row(i);
    out.insert({ds.labels[i], {r.begin(), r.end()}});
  }
  return out;
}

TEST(Partition, IidEqualShards) {
  const Dataset ds = SynthClassification(100, 3, 4, 2);
  const auto shards = Partition(ds, {PartitionMode::kIid, 4, 1, 9});
  ASSERT_EQ(shards.size(), 4u);
  for (const auto& s : shards) EXPECT_EQ(s.size(), 25u);
}

TEST(Partition, IidRemainderGoesToFirstClients) {
  const Dataset ds = SynthClassification(103, 3, 4, 2);
  const auto shards = Partition(ds, {PartitionMode::kIid, 4, 1, 9});
  EXPECT_EQ(shards[0].size(), 26u);
  EXPECT_EQ(shards[2].size(), 26u);
  EXPECT_EQ(shards[3].size(), 25u);
}

TEST(Partition, LabelSkewPureClasses) {
  const Dataset ds = SynthClassification(40, 3, 2, 2);
  const auto shards = Partition(ds, {PartitionMode::kLabelSkew, 2, 1, 3});
  std::set<int> seen;
  for (const auto& s : shards) {
    std::set<int> labels(s.labels.begin(), s.labels.end());
    ASSERT_EQ(labels.size(), 1u);
    seen.insert(*labels.begin());
  }
  EXPECT_EQ(seen.size(), 2u);
}

TEST(Partition, ConservationAndSkewCardinality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset ds = SynthClassification(300 + seed, 3, 6, seed);
    const auto rows = Rows(ds);
    for (int skew : {1, 2, 3}) {
      for (auto mode : {PartitionMode::kIid, PartitionMode::kLabelSkew}) {
        const auto shards = Partition(ds, {mode, 12, skew, seed});
        std::multiset<std::pair<int, std::vector<double>>> merged;
        for (const auto& s : shards) {
          auto r = Rows(s);
          merged.insert(r.begin(), r.end());
          if (mode == PartitionMode::kLabelSkew) {
            std::set<int> labels(s.labels.begin(), s.labels.end());
            EXPECT_EQ(static_cast<int>(labels.size()), skew);
          }
        }
        EXPECT_EQ(merged, rows) << "seed " << seed;
      }
    }
  }
}

TEST(Partition, Deterministic) {
  const Dataset ds = SynthClassification(120, 3, 4, 2);
  const PartitionPlan plan{PartitionMode::kLabelSkew, 6, 2, 4};
  EXPECT_EQ(PartitionIndices(ds, plan), PartitionIndices(ds, plan));
}

TEST(Partition, Errors) {
  const Dataset ds = SynthClassification(10, 3, 2, 2);
  EXPECT_THROW(Partition(ds, {PartitionMode::kIid, 11, 1, 0}), PartitionError);
  // Ten clients each demanding one of two five-example classes is fine; twelve
  // clients over ten examples is not.
  EXPECT_NO_THROW(Partition(ds, {PartitionMode::kLabelSkew, 10, 1, 0}));
  EXPECT_THROW(Partition(ds, {PartitionMode::kLabelSkew, 2, 3, 0}), PartitionError);
}

TEST(Holdout, SplitsAndConserves) {
  const Dataset ds = SynthClassification(200, 3, 4, 5);
  auto [train, test] = SplitHoldout(ds, 0.2, 1);
  EXPECT_EQ(test.size(), 40u);
  EXPECT_EQ(train.size(), 160u);
  auto all = Rows(train);
  auto t = Rows(test);
  all.insert(t.begin(), t.end());
  EXPECT_EQ(all, Rows(ds));
  EXPECT_THROW(SplitHoldout(ds, 1.0, 1), ConfigError);
}

}  // namespace
}  // namespace pdfl
