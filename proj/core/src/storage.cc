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

#include "pdfl/storage.h"

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "canonical_json.h"
#include "pdfl/errors.h"

namespace pdfl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RoundCounts {
  std::uint64_t ids = 0;          // member ids + representative ids
  std::uint64_t seeds = 0;
  std::uint64_t participants = 0;
};

StorageReport Totals(const std::vector<RoundCounts>& rounds, std::uint64_t dim) {
  StorageReport r;
  for (const auto& c : rounds) {
    const std::uint64_t index =
        c.ids * kClientIdBytes + c.seeds * kSeedBytes + dim * kCoordinateBytes;
    r.index_only_bytes += index;
    r.full_updates_bytes += index + c.participants * dim * kCoordinateBytes;
  }
  r.ratio = r.index_only_bytes == 0
                ? 0.0
                : static_cast<double>(r.full_updates_bytes) /
                      static_cast<double>(r.index_only_bytes);
  return r;
}

}  // namespace

StorageReport StorageAccounting(std::span<const RoundHistory> histories,
                                std::size_t dim) {
  std::vector<RoundCounts> rounds;
  for (const auto& h : histories) {
    RoundCounts c;
    for (const auto& cl : h.clusters) {
      c.ids += cl.member_ids.size() + 1;
      c.seeds += 1;
      c.participants += cl.member_ids.size();
    }
    rounds.push_back(c);
  }
  return Totals(rounds, dim);
}

StorageReport StorageAccountingFromDisk(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(internal::ReadTextFile(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw FormatError((dir / "manifest.json").string() + ": " + e.what());
  }
  std::uint64_t dim = 0;
  bool have_dim = false;
  std::vector<RoundCounts> rounds;
  for (int round : manifest.at("rounds").get<std::vector<int>>()) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "round_%04d", round);
    json record = json::parse(
        internal::ReadTextFile(dir / (std::string(stem) + ".json")));
    RoundCounts c;
    for (const auto& cl : record.at("clusters")) {
      const std::uint64_t members = cl.at("members").size();
      c.ids += members + (cl.at("representative").is_string() ? 1 : 0);
      c.seeds += cl.contains("noise_seed") ? 1 : 0;
      c.participants += members;
    }
    rounds.push_back(c);

    const auto bytes =
        fs::file_size(dir / record.at("snapshot").get<std::string>());
    if (bytes % kCoordinateBytes != 0) {
      throw FormatError(std::string(stem) + ".bin is not a float64 array");
    }
    const std::uint64_t d = bytes / kCoordinateBytes;
    if (have_dim && d != dim) {
      throw FormatError(std::string(stem) + ".bin changes the model dimension");
    }
    dim = d;
    have_dim = true;
  }
  return Totals(rounds, dim);
}

}  // namespace pdfl
