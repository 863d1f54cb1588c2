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

#include "pdfl/history.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "canonical_json.h"
#include "pdfl/digest.h"
#include "pdfl/errors.h"

namespace pdfl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kHistoryFormatVersion = 1;

std::string RoundStem(int round) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "round_%04d", round);
  return buf;
}

json ClusterToJson(const ClusterRecord& c) {
  json members = json::array();
  for (ClientId id : c.member_ids) members.push_back(ClientIdToken(id));
  json distances = json::array();
  for (const auto& d : c.distances) {
    distances.push_back({ClientIdToken(d.a), ClientIdToken(d.b), d.distance});
  }
  return {{"members", members},
          {"representative", ClientIdToken(c.representative_id)},
          {"radius", c.radius},
          {"noise_seed", c.noise_seed},
          {"distances", distances}};
}

template <typename T>
T Field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(where + ": bad field '" + key + "': " + e.what());
  }
}

ClusterRecord ClusterFromJson(const json& j, const std::string& where) {
  ClusterRecord c;
  for (const auto& tok : Field<std::vector<std::string>>(j, "members", where)) {
    c.member_ids.push_back(ParseClientIdToken(tok));
  }
  c.representative_id =
      ParseClientIdToken(Field<std::string>(j, "representative", where));
  c.radius = Field<double>(j, "radius", where);
  c.noise_seed = Field<std::uint64_t>(j, "noise_seed", where);
  const json& ds = j.at("distances");
  if (!ds.is_array()) throw FormatError(where + ": distances must be an array");
  for (const auto& row : ds) {
    if (!row.is_array() || row.size() != 3) {
      throw FormatError(where + ": distance rows are [a, b, distance]");
    }
    try {
      c.distances.push_back({ParseClientIdToken(row[0].get<std::string>()),
                             ParseClientIdToken(row[1].get<std::string>()),
                             row[2].get<double>()});
    } catch (const json::exception& e) {
      throw FormatError(where + ": bad distance row: " + e.what());
    }
  }
  return c;
}

std::string ReadBinary(const fs::path& path) {
  return internal::ReadTextFile(path);
}

}  // namespace

const char* StorageModeName(StorageMode mode) {
  return mode == StorageMode::kIndexOnly ? "index-only" : "full-updates";
}

StorageMode ParseStorageMode(std::string_view name) {
  if (name == "index-only") return StorageMode::kIndexOnly;
  if (name == "full-updates") return StorageMode::kFullUpdates;
  throw ConfigError("unknown storage mode '" + std::string(name) + "'");
}

std::string ClientIdToken(ClientId id) { return "c" + std::to_string(id); }

ClientId ParseClientIdToken(std::string_view token) {
  if (token.size() < 2 || token[0] != 'c') {
    throw FormatError("bad client id token '" + std::string(token) + "'");
  }
  ClientId id = 0;
  auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), id);
  if (ec != std::errc() || ptr != token.data() + token.size() || id < 0) {
    throw FormatError("bad client id token '" + std::string(token) + "'");
  }
  return id;
}

std::optional<double> ClusterRecord::DistanceBetween(ClientId a,
                                                     ClientId b) const {
  if (a == b) return 0.0;
  if (a > b) std::swap(a, b);
  for (const auto& d : distances) {
    if (d.a == a && d.b == b) return d.distance;
  }
  return std::nullopt;
}

bool ClusterRecord::Contains(ClientId id) const {
  return std::binary_search(member_ids.begin(), member_ids.end(), id);
}

std::vector<ClientId> RoundHistory::Participants() const {
  std::vector<ClientId> out;
  for (const auto& c : clusters) {
    out.insert(out.end(), c.member_ids.begin(), c.member_ids.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool RoundHistory::Contains(ClientId id) const {
  return std::any_of(clusters.begin(), clusters.end(),
                     [id](const ClusterRecord& c) { return c.Contains(id); });
}

bool RoundHistory::HashMatches() const {
  return SnapshotDigest(global_snapshot) == aggregate_hash;
}

std::string RoundRecordJson(const RoundHistory& h) {
  json clusters = json::array();
  for (const auto& c : h.clusters) clusters.push_back(ClusterToJson(c));
  json j = {{"round", h.round},
            {"generation", h.generation},
            {"retrained", h.retrained},
            {"delta", h.delta},
            {"dim", h.global_snapshot.size()},
            {"clusters", clusters},
            {"aggregate_hash", h.aggregate_hash},
            {"snapshot", RoundStem(h.round) + ".bin"}};
  return internal::CanonicalDump(j) + "\n";
}

HistoryStore::HistoryStore(ParamVector initial_model)
    : initial_(std::move(initial_model)),
      initial_hash_(SnapshotDigest(initial_)) {}

const ParamVector& HistoryStore::Snapshot(int round) const {
  if (round == 0) {
    if (SnapshotDigest(initial_) != initial_hash_) {
      throw IntegrityError("initial model digest mismatch");
    }
    return initial_;
  }
  for (const auto& h : rounds_) {
    if (h.round != round) continue;
    if (!h.HashMatches()) {
      throw IntegrityError("snapshot digest mismatch for round " +
                           std::to_string(round));
    }
    return h.global_snapshot;
  }
  throw IntegrityError("no snapshot stored for round " + std::to_string(round));
}

void HistoryStore::Append(RoundHistory history) {
  if (history.round != last_round() + 1) {
    throw IntegrityError("round " + std::to_string(history.round) +
                         " appended after round " +
                         std::to_string(last_round()));
  }
  rounds_.push_back(std::move(history));
}

void HistoryStore::TruncateFrom(int round) {
  std::erase_if(rounds_, [round](const RoundHistory& h) { return h.round >= round; });
}

void HistoryStore::Save(const fs::path& dir, StorageMode mode) const {
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("round_", 0) == 0) fs::remove(entry.path());
  }
  internal::WriteTextFile(dir / "initial.bin", EncodeFloat64LE(initial_));

  json round_list = json::array();
  for (const auto& h : rounds_) {
    const std::string stem = RoundStem(h.round);
    std::string record = RoundRecordJson(h);
    if (mode == StorageMode::kFullUpdates) {
      // Append the update listing to the canonical record.
      json j = json::parse(record);
      json ids = json::array();
      std::string payload;
      for (const auto& [id, w] : h.client_updates) {
        ids.push_back(ClientIdToken(id));
        payload += EncodeFloat64LE(w);
      }
      j["updates"] = {{"file", stem + ".updates.bin"}, {"ids", ids}};
      record = internal::CanonicalDump(j) + "\n";
      internal::WriteTextFile(dir / (stem + ".updates.bin"), payload);
    }
    internal::WriteTextFile(dir / (stem + ".json"), record);
    internal::WriteTextFile(dir / (stem + ".bin"),
                            EncodeFloat64LE(h.global_snapshot));
    round_list.push_back(h.round);
  }
  json manifest = {{"format_version", kHistoryFormatVersion},
                   {"dim", initial_.size()},
                   {"storage_mode", StorageModeName(mode)},
                   {"initial_hash", initial_hash_},
                   {"rounds", round_list}};
  internal::WriteTextFile(dir / "manifest.json",
                          internal::CanonicalDump(manifest) + "\n");
}

HistoryStore HistoryStore::Load(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(internal::ReadTextFile(manifest_path));
  } catch (const json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  const std::string where = manifest_path.string();
  if (Field<int>(manifest, "format_version", where) != kHistoryFormatVersion) {
    throw FormatError(where + ": unsupported format_version");
  }
  const auto dim = Field<std::size_t>(manifest, "dim", where);

  HistoryStore store(DecodeFloat64LE(ReadBinary(dir / "initial.bin")));
  if (store.initial_.size() != dim) {
    throw FormatError("initial.bin holds " +
                      std::to_string(store.initial_.size()) +
                      " coordinates, manifest says " + std::to_string(dim));
  }
  if (store.initial_hash_ != Field<std::string>(manifest, "initial_hash", where)) {
    throw IntegrityError("initial model digest mismatch");
  }

  for (int round : Field<std::vector<int>>(manifest, "rounds", where)) {
    const std::string stem = RoundStem(round);
    const fs::path record_path = dir / (stem + ".json");
    const std::string rwhere = record_path.string();
    json j;
    try {
      j = json::parse(internal::ReadTextFile(record_path));
    } catch (const json::exception& e) {
      throw FormatError(rwhere + ": " + e.what());
    }
    RoundHistory h;
    h.round = Field<int>(j, "round", rwhere);
    if (h.round != round) throw FormatError(rwhere + ": round number mismatch");
    h.generation = Field<int>(j, "generation", rwhere);
    h.retrained = Field<bool>(j, "retrained", rwhere);
    h.delta = Field<double>(j, "delta", rwhere);
    h.aggregate_hash = Field<std::string>(j, "aggregate_hash", rwhere);
    if (!j.contains("clusters") || !j["clusters"].is_array()) {
      throw FormatError(rwhere + ": missing clusters array");
    }
    for (const auto& c : j["clusters"]) {
      h.clusters.push_back(ClusterFromJson(c, rwhere));
    }
    h.global_snapshot = DecodeFloat64LE(
        ReadBinary(dir / Field<std::string>(j, "snapshot", rwhere)));
    if (h.global_snapshot.size() != dim) {
      throw FormatError(rwhere + ": snapshot holds " +
                        std::to_string(h.global_snapshot.size()) +
                        " coordinates, expected " + std::to_string(dim));
    }
    if (!h.HashMatches()) {
      throw IntegrityError("snapshot digest mismatch for round " +
                           std::to_string(round));
    }
    if (j.contains("updates")) {
      const json& u = j["updates"];
      ParamVector all = DecodeFloat64LE(
          ReadBinary(dir / Field<std::string>(u, "file", rwhere)));
      auto ids = Field<std::vector<std::string>>(u, "ids", rwhere);
      if (all.size() != ids.size() * dim) {
        throw FormatError(rwhere + ": update payload size mismatch");
      }
      for (std::size_t i = 0; i < ids.size(); ++i) {
        std::vector<double> w(all.raw().begin() + i * dim,
                              all.raw().begin() + (i + 1) * dim);
        h.client_updates.emplace(ParseClientIdToken(ids[i]),
                                 ParamVector(std::move(w)));
      }
    }
    store.Append(std::move(h));
  }
  return store;
}

}  // namespace pdfl
