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

#include "pdfl/pod.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "canonical_json.h"
#include "pdfl/digest.h"
#include "pdfl/errors.h"
#include "pdfl/unlearning.h"

namespace pdfl {
using nlohmann::json;

namespace {

const RoundHistory* FindRound(std::span<const RoundHistory> histories,
                              int round) {
  for (const auto& h : histories) {
    if (h.round == round) return &h;
  }
  return nullptr;
}

// Earliest (round, cluster) at which the proof breaks, or nullopt.
std::optional<Violation> EarliestBreak(std::span<const PodEntry> entries,
                                       std::span<const RoundHistory> histories,
                                       int x) {
  std::optional<Violation> best;
  auto consider = [&best](Violation v) {
    if (!best || v.round < best->round ||
        (v.round == best->round && v.cluster_index < best->cluster_index)) {
      best = v;
    }
  };
  for (const auto& e : entries) {
    if (static_cast<int>(e.member_ids.size()) < x ||
        e.deniability_count < x - 1) {
      consider({e.round, e.cluster_index});
    }
  }
  if (auto v = FindViolation(histories, x)) consider(*v);
  return best;
}

PodVerdict VerdictFrom(const std::optional<Violation>& v) {
  if (!v) return {};
  return {false, v->round, v->cluster_index};
}

template <typename T>
T Get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("PoD: missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("PoD: bad field '") + key + "': " + e.what());
  }
}

std::string Trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.pop_back();
  }
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) {
    ++start;
  }
  return s.substr(start);
}

}  // namespace

int TargetFootprint::DeniabilityCount(const FootprintEntry& e,
                                      double delta) const {
  return static_cast<int>(std::count_if(
      e.peers.begin(), e.peers.end(),
      [delta](const PodWitness& w) { return w.distance <= delta; }));
}

TargetFootprint CaptureFootprint(std::span<const RoundHistory> histories,
                                 ClientId target_id, Metric metric) {
  TargetFootprint fp;
  fp.target_id = target_id;
  for (const auto& h : histories) {
    for (std::size_t ci = 0; ci < h.clusters.size(); ++ci) {
      const ClusterRecord& c = h.clusters[ci];
      if (!c.Contains(target_id)) continue;
      FootprintEntry e;
      e.round = h.round;
      e.generation = h.generation;
      e.cluster_index = static_cast<int>(ci);
      for (ClientId m : c.member_ids) {
        if (m == target_id) continue;
        std::optional<double> d = c.DistanceBetween(target_id, m);
        if (!d) {
          auto a = h.client_updates.find(target_id);
          auto b = h.client_updates.find(m);
          if (a != h.client_updates.end() && b != h.client_updates.end()) {
            d = ModelDistance(a->second, b->second, metric);
          }
        }
        // Without a recorded distance the peer cannot serve as a witness.
        e.peers.push_back({m, d.value_or(INFINITY)});
      }
      fp.entries.push_back(std::move(e));
    }
  }
  return fp;
}

ProofOfDeniability GeneratePod(std::span<const RoundHistory> histories,
                               const TargetFootprint& footprint, int x,
                               double delta, Metric metric) {
  if (x < 1) throw ConfigError("x must be >= 1");
  ProofOfDeniability pod;
  pod.target_id = footprint.target_id;
  pod.x = x;
  pod.delta = delta;
  pod.metric = metric;

  for (const auto& fe : footprint.entries) {
    const RoundHistory* h = FindRound(histories, fe.round);
    // Re-executed since capture: the target is no longer in that round.
    if (!h || h->generation != fe.generation) continue;

    PodEntry e;
    e.round = fe.round;
    e.cluster_index = -1;
    for (std::size_t ci = 0; ci < h->clusters.size() && !fe.peers.empty(); ++ci) {
      if (h->clusters[ci].Contains(fe.peers.front().id)) {
        e.cluster_index = static_cast<int>(ci);
        break;
      }
    }
    if (e.cluster_index >= 0) {
      const ClusterRecord& c = h->clusters[e.cluster_index];
      e.member_ids = c.member_ids;
      e.representative_id = c.representative_id;
      e.radius = c.radius;
      for (const auto& peer : fe.peers) {
        if (peer.distance <= delta && c.Contains(peer.id)) {
          e.witnesses.push_back(peer);
        }
      }
    }
    e.deniability_count = static_cast<int>(e.witnesses.size());
    pod.entries.push_back(std::move(e));
  }
  pod.verdict = VerdictFrom(EarliestBreak(pod.entries, histories, x));
  return pod;
}

std::string SerializePod(const ProofOfDeniability& pod) {
  json entries = json::array();
  for (const auto& e : pod.entries) {
    json members = json::array();
    for (ClientId id : e.member_ids) members.push_back(ClientIdToken(id));
    json witnesses = json::array();
    for (const auto& w : e.witnesses) {
      witnesses.push_back({ClientIdToken(w.id), w.distance});
    }
    entries.push_back(
        {{"round", e.round},
         {"cluster", e.cluster_index},
         {"members", members},
         {"representative", e.representative_id < 0
                                ? json(nullptr)
                                : json(ClientIdToken(e.representative_id))},
         {"radius", e.radius},
         {"deniability_count", e.deniability_count},
         {"witnesses", witnesses}});
  }
  json doc = {{"target", ClientIdToken(pod.target_id)},
              {"x", pod.x},
              {"delta", pod.delta},
              {"metric", MetricName(pod.metric)},
              {"entries", entries},
              {"verdict",
               {{"valid", pod.verdict.valid},
                {"round", pod.verdict.round},
                {"cluster", pod.verdict.cluster}}}};
  return internal::CanonicalDump(doc) + "\n";
}

ProofOfDeniability ParsePod(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("PoD: ") + e.what());
  }
  ProofOfDeniability pod;
  pod.target_id = ParseClientIdToken(Get<std::string>(doc, "target"));
  pod.x = Get<int>(doc, "x");
  pod.delta = Get<double>(doc, "delta");
  try {
    pod.metric = ParseMetric(Get<std::string>(doc, "metric"));
  } catch (const ConfigError& e) {
    throw FormatError(std::string("PoD: ") + e.what());
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw FormatError("PoD: entries must be an array");
  }
  for (const auto& je : doc["entries"]) {
    PodEntry e;
    e.round = Get<int>(je, "round");
    e.cluster_index = Get<int>(je, "cluster");
    for (const auto& tok : Get<std::vector<std::string>>(je, "members")) {
      e.member_ids.push_back(ParseClientIdToken(tok));
    }
    if (!je.contains("representative")) {
      throw FormatError("PoD: missing field 'representative'");
    }
    const json& rep = je["representative"];
    if (rep.is_null()) {
      e.representative_id = -1;
    } else if (rep.is_string()) {
      e.representative_id = ParseClientIdToken(rep.get<std::string>());
    } else {
      throw FormatError("PoD: representative must be a client id or null");
    }
    e.radius = Get<double>(je, "radius");
    e.deniability_count = Get<int>(je, "deniability_count");
    if (!je.contains("witnesses") || !je["witnesses"].is_array()) {
      throw FormatError("PoD: witnesses must be an array");
    }
    for (const auto& jw : je["witnesses"]) {
      if (!jw.is_array() || jw.size() != 2 || !jw[0].is_string() ||
          !jw[1].is_number()) {
        throw FormatError("PoD: witnesses are [client, distance] pairs");
      }
      e.witnesses.push_back(
          {ParseClientIdToken(jw[0].get<std::string>()), jw[1].get<double>()});
    }
    pod.entries.push_back(std::move(e));
  }
  const json& v = doc.contains("verdict") ? doc["verdict"] : json();
  pod.verdict.valid = Get<bool>(v, "valid");
  pod.verdict.round = Get<int>(v, "round");
  pod.verdict.cluster = Get<int>(v, "cluster");
  return pod;
}

std::string PodDigest(const ProofOfDeniability& pod) {
  return Sha256Hex(SerializePod(pod));
}

PodCheck CheckPod(const ProofOfDeniability& pod, std::string_view digest,
                  std::span<const RoundHistory> histories) {
  auto fail = [](std::string reason) { return PodCheck{false, std::move(reason)}; };

  if (PodDigest(pod) != digest) return fail("digest mismatch");
  if (pod.x < 1) return fail("x must be >= 1");
  if (!(pod.delta > 0.0) || !std::isfinite(pod.delta)) {
    return fail("delta must be positive");
  }
  for (const auto& h : histories) {
    if (h.Contains(pod.target_id)) {
      return fail("target still present in round " + std::to_string(h.round));
    }
  }

  int last_round = 0;
  for (const auto& e : pod.entries) {
    const std::string at = "round " + std::to_string(e.round) + ": ";
    if (e.round <= last_round) return fail(at + "entries out of order");
    last_round = e.round;

    const RoundHistory* h = FindRound(histories, e.round);
    if (!h) return fail(at + "not in history");
    if (h->delta != pod.delta) return fail(at + "delta differs from the round record");
    if (std::find(e.member_ids.begin(), e.member_ids.end(), pod.target_id) !=
        e.member_ids.end()) {
      return fail(at + "target listed as a member");
    }
    if (e.cluster_index == -1) {
      if (!e.member_ids.empty() || e.representative_id != -1 ||
          e.radius != 0.0) {
        return fail(at + "deleted cluster carries members");
      }
    } else {
      if (e.cluster_index < 0 ||
          e.cluster_index >= static_cast<int>(h->clusters.size())) {
        return fail(at + "cluster index out of range");
      }
      const ClusterRecord& c = h->clusters[e.cluster_index];
      if (c.member_ids != e.member_ids) return fail(at + "membership differs");
      if (c.representative_id != e.representative_id) {
        return fail(at + "representative differs");
      }
      if (c.radius != e.radius) return fail(at + "radius differs");
    }

    std::set<ClientId> seen;
    for (const auto& w : e.witnesses) {
      if (w.id == pod.target_id) return fail(at + "target used as witness");
      if (!seen.insert(w.id).second) return fail(at + "duplicate witness");
      if (!std::binary_search(e.member_ids.begin(), e.member_ids.end(), w.id)) {
        return fail(at + "witness outside the cluster");
      }
      if (!(w.distance >= 0.0) || !(w.distance <= pod.delta)) {
        return fail(at + "witness distance exceeds delta");
      }
    }
    if (e.deniability_count != static_cast<int>(e.witnesses.size())) {
      return fail(at + "deniability count does not match witnesses");
    }
  }

  const PodVerdict expected =
      VerdictFrom(EarliestBreak(pod.entries, histories, pod.x));
  if (expected != pod.verdict) return fail("verdict inconsistent with evidence");
  if (!pod.verdict.valid) return fail("verdict: violated");
  return {true, ""};
}

bool VerifyPod(const ProofOfDeniability& pod, std::string_view digest,
               std::span<const RoundHistory> histories) {
  return CheckPod(pod, digest, histories).ok;
}

void WritePod(const std::filesystem::path& path, const ProofOfDeniability& pod) {
  const std::string text = SerializePod(pod);
  internal::WriteTextFile(path, text);
  internal::WriteTextFile(path.string() + ".sha256", Sha256Hex(text) + "\n");
}

SignedPod ReadPod(const std::filesystem::path& path) {
  SignedPod out;
  out.pod = ParsePod(internal::ReadTextFile(path));
  out.digest = Trim(internal::ReadTextFile(path.string() + ".sha256"));
  if (out.digest.size() != 64 ||
      out.digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw FormatError(path.string() + ".sha256: not a SHA-256 hex digest");
  }
  return out;
}

}  // namespace pdfl
