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

#ifndef PDFL_POD_H_
#define PDFL_POD_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdfl/clustering.h"
#include "pdfl/history.h"
#include "pdfl/model.h"

namespace pdfl {

// A peer whose update lay within delta of the target's.
struct PodWitness {
  ClientId id = -1;
  double distance = 0.0;

  friend bool operator==(const PodWitness&, const PodWitness&) = default;
};

// Evidence for one round in which the target participated.
struct PodEntry {
  int round = 0;
  int cluster_index = 0;
  std::vector<ClientId> member_ids;  // post-removal membership
  ClientId representative_id = -1;
  double radius = 0.0;
  int deniability_count = 0;
  std::vector<PodWitness> witnesses;

  friend bool operator==(const PodEntry&, const PodEntry&) = default;
};

struct PodVerdict {
  bool valid = true;
  int round = -1;    // set when violated
  int cluster = -1;  // set when violated

  friend bool operator==(const PodVerdict&, const PodVerdict&) = default;
};

// Proof-of-Deniability for one unlearned client.
struct ProofOfDeniability {
  ClientId target_id = -1;
  int x = 1;
  double delta = 0.0;
  Metric metric = Metric::kCosine;
  std::vector<PodEntry> entries;
  PodVerdict verdict;

  friend bool operator==(const ProofOfDeniability&,
                         const ProofOfDeniability&) = default;
};

// Target-to-peer distances captured before the target is scrubbed from the
// history, one entry per round it took part in.
struct FootprintEntry {
  int round = 0;
  int generation = 0;
  int cluster_index = 0;
  std::vector<PodWitness> peers;  // every other member with its distance
};

struct TargetFootprint {
  ClientId target_id = -1;
  std::vector<FootprintEntry> entries;

  int DeniabilityCount(const FootprintEntry& e, double delta) const;
};

// Reads peer distances from the stored pairwise records, or recomputes them
// from stored client updates (full-updates mode) when a record is missing.
TargetFootprint CaptureFootprint(std::span<const RoundHistory> histories,
                                 ClientId target_id, Metric metric);

// Builds the proof from a scrubbed history. Footprint entries whose round has
// since been re-executed are dropped: the target is absent from those rounds.
// The verdict is valid iff every entry keeps >= x members and >= x-1
// witnesses, and no cluster anywhere in the history has fewer than x members.
ProofOfDeniability GeneratePod(std::span<const RoundHistory> histories,
                               const TargetFootprint& footprint, int x,
                               double delta, Metric metric);

// Canonical document: sorted keys, no whitespace, floats printed with 17
// significant digits, LF terminated.
std::string SerializePod(const ProofOfDeniability& pod);
// Throws FormatError on malformed documents.
ProofOfDeniability ParsePod(std::string_view text);

// SHA-256 of SerializePod(pod).
std::string PodDigest(const ProofOfDeniability& pod);

struct PodCheck {
  bool ok = false;
  std::string reason;
};

// Independent re-check of a proof against the stored history: digest, target
// absence, membership and representative agreement, cluster sizes, witness
// distances <= delta, witness counts, and the verdict itself.
PodCheck CheckPod(const ProofOfDeniability& pod, std::string_view digest,
                  std::span<const RoundHistory> histories);

bool VerifyPod(const ProofOfDeniability& pod, std::string_view digest,
               std::span<const RoundHistory> histories);

// Writes <path> and the detached digest <path>.sha256.
void WritePod(const std::filesystem::path& path, const ProofOfDeniability& pod);

struct SignedPod {
  ProofOfDeniability pod;
  std::string digest;
};

// Throws FormatError when the document or its digest file is malformed.
SignedPod ReadPod(const std::filesystem::path& path);

}  // namespace pdfl

#endif  // PDFL_POD_H_
