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

#ifndef PDFL_STORAGE_H_
#define PDFL_STORAGE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "pdfl/history.h"

namespace pdfl {

inline constexpr std::uint64_t kClientIdBytes = 4;
inline constexpr std::uint64_t kSeedBytes = 8;
inline constexpr std::uint64_t kCoordinateBytes = 8;

struct StorageReport {
  // Per round: member and representative ids, noise seeds, one snapshot.
  std::uint64_t index_only_bytes = 0;
  // Index-only plus every participant's d-vector per round.
  std::uint64_t full_updates_bytes = 0;
  // full / index-only; 0 when nothing is stored.
  double ratio = 0.0;

  friend bool operator==(const StorageReport&, const StorageReport&) = default;
};

StorageReport StorageAccounting(std::span<const RoundHistory> histories,
                                std::size_t dim);

// Same totals recomputed from a saved history directory: ids and seeds from
// the round records, d from the snapshot file sizes.
StorageReport StorageAccountingFromDisk(const std::filesystem::path& dir);

}  // namespace pdfl

#endif  // PDFL_STORAGE_H_
