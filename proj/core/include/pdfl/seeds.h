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

#ifndef PDFL_SEEDS_H_
#define PDFL_SEEDS_H_

#include <cstdint>
#include <initializer_list>

namespace pdfl {

// Independent random streams used by the simulator. Every stochastic choice
// draws from a seed derived from (master seed, stream, coordinates), so the
// outcome of a round never depends on evaluation order.
enum class SeedStream : std::uint64_t {
  kClient = 1,
  kClientUpdate = 2,
  kRepresentative = 3,
  kNoise = 4,
  kUnlearnRequests = 5,
  kInit = 6,
  kData = 7,
  kPartition = 8,
  kHoldout = 9,
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

std::uint64_t DeriveSeed(std::uint64_t base,
                         std::initializer_list<std::uint64_t> parts);

inline std::uint64_t DeriveSeed(std::uint64_t base, SeedStream stream,
                                std::initializer_list<std::uint64_t> parts) {
  return DeriveSeed(DeriveSeed(base, {static_cast<std::uint64_t>(stream)}),
                    parts);
}

}  // namespace pdfl

#endif  // PDFL_SEEDS_H_
