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

#ifndef PDFL_DIGEST_H_
#define PDFL_DIGEST_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pdfl/param_vector.h"

namespace pdfl {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Raw little-endian IEEE-754 binary64 encoding, 8 bytes per coordinate.
std::string EncodeFloat64LE(const ParamVector& v);
ParamVector DecodeFloat64LE(std::string_view bytes);

// Digest of the little-endian encoding of a model snapshot.
std::string SnapshotDigest(const ParamVector& v);

}  // namespace pdfl

#endif  // PDFL_DIGEST_H_
