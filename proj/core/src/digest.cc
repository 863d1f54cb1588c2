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

#include "pdfl/digest.h"

#include <openssl/sha.h>

#include <bit>
#include <cstring>

#include "pdfl/errors.h"

namespace pdfl {

std::string Sha256Hex(std::string_view bytes) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
         md);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(2 * SHA256_DIGEST_LENGTH, '0');
  for (int i = 0; i < SHA256_DIGEST_LENGTH; ++i) {
    out[2 * i] = kHex[md[i] >> 4];
    out[2 * i + 1] = kHex[md[i] & 0xf];
  }
  return out;
}

std::string EncodeFloat64LE(const ParamVector& v) {
  std::string out(v.size() * 8, '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(v[i]);
    for (int b = 0; b < 8; ++b) {
      out[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
  return out;
}

ParamVector DecodeFloat64LE(std::string_view bytes) {
  if (bytes.size() % 8 != 0) {
    throw FormatError("float64 payload of " + std::to_string(bytes.size()) +
                      " bytes is not a multiple of 8");
  }
  ParamVector v(bytes.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(
                  static_cast<unsigned char>(bytes[i * 8 + b]))
              << (8 * b);
    }
    v[i] = std::bit_cast<double>(bits);
  }
  return v;
}

std::string SnapshotDigest(const ParamVector& v) {
  return Sha256Hex(EncodeFloat64LE(v));
}

}  // namespace pdfl
