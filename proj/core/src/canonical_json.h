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

#ifndef PDFL_SRC_CANONICAL_JSON_H_
#define PDFL_SRC_CANONICAL_JSON_H_

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace pdfl::internal {

// Sorted keys, no whitespace, doubles with 17 significant digits.
std::string CanonicalDump(const nlohmann::json& value);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace pdfl::internal

#endif  // PDFL_SRC_CANONICAL_JSON_H_
