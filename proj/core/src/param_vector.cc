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

#include "pdfl/param_vector.h"

#include <cmath>
#include <string>

#include "pdfl/errors.h"

namespace pdfl {

bool ParamVector::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void ParamVector::AddScaled(double scale, const ParamVector& other) {
  if (other.size() != size()) {
    throw ConfigError("parameter length mismatch: " + std::to_string(size()) +
                      " vs " + std::to_string(other.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += scale * other.values_[i];
  }
}

double Dot(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) {
    throw ConfigError("parameter length mismatch: " + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double L2Norm(const ParamVector& a) { return std::sqrt(Dot(a, a)); }

}  // namespace pdfl
