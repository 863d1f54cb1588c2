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

#ifndef PDFL_PARAM_VECTOR_H_
#define PDFL_PARAM_VECTOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pdfl {

// Flat vector of model parameters. Client updates, cluster representatives and
// global models all travel in this form.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double fill = 0.0)
      : values_(dim, fill) {}
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}
  ParamVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& raw() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool AllFinite() const;

  // this += scale * other. Throws ConfigError on a length mismatch.
  void AddScaled(double scale, const ParamVector& other);

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

double Dot(const ParamVector& a, const ParamVector& b);
double L2Norm(const ParamVector& a);

}  // namespace pdfl

#endif  // PDFL_PARAM_VECTOR_H_
