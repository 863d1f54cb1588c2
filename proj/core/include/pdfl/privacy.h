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

#ifndef PDFL_PRIVACY_H_
#define PDFL_PRIVACY_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "pdfl/param_vector.h"

namespace pdfl {

// Gaussian mechanism and Renyi-DP accountant for perturbed cluster
// representatives. All logarithms are natural.

// l2-sensitivity of a cluster whose members lie within radius delta: 2*delta.
double SensitivityBound(double delta);

// w + N(0, stddev^2 I), deterministic per seed.
ParamVector GaussianPerturb(const ParamVector& w, double stddev,
                            std::uint64_t seed);

// Per-round RDP curve alpha -> alpha / (8 sigma^2).
class RdpCurve {
 public:
  explicit RdpCurve(double sigma);
  double operator()(double alpha) const;
  double sigma() const { return sigma_; }

 private:
  double sigma_;
};

RdpCurve RdpOfGaussian(double sigma);

// Sum of RDP values taken at a common alpha.
double ComposeRdp(std::span<const double> rho_list);

// (alpha, rho)-RDP implies (rho + log(1/delta)/(alpha-1), delta)-DP.
double RdpToDp(double rho, double alpha, double delta);

// alpha = 1 + 8 log(1/delta) / epsilon.
double CalibrationAlpha(double epsilon, double delta);

// Closed form T(1 + 8 log(1/delta)) / (7 epsilon^2). It bounds the composed
// privacy loss by epsilon only when epsilon <= 1; use CalibrateSigma.
double ClosedFormSigmaSquared(double epsilon, double delta, int rounds);

// Smallest sigma for which T rounds of the accountant, evaluated at
// CalibrationAlpha, give epsilon' <= epsilon. Equals the closed form above for
// epsilon <= 1 and T * alpha / (7 epsilon) beyond. Throws CalibrationError
// unless 0 < epsilon < 8 log(1/delta), 0 < delta < 1 and T >= 1.
double CalibrateSigma(double epsilon, double delta, int rounds);

// Forward chain: T-fold composition of RdpOfGaussian(sigma) at alpha,
// converted to epsilon.
double AccountEpsilon(double sigma, double alpha, double delta, int rounds);

// Epsilon at the alpha that minimises the forward chain for a fixed sigma.
double BestEpsilon(double sigma, double delta, int rounds);

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  int rounds = 1;
  double alpha = 2.0;
  double rho_per_round = 0.0;
  double sigma = 1.0;
};

// Calibrated sigma together with the alpha and per-round RDP it was derived at.
PrivacyBudget CalibrateBudget(double epsilon, double delta, int rounds);

// How the injected stddev relates to sigma and delta:
//   kAlgorithm1: sigma * delta
//   kAnalysis:   2 * sigma * delta (sigma times the sensitivity bound)
enum class NoiseConvention { kAlgorithm1, kAnalysis };

double NoiseStddev(double sigma, double delta, NoiseConvention convention);

const char* NoiseConventionName(NoiseConvention c);
NoiseConvention ParseNoiseConvention(std::string_view name);

}  // namespace pdfl

#endif  // PDFL_PRIVACY_H_
