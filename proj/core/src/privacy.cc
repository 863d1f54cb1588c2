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

#include "pdfl/privacy.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdfl/errors.h"

namespace pdfl {
namespace {

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie in (0, 1)");
  }
}

}  // namespace

double SensitivityBound(double delta) {
  if (!(delta > 0.0)) throw DomainError("Delta must be positive");
  return 2.0 * delta;
}

ParamVector GaussianPerturb(const ParamVector& w, double stddev,
                            std::uint64_t seed) {
  if (!(stddev >= 0.0)) throw DomainError("noise stddev must be >= 0");
  if (stddev == 0.0) return w;
  ParamVector out = w;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, stddev);
  for (double& v : out) v += normal(rng);
  return out;
}

RdpCurve::RdpCurve(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
}

double RdpCurve::operator()(double alpha) const {
  if (!(alpha > 1.0)) throw DomainError("RDP order alpha must exceed 1");
  return alpha / (8.0 * sigma_ * sigma_);
}

RdpCurve RdpOfGaussian(double sigma) { return RdpCurve(sigma); }

double ComposeRdp(std::span<const double> rho_list) {
  if (rho_list.empty()) throw DomainError("nothing to compose");
  double sum = 0.0;
  for (double rho : rho_list) sum += rho;
  return sum;
}

double RdpToDp(double rho, double alpha, double delta) {
  if (!(alpha > 1.0)) throw DomainError("RDP order alpha must exceed 1");
  CheckDelta(delta);
  return rho + std::log(1.0 / delta) / (alpha - 1.0);
}

double CalibrationAlpha(double epsilon, double delta) {
  CheckDelta(delta);
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  return 1.0 + 8.0 * std::log(1.0 / delta) / epsilon;
}

double ClosedFormSigmaSquared(double epsilon, double delta, int rounds) {
  CheckDelta(delta);
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (rounds < 1) throw DomainError("rounds must be >= 1");
  const double log_inv_delta = std::log(1.0 / delta);
  return rounds * (1.0 + 8.0 * log_inv_delta) / (7.0 * epsilon * epsilon);
}

double CalibrateSigma(double epsilon, double delta, int rounds) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw CalibrationError("delta must lie in (0, 1)");
  }
  if (rounds < 1) throw CalibrationError("rounds must be >= 1");
  const double log_inv_delta = std::log(1.0 / delta);
  const double bound = 8.0 * log_inv_delta;
  if (!(epsilon > 0.0 && epsilon < bound)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "epsilon must satisfy 0 < epsilon < 8*ln(1/delta) = " << bound
        << ", got " << epsilon;
    throw CalibrationError(msg.str());
  }
  // At alpha = 1 + 8 L / eps the conversion term is eps / 8, so the composed
  // RDP must stay below 7 eps / 8: sigma^2 >= T alpha / (7 eps)
  // = T (eps + 8 L) / (7 eps^2). For eps <= 1 the closed form is the larger.
  const double sigma_sq = rounds * (std::max(epsilon, 1.0) + bound) /
                          (7.0 * epsilon * epsilon);
  return std::sqrt(sigma_sq);
}

double AccountEpsilon(double sigma, double alpha, double delta, int rounds) {
  if (rounds < 1) throw DomainError("rounds must be >= 1");
  const double rho = RdpOfGaussian(sigma)(alpha);
  std::vector<double> per_round(static_cast<std::size_t>(rounds), rho);
  return RdpToDp(ComposeRdp(per_round), alpha, delta);
}

double BestEpsilon(double sigma, double delta, int rounds) {
  CheckDelta(delta);
  if (rounds < 1) throw DomainError("rounds must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double log_inv_delta = std::log(1.0 / delta);
  const double alpha =
      1.0 + std::sqrt(8.0 * sigma * sigma * log_inv_delta / rounds);
  return AccountEpsilon(sigma, alpha, delta, rounds);
}

PrivacyBudget CalibrateBudget(double epsilon, double delta, int rounds) {
  PrivacyBudget b;
  b.epsilon = epsilon;
  b.delta = delta;
  b.rounds = rounds;
  b.sigma = CalibrateSigma(epsilon, delta, rounds);
  b.alpha = CalibrationAlpha(epsilon, delta);
  b.rho_per_round = RdpOfGaussian(b.sigma)(b.alpha);
  return b;
}

double NoiseStddev(double sigma, double delta, NoiseConvention convention) {
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  if (!(delta >= 0.0)) throw DomainError("Delta must be >= 0");
  return convention == NoiseConvention::kAlgorithm1 ? sigma * delta
                                                    : 2.0 * sigma * delta;
}

const char* NoiseConventionName(NoiseConvention c) {
  return c == NoiseConvention::kAlgorithm1 ? "algorithm1" : "analysis";
}

NoiseConvention ParseNoiseConvention(std::string_view name) {
  if (name == "algorithm1") return NoiseConvention::kAlgorithm1;
  if (name == "analysis") return NoiseConvention::kAnalysis;
  throw ConfigError("unknown noise convention '" + std::string(name) + "'");
}

}  // namespace pdfl
