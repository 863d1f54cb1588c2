#ifndef PDFL_TESTS_ORACLES_H_
#define PDFL_TESTS_ORACLES_H_

// Independent reference computations shared by the unit and acceptance
// suites. Nothing here calls the code under test except where it is the
// quantity being checked.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pdfl/model.h"
#include "test_util.h"

namespace pdfl::testing {

// Mean cross-entropy of a logistic model, written out directly.
inline double LogisticLossOracle(const ModelSpec& spec, const ParamVector& w,
                                 const Dataset& batch) {
  const std::size_t D = spec.input_dim;
  const int C = spec.num_classes;
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::vector<double> z(C);
    for (int c = 0; c < C; ++c) {
      double s = w[C * D + c];
      for (std::size_t j = 0; j < D; ++j) s += w[c * D + j] * batch.Row(i)[j];
      z[c] = s;
    }
    const double m = *std::max_element(z.begin(), z.end());
    double se = 0.0;
    for (double v : z) se += std::exp(v - m);
    total += m + std::log(se) - z[batch.labels[i]];
  }
  return total / static_cast<double>(batch.size());
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;
};

// Central differences on every coordinate. The relative error is taken
// against max(|analytic|, |numeric|, floor) so coordinates with a vanishing
// gradient do not blow up the ratio.
inline GradCheckResult FiniteDifferenceCheck(const ModelSpec& spec,
                                             const ParamVector& w,
                                             const Dataset& batch,
                                             double h = 1e-5,
                                             double floor = 1e-3) {
  const auto analytic = LossAndGrad(spec, w, batch).grad;
  GradCheckResult out;
  ParamVector probe = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    probe[i] = w[i] + h;
    const double up = LossAndGrad(spec, probe, batch).loss;
    probe[i] = w[i] - h;
    const double down = LossAndGrad(spec, probe, batch).loss;
    probe[i] = w[i];
    const double numeric = (up - down) / (2.0 * h);
    const double scale =
        std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    const double rel = std::abs(analytic[i] - numeric) / scale;
    if (rel > out.max_rel_error) {
      out.max_rel_error = rel;
      out.worst = "coord " + std::to_string(i) + ": analytic " +
                  std::to_string(analytic[i]) + " numeric " +
                  std::to_string(numeric);
    }
  }
  return out;
}

// 100 random (w, batch) draws over both model kinds.
inline GradCheckResult GradientSuite(std::uint64_t seed, int draws = 100) {
  std::mt19937_64 rng(seed);
  GradCheckResult worst;
  for (int t = 0; t < draws; ++t) {
    ModelSpec spec;
    spec.kind = t % 2 == 0 ? ModelKind::kLogisticRegression
                           : ModelKind::kMlpOneHidden;
    spec.input_dim = 2 + rng() % 5;
    spec.hidden_dim = spec.kind == ModelKind::kMlpOneHidden ? 2 + rng() % 4 : 0;
    spec.num_classes = 2 + static_cast<int>(rng() % 3);
    const ParamVector w = RandomVector(spec.ParamCount(), rng, 0.5);
    const Dataset batch =
        RandomBatch(1 + rng() % 8, spec.input_dim, spec.num_classes, rng);
    const auto r = FiniteDifferenceCheck(spec, w, batch);
    if (r.max_rel_error > worst.max_rel_error) worst = r;
  }
  return worst;
}

inline double CosineOracle(const ParamVector& a, const ParamVector& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return 1.0 - ab / std::sqrt(aa * bb);
}

inline double L2Oracle(const ParamVector& a, const ParamVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Symmetry, identity, range and agreement with the oracles for both metrics;
// triangle inequality for l2. Returns an empty string on success.
inline std::string MetricAxiomSuite(std::uint64_t seed, int triples = 1000) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < triples; ++t) {
    const std::size_t d = 1 + rng() % 12;
    const auto a = RandomVector(d, rng);
    const auto b = RandomVector(d, rng);
    const auto c = RandomVector(d, rng);
    const std::string at = "triple " + std::to_string(t) + ": ";
    for (Metric m : {Metric::kCosine, Metric::kL2}) {
      const double ab = ModelDistance(a, b, m);
      if (ab != ModelDistance(b, a, m)) return at + "asymmetric";
      if (ModelDistance(a, a, m) != 0.0) return at + "d(a,a) != 0";
      if (ab < 0.0) return at + "negative distance";
      if (m == Metric::kCosine && ab > 2.0) return at + "cosine above 2";
      const double ref = m == Metric::kCosine
                             ? std::clamp(CosineOracle(a, b), 0.0, 2.0)
                             : L2Oracle(a, b);
      if (std::abs(ab - ref) > 1e-12 * std::max(1.0, ref)) {
        return at + "disagrees with oracle";
      }
    }
    const double ab = ModelDistance(a, b, Metric::kL2);
    const double bc = ModelDistance(b, c, Metric::kL2);
    const double ac = ModelDistance(a, c, Metric::kL2);
    if (ac > ab + bc + 1e-12) return at + "l2 triangle inequality";
  }
  return "";
}

}  // namespace pdfl::testing

#endif  // PDFL_TESTS_ORACLES_H_
