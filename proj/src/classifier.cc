// Copyright 2026 The Thurstone Authors.
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

#include "thurstone/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thurstone/errors.h"
#include "thurstone/halton.h"

namespace thurstone {

ClassificationResult PointScoreClassify(const Dataset& ds) {
  const int n = ds.n_items();
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("point-score classification needs an even n >= 2");
  }
  ClassificationResult out;
  out.scores.assign(n, 0);
  for (const auto& obs : ds.observations()) ++out.scores[obs.winner];
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return out.scores[a] > out.scores[b];
  });
  out.high_class.assign(order.begin(), order.begin() + n / 2);
  out.low_class.assign(order.begin() + n / 2, order.end());
  std::sort(out.high_class.begin(), out.high_class.end());
  std::sort(out.low_class.begin(), out.low_class.end());
  return out;
}

SampleComplexity ClassifySampleComplexity(const NoiseModel& model, int k,
                                          double b, int n, double delta,
                                          int hessian_samples) {
  if (k < 2) throw ValidationError("k must be at least 2");
  if (n < k) throw ValidationError("n must be at least k");
  if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("b must be > 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ValidationError("delta must lie in (0, 1]");
  }
  if (hessian_samples < 0) throw ValidationError("negative sample count");

  SampleComplexity out;
  out.dpk0 = Dpk0(model, k);
  out.gamma = GammaFk(model, k);
  const double core = (1.0 / (b * b)) * (1.0 - 1.0 / k) * out.gamma * n *
                      (std::log(n) + std::log(1.0 / delta));
  out.sufficient_m = 64.0 * core;
  out.necessary_m = core / 62.0;

  // Origin first, then Halton points over the cube.
  const auto primes = FirstPrimes(k - 1);
  std::vector<double> x(k - 1, 0.0);
  for (int s = 0; s < hessian_samples; ++s) {
    if (s > 0) x = HaltonPoint(s, primes, -2.0 * b, 2.0 * b);
    const Eigen::MatrixXd h = ChoiceProbHessian(model, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
    out.hessian_max =
        std::max(out.hessian_max, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  out.hessian_samples = hessian_samples;

  const double kk = static_cast<double>(k) * k;
  out.conditions = {
      {"b <= 4/(k^2 dp_k(0))", b <= 4.0 / (kk * out.dpk0), b,
       4.0 / (kk * out.dpk0)},
      {"b max||Hess p_k|| <= dp_k(0) (sampled)",
       b * out.hessian_max <= out.dpk0, b * out.hessian_max, out.dpk0},
      {"necessary: b <= 1/(6 k^2 dp_k(0))", b <= 1.0 / (6.0 * kk * out.dpk0),
       b, 1.0 / (6.0 * kk * out.dpk0)},
      {"necessary: n even and >= 16", n >= 16 && n % 2 == 0,
       static_cast<double>(n), 16.0},
      {"necessary: delta <= 1/4", delta <= 0.25, delta, 0.25},
  };
  return out;
}

}  // namespace thurstone
