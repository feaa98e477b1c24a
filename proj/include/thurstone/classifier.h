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

#ifndef THURSTONE_CLASSIFIER_H_
#define THURSTONE_CLASSIFIER_H_

#include <string>
#include <vector>

#include "thurstone/comparisons.h"
#include "thurstone/noise.h"
#include "thurstone/report.h"

namespace thurstone {

struct ClassificationResult {
  std::vector<int> high_class;  // ascending item indices
  std::vector<int> low_class;   // ascending item indices
  std::vector<int> scores;      // wins per item
};

// Point-score ranking: items sorted by decreasing wins, ties by ascending
// index; the first n/2 form the high class. Requires an even n >= 2.
ClassificationResult PointScoreClassify(const Dataset& ds);

struct SampleComplexity {
  double sufficient_m = 0.0;
  double necessary_m = 0.0;
  double gamma = 0.0;  // gamma_{F,k}
  double dpk0 = 0.0;
  // max ||Hessian of p_k||_2 over [-2b, 2b]^{k-1}, estimated from Halton
  // points; sampled, not certified.
  double hessian_max = 0.0;
  int hessian_samples = 0;
  std::vector<ConditionFlag> conditions;
};

inline constexpr int kDefaultHessianSamples = 10000;

// Thresholds on m for exact two-class recovery with probability 1 - delta:
//   sufficient 64 (1/b^2)(1 - 1/k) gamma n (ln n + ln(1/delta))
//   necessary  the same with 1/62 in place of 64.
// Side conditions of both statements are reported as flags.
SampleComplexity ClassifySampleComplexity(
    const NoiseModel& model, int k, double b, int n, double delta,
    int hessian_samples = kDefaultHessianSamples);

}  // namespace thurstone

#endif  // THURSTONE_CLASSIFIER_H_
