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

#ifndef THURSTONE_EXPERIMENT_H_
#define THURSTONE_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thurstone/comparisons.h"
#include "thurstone/estimators.h"
#include "thurstone/noise.h"

namespace thurstone {

enum class ThetaMode { kZero, kTwoClass, kGiven };

struct ExperimentSpec {
  int n = 10;
  int m = 100;
  std::vector<int> k_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  int repetitions = 100;
  NoiseModel model = NoiseModel::UnitVariance(NoiseKind::kDoubleExponential);
  ThetaMode theta_mode = ThetaMode::kZero;
  double theta_b = 1.0;             // two-class magnitude
  std::vector<double> theta_given;  // kGiven
  EstimatorMethod method = EstimatorMethod::kMle;
  double b = 5.0;  // estimation box
  uint64_t seed = 0;
  int threads = 1;
  bool attach_bounds = true;
  int bound_samples = 4096;  // Halton points for sampled constants
};

// Throws ValidationError on an inconsistent spec.
void ValidateSpec(const ExperimentSpec& spec);

struct ExperimentRow {
  int k = 0;
  double mse_mean = 0.0;
  double mse_stderr = 0.0;
  double ci95_half_width = 0.0;  // 1.96 * stderr
  std::string bound_theorem;     // luce-full or general
  double bound_value = 0.0;      // may be +inf
  bool bound_preconditions_met = false;
  int non_converged = 0;
  std::vector<double> mses;  // per repetition
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ExperimentRow> rows;
};

// Seeds of repetition r: the dataset and the rank-one opponents use
// seed + r; a two-class theta* is drawn from Rng((seed + r) ^ kThetaSalt).
inline constexpr uint64_t kThetaSalt = 0x9E3779B97F4A7C15ull;

// For every k: `repetitions` independent (theta*, dataset, estimate, MSE)
// runs on uniformly random k-sets, aggregated into mean, standard error and
// a 95% interval, plus the luce-full (Luce) or general (other models) upper
// bound evaluated at the expected lambda_2 of the design.
ExperimentResult RunMseVsK(const ExperimentSpec& spec);

// Pairwise (cascade) summation; order-fixed so results are reproducible.
double PairwiseSum(std::span<const double> values);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(count)
};
MeanStderr Aggregate(std::span<const double> values);

void WriteExperimentTsv(const ExperimentResult& result, std::ostream& out);
// Spec echo plus per-repetition MSEs. Infinite bounds are written as null.
void WriteExperimentJson(const ExperimentResult& result, std::ostream& out);

// Keeps the `top_n` items that appear in the most observations (ties by
// first appearance), restricts every set to them, and drops observations
// whose winner was removed or whose set shrinks below two items. Kept items
// retain their relative order.
Dataset TopNRestriction(const Dataset& ds, int top_n);

}  // namespace thurstone

#endif  // THURSTONE_EXPERIMENT_H_
