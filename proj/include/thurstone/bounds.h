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

#ifndef THURSTONE_BOUNDS_H_
#define THURSTONE_BOUNDS_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "thurstone/comparisons.h"
#include "thurstone/noise.h"
#include "thurstone/report.h"

namespace thurstone {

// Constants of the regularity conditions on the choice probabilities over
// the box [-b, b]^n. Which of them are meaningful depends on the producer.
struct ModelConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double A_tilde = 0.0;
  double C_tilde = 0.0;
  double D = 0.0;      // composite used by the matching bound
  double sigma = 0.0;  // upper bound on 1/gamma_{F,k} over the cardinalities
  double b = 0.0;
  bool certified = true;  // false when some constant was estimated by sampling
  std::string note;
};

// Bradley-Terry pair constants: log-concavity A, log-slope B, D = B/A.
ModelConstants BtPairConstants(double beta, double b);

// Luce constants for sets of any cardinality: A = e^{-4b/beta}, B = 4,
// C = e^{-2b/beta}, A~ = e^{4b/beta}, C~ = e^{2b/beta}, sigma = 1/beta^2,
// D = B/(A C).
ModelConstants LuceConstants(double beta, double b);

// Pair constants for any model. Closed form for the double-exponential
// model; otherwise A = min -(log p_2)'' and B = max (log p_2)' over a grid
// of `samples` points of [-2b, 2b] (not certified).
ModelConstants PairConstants(const NoiseModel& model, double b,
                             int samples = 2001);

// Constants for cardinalities `ks`. Luce models use the closed forms. For
// the others C = min_k k p_k(-2b 1) and C~ = max_k k p_k(2b 1) are exact by
// monotonicity, while A, A~ and B come from the extreme ratios over
// `samples` Halton points of [-b, b]^k plus the box corners (k <= 12), so
// they are sampled, not certified. D = B/(A C), sigma = max_k 1/gamma_{F,k}.
ModelConstants SampledConstants(const NoiseModel& model,
                                const std::set<int>& ks, double b,
                                int samples = 4096);

enum class Theorem { kPair, kLuceFull, kGeneral, kRankAll, kRankOne };

// Accepts pair, luce-full, general, rank-all, rank-one.
Theorem ParseTheorem(std::string_view name);
std::string TheoremName(Theorem theorem);

// Weight function whose weighted-adjacency matrix each theorem's lambda_2
// refers to: const 1/4 (pair), w* (general), 1 otherwise.
WeightFunction TheoremWeight(Theorem theorem, const NoiseModel& model);

struct BoundInputs {
  int n = 0;
  double m = 0.0;
  int k = 2;           // set cardinality (luce-full, rank-all, rank-one)
  std::set<int> ks;    // observed cardinalities (general); {k} if empty
  double b = 1.0;
  NoiseModel model = NoiseModel::DoubleExponential(1.0);
  double fiedler = 0.0;  // lambda_2 of the theorem's matrix
};

struct BoundReport {
  std::string theorem;
  double value = 0.0;
  double D = 0.0;
  ModelConstants constants;
  std::vector<ConditionFlag> preconditions;
  BoundInputs inputs;
  bool preconditions_met() const;
};

// Mean squared error upper bounds, natural logs throughout:
//   pair       D^2 n (ln n + 2) / lambda^2 / m,              D = B/A
//   luce-full  D^2 n (ln n + 2) / lambda^2 / m,              D = 4k^2 e^{4b/beta}
//   general    32 D^2 sigma n (ln n + 2) / lambda^2 / m,     D = B/(A C)
//   rank-all   D^2 n (ln n + 2) / lambda^2 / m,  D = 16 sqrt2 sqrt(k(k-1)^3) e^{2b/beta}
//   rank-one   D^2 n (ln n + 2) / lambda^2 / m,  D = 4k(k-1) e^{2b/beta}
// The double-exponential scale beta enters through b/beta; the Luce-only
// statements flag other models. Throws ValidationError if fiedler <= 0.
BoundReport MseUpperBound(Theorem theorem, const BoundInputs& inputs);
// Same with caller-supplied constants (pair and general only use them).
BoundReport MseUpperBound(Theorem theorem, const BoundInputs& inputs,
                          const ModelConstants& constants);

// (1/(A~ C~)) (sum_{i >= 2} 1/lambda_i(L)) / m for the expected
// weighted-adjacency matrix under w*. Throws if lambda_2 is not positive.
double CramerRaoLowerBound(const WeightedAdjacency& expected_wstar, double m,
                           const ModelConstants& constants);
// Fixed cardinality k: (1/(A~ C~)) (1 - 1/k) gamma (sum 1/lambda_i(L_M)) / m
// with M the expected matrix under w = 1/k^2. Equals the general bound.
double CramerRaoFixedK(const WeightedAdjacency& expected_inv_k2, int k,
                       double gamma, double m,
                       const ModelConstants& constants);
// Uniformly random sets: (1/(A~ C~)) (1 - 1/n)^2 gamma n / m.
double CramerRaoUniform(int n, double gamma, double m,
                        const ModelConstants& constants);

}  // namespace thurstone

#endif  // THURSTONE_BOUNDS_H_
