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

#ifndef THURSTONE_SAMPLER_H_
#define THURSTONE_SAMPLER_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "thurstone/comparisons.h"
#include "thurstone/noise.h"

namespace thurstone {

// Seedable generator with a fixed, documented algorithm so that other
// implementations can reproduce the same statistics:
//   engine    std::mt19937_64 seeded with the 64-bit seed
//   Uniform   ((x >> 11) + 0.5) * 2^-53, always inside (0, 1)
//   Index(n)  64-bit rejection: redraw while x >= 2^64 - (2^64 mod n),
//             then x mod n
// Repetition r of an experiment with seed s uses Rng(s + r).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double Uniform();
  int Index(int n);
  uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct ParamVector {
  std::vector<double> theta;
  double b = 1.0;

  int n() const { return static_cast<int>(theta.size()); }
};

// Throws ValidationError unless b > 0, sum(theta) = 0 within 1e-9 and
// |theta_i| <= b + 1e-12.
void ValidateParams(const ParamVector& params);

enum class DesignKind { kUniform, kRoundRobin, kExplicit };

class ComparisonDesign {
 public:
  // Independent uniformly random k-subsets.
  static ComparisonDesign Uniform(int n, int k);
  // `rounds` complete round robins of pair comparisons, scheduled by the
  // circle method; even-numbered rounds reverse the listed order.
  static ComparisonDesign RoundRobin(int n, int rounds);
  static ComparisonDesign Explicit(int n, std::vector<std::vector<int>> sets);

  DesignKind kind() const { return kind_; }
  int n() const { return n_; }
  int k() const { return k_; }
  int rounds() const { return rounds_; }
  // Fixed schedule of the round-robin and explicit designs. Sampling
  // cycles through it when m exceeds its length.
  const std::vector<std::vector<int>>& schedule() const { return schedule_; }
  // Natural number of observations: the schedule length, or 0 for the
  // uniform design.
  int natural_m() const { return static_cast<int>(schedule_.size()); }

  std::vector<int> Draw(int t, Rng& rng) const;

 private:
  ComparisonDesign() = default;

  DesignKind kind_ = DesignKind::kUniform;
  int n_ = 0;
  int k_ = 2;
  int rounds_ = 0;
  std::vector<std::vector<int>> schedule_;
};

// Uniform random k-subset of {0..n-1} via a partial Fisher-Yates shuffle.
std::vector<int> SampleSubset(int n, int k, Rng& rng);

double SampleNoise(const NoiseModel& model, Rng& rng);

// argmax over `set` of theta_i + eps_i. Exact floating-point ties go to the
// lowest item index.
int SampleChoice(const NoiseModel& model, const ParamVector& params,
                 std::span<const int> set, Rng& rng);

Dataset SampleDataset(const NoiseModel& model, const ParamVector& params,
                      const ComparisonDesign& design, int m, uint64_t seed);

struct TwoClassParams {
  ParamVector params;
  // Item permutation[i] received the value of slot i, where slots
  // 0..n/2-1 hold +b and the rest -b.
  std::vector<int> permutation;

  // True for items with theta = +b.
  std::vector<bool> TopClass() const;
};

TwoClassParams SampleTwoClassTheta(int n, double b, Rng& rng);

}  // namespace thurstone

#endif  // THURSTONE_SAMPLER_H_
