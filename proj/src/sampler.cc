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

#include "thurstone/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thurstone/errors.h"

namespace thurstone {

double Rng::Uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

int Rng::Index(int n) {
  if (n <= 0) throw ValidationError("index range must be positive");
  const uint64_t range = static_cast<uint64_t>(n);
  // 2^64 mod n, computed without overflow.
  const uint64_t excess = (std::numeric_limits<uint64_t>::max() % range + 1) %
                          range;
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - excess;
  uint64_t x;
  do {
    x = engine_();
  } while (excess != 0 && x > limit);
  return static_cast<int>(x % range);
}

void ValidateParams(const ParamVector& params) {
  if (!(params.b > 0.0) || !std::isfinite(params.b)) {
    throw ValidationError("box radius b must be positive and finite");
  }
  double sum = 0.0;
  for (double t : params.theta) {
    if (!std::isfinite(t)) throw ValidationError("theta must be finite");
    if (std::abs(t) > params.b + 1e-12) {
      throw ValidationError("theta outside the box [-b, b]");
    }
    sum += t;
  }
  if (std::abs(sum) > 1e-9) throw ValidationError("theta must sum to zero");
}

ComparisonDesign ComparisonDesign::Uniform(int n, int k) {
  if (k < 2) throw ValidationError("cardinality k must be at least 2");
  if (k > n) {
    throw ValidationError("cardinality k = " + std::to_string(k) +
                          " exceeds n = " + std::to_string(n));
  }
  ComparisonDesign d;
  d.kind_ = DesignKind::kUniform;
  d.n_ = n;
  d.k_ = k;
  return d;
}

ComparisonDesign ComparisonDesign::RoundRobin(int n, int rounds) {
  if (n < 2) throw ValidationError("round robin needs at least two items");
  if (rounds < 1) throw ValidationError("round robin needs rounds >= 1");
  ComparisonDesign d;
  d.kind_ = DesignKind::kRoundRobin;
  d.n_ = n;
  d.rounds_ = rounds;
  // Circle method: item 0 stays put, the others rotate; an odd n gets a
  // phantom opponent meaning a bye.
  const int slots = n + (n % 2);
  std::vector<int> circle(slots);
  std::iota(circle.begin(), circle.end(), 0);
  std::vector<std::vector<int>> leg;
  for (int day = 0; day < slots - 1; ++day) {
    for (int i = 0; i < slots / 2; ++i) {
      const int a = circle[i], b = circle[slots - 1 - i];
      if (a < n && b < n) leg.push_back({a, b});
    }
    std::rotate(circle.begin() + 1, circle.end() - 1, circle.end());
  }
  for (int r = 0; r < rounds; ++r) {
    for (auto pair : leg) {
      if (r % 2 == 1) std::swap(pair[0], pair[1]);
      d.schedule_.push_back(pair);
    }
  }
  return d;
}

ComparisonDesign ComparisonDesign::Explicit(
    int n, std::vector<std::vector<int>> sets) {
  if (sets.empty()) throw ValidationError("explicit design has no sets");
  for (const auto& s : sets) {
    if (s.empty()) throw ValidationError("empty comparison set");
    ValidateObservation({s, s.front()}, n);
  }
  ComparisonDesign d;
  d.kind_ = DesignKind::kExplicit;
  d.n_ = n;
  d.schedule_ = std::move(sets);
  return d;
}

std::vector<int> ComparisonDesign::Draw(int t, Rng& rng) const {
  if (kind_ == DesignKind::kUniform) return SampleSubset(n_, k_, rng);
  return schedule_[t % schedule_.size()];
}

std::vector<int> SampleSubset(int n, int k, Rng& rng) {
  if (k < 1 || k > n) throw ValidationError("subset size out of range");
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::swap(items[i], items[i + rng.Index(n - i)]);
  }
  items.resize(k);
  return items;
}

double SampleNoise(const NoiseModel& model, Rng& rng) {
  return model.Quantile(rng.Uniform());
}

int SampleChoice(const NoiseModel& model, const ParamVector& params,
                 std::span<const int> set, Rng& rng) {
  if (set.size() < 2) throw ValidationError("choice set needs two items");
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int item : set) {
    const double value = params.theta.at(item) + SampleNoise(model, rng);
    if (best < 0 || value > best_value ||
        (value == best_value && item < best)) {
      best = item;
      best_value = value;
    }
  }
  return best;
}

Dataset SampleDataset(const NoiseModel& model, const ParamVector& params,
                      const ComparisonDesign& design, int m, uint64_t seed) {
  if (m < 1) throw ValidationError("m must be at least 1");
  ValidateParams(params);
  if (params.n() != design.n()) {
    throw ValidationError("design and theta disagree on n");
  }
  Rng rng(seed);
  std::vector<Observation> observations;
  observations.reserve(m);
  for (int t = 0; t < m; ++t) {
    Observation obs;
    obs.set = design.Draw(t, rng);
    obs.winner = SampleChoice(model, params, obs.set, rng);
    observations.push_back(std::move(obs));
  }
  return Dataset::Unlabeled(design.n(), std::move(observations));
}

std::vector<bool> TwoClassParams::TopClass() const {
  std::vector<bool> top(params.n());
  for (int i = 0; i < params.n(); ++i) top[i] = params.theta[i] > 0.0;
  return top;
}

TwoClassParams SampleTwoClassTheta(int n, double b, Rng& rng) {
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("two-class theta needs a positive even n");
  }
  if (!(b > 0.0)) throw ValidationError("b must be positive");
  TwoClassParams out;
  out.permutation = SampleSubset(n, n, rng);
  out.params.b = b;
  out.params.theta.assign(n, 0.0);
  for (int slot = 0; slot < n; ++slot) {
    out.params.theta[out.permutation[slot]] = slot < n / 2 ? b : -b;
  }
  return out;
}

}  // namespace thurstone
