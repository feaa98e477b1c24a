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

#ifndef THURSTONE_HALTON_H_
#define THURSTONE_HALTON_H_

#include <vector>

namespace thurstone {

// First `count` primes.
inline std::vector<int> FirstPrimes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

// Radical inverse of `index` in `base`: the Halton coordinate in [0, 1).
inline double RadicalInverse(long long index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

// Point `index` (starting at 1) of the Halton sequence in [lo, hi]^dim.
inline std::vector<double> HaltonPoint(long long index,
                                       const std::vector<int>& primes,
                                       double lo, double hi) {
  std::vector<double> x(primes.size());
  for (size_t d = 0; d < primes.size(); ++d) {
    x[d] = lo + (hi - lo) * RadicalInverse(index, primes[d]);
  }
  return x;
}

}  // namespace thurstone

#endif  // THURSTONE_HALTON_H_
