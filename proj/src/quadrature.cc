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

#include "thurstone/quadrature.h"

namespace thurstone {

double Integrate(const std::function<double(double)>& f,
                 std::span<const double> knots,
                 const QuadratureOptions& options) {
  auto vector_form = [&f](double z, double* out) { out[0] = f(z); };
  return IntegrateVector(vector_form, 1, knots, options).value[0];
}

}  // namespace thurstone
