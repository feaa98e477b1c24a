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

#ifndef THURSTONE_QUADRATURE_H_
#define THURSTONE_QUADRATURE_H_

// Adaptive 21-point Gauss-Kronrod quadrature for vector-valued integrands on
// a finite interval split at caller-supplied knots (kinks or jumps of the
// integrand). All components share the same nodes, so a probability and its
// gradient come out of one pass.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "thurstone/errors.h"

namespace thurstone {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_segments = 4000;
};

struct QuadratureResult {
  std::vector<double> value;
  double error = 0.0;  // max over components of the summed error estimates
  int segments = 0;
};

namespace internal {

// QUADPACK qk21 abscissae (descending, last is the centre) and weights.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208814621221, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// 10-point Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  std::vector<double> value;
  std::vector<double> error;
  double worst;  // largest component error, used for bisection order
};

template <typename Integrand>
Segment Rule21(Integrand& f, double a, double b, int dim,
               std::vector<double>& scratch) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Segment seg{a, b, std::vector<double>(dim, 0.0),
              std::vector<double>(dim, 0.0), 0.0};
  std::vector<double> gauss(dim, 0.0);
  scratch.resize(dim);
  auto accumulate = [&](double z, double wk, double wg) {
    f(z, scratch.data());
    for (int c = 0; c < dim; ++c) {
      seg.value[c] += wk * scratch[c];
      gauss[c] += wg * scratch[c];
    }
  };
  accumulate(centre, kKronrodWeights[10], 0.0);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double wg = (j % 2 == 1) ? kGaussWeights[j / 2] : 0.0;
    accumulate(centre - dx, kKronrodWeights[j], wg);
    accumulate(centre + dx, kKronrodWeights[j], wg);
  }
  for (int c = 0; c < dim; ++c) {
    seg.value[c] *= half;
    gauss[c] *= half;
    seg.error[c] = std::abs(seg.value[c] - gauss[c]);
    seg.worst = std::max(seg.worst, seg.error[c]);
  }
  return seg;
}

}  // namespace internal

// Integrates f over [knots.front(), knots.back()]. `f(z, out)` must write
// `dim` values to `out`. Knots must be sorted; they seed the initial
// partition. Throws NumericalError when the tolerance is not reached within
// options.max_segments.
template <typename Integrand>
QuadratureResult IntegrateVector(Integrand&& f, int dim,
                                 std::span<const double> knots,
                                 const QuadratureOptions& options = {}) {
  if (knots.size() < 2) throw ValidationError("quadrature needs two knots");
  std::vector<double> scratch;
  std::vector<internal::Segment> segments;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] > knots[i]) {
      segments.push_back(internal::Rule21(f, knots[i], knots[i + 1], dim,
                                          scratch));
    }
  }
  QuadratureResult result;
  result.value.assign(dim, 0.0);
  if (segments.empty()) return result;

  std::vector<double> total(dim), total_err(dim);
  auto recompute = [&] {
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(total_err.begin(), total_err.end(), 0.0);
    for (const auto& s : segments) {
      for (int c = 0; c < dim; ++c) {
        total[c] += s.value[c];
        total_err[c] += s.error[c];
      }
    }
  };
  auto converged = [&] {
    for (int c = 0; c < dim; ++c) {
      const double tol =
          std::max(options.abs_tol, options.rel_tol * std::abs(total[c]));
      if (total_err[c] > tol) return false;
    }
    return true;
  };

  recompute();
  while (!converged()) {
    auto worst = std::max_element(
        segments.begin(), segments.end(),
        [](const auto& l, const auto& r) { return l.worst < r.worst; });
    const double mid = 0.5 * (worst->a + worst->b);
    if (worst->worst == 0.0 || !(mid > worst->a && mid < worst->b)) {
      break;  // round-off floor
    }
    if (static_cast<int>(segments.size()) >= options.max_segments) {
      double achieved = 0.0;
      for (double e : total_err) achieved = std::max(achieved, e);
      throw NumericalError(
          "quadrature did not converge; achieved error " +
              std::to_string(achieved),
          achieved);
    }
    const double a = worst->a, b = worst->b;
    *worst = internal::Rule21(f, a, mid, dim, scratch);
    segments.push_back(internal::Rule21(f, mid, b, dim, scratch));
    recompute();
  }
  result.value = total;
  for (double e : total_err) result.error = std::max(result.error, e);
  result.segments = static_cast<int>(segments.size());
  return result;
}

// Scalar convenience wrapper.
double Integrate(const std::function<double(double)>& f,
                 std::span<const double> knots,
                 const QuadratureOptions& options = {});

}  // namespace thurstone

#endif  // THURSTONE_QUADRATURE_H_
