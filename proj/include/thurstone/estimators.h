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

#ifndef THURSTONE_ESTIMATORS_H_
#define THURSTONE_ESTIMATORS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "thurstone/comparisons.h"
#include "thurstone/noise.h"
#include "thurstone/sampler.h"

namespace thurstone {

enum class EstimatorMethod { kMle, kRankAll, kRankOne };

// Accepts mle, rank-all / rank_all, rank-one / rank_one.
EstimatorMethod ParseEstimatorMethod(std::string_view name);
std::string EstimatorMethodName(EstimatorMethod method);

struct EstimatorConfig {
  EstimatorMethod method = EstimatorMethod::kMle;
  NoiseModel model = NoiseModel::DoubleExponential(1.0);
  double b = 5.0;
  double tol_grad = 1e-8;
  int max_iter = 10000;
  uint64_t seed = 0;  // rank-one opponent selection only
  // Starting point, projected onto the feasible set; empty means zero.
  std::vector<double> initial;
};

struct EstimateReport {
  ParamVector theta_hat;
  double loglik = 0.0;     // objective at theta_hat (pseudo-likelihood for
                           // the rank-breaking methods)
  double grad_norm = 0.0;  // projected onto the feasible directions
  int iterations = 0;
  bool converged = false;
  std::vector<int> active_box;  // items with |theta_i| = b
  int clamped = 0;  // observations whose probability hit the floor
};

// Probabilities below this are raised to it before taking logs.
inline constexpr double kProbabilityFloor = 1e-300;

// Log-likelihood sum_t log p_{y_t, S_t}(theta). `clamped`, if given,
// receives the number of observations that hit the probability floor.
double Loglik(const Dataset& ds, const NoiseModel& model,
              const ParamVector& theta, int* clamped = nullptr);

// Gradient of Loglik in the ambient coordinates; it sums to zero.
std::vector<double> LoglikGrad(const Dataset& ds, const NoiseModel& model,
                               const ParamVector& theta);

// Hessian of Loglik for the double-exponential model. Throws
// UnsupportedError for other models.
Eigen::MatrixXd LoglikHessianLuce(const Dataset& ds, const NoiseModel& model,
                                  const ParamVector& theta);

// Rank breaking. kRankAll turns each observation into the |S| - 1 pairs
// won by its winner; kRankOne keeps one pair against an opponent drawn
// uniformly from the losers with Rng(seed), in observation order. kMle
// returns the dataset unchanged.
Dataset BreakRanks(const Dataset& ds, EstimatorMethod method, uint64_t seed);

// Maximizes the (pseudo) log-likelihood over
// {theta in [-b, b]^n : sum theta = 0}. Throws DisconnectedError when the
// comparison graph the objective is built from is not connected.
EstimateReport Estimate(const Dataset& ds, const EstimatorConfig& config);

// Euclidean projection onto {theta in [-b, b]^n : sum theta = 0}.
std::vector<double> ProjectOntoFeasible(std::span<const double> v, double b);

// Norm of the projection of `grad` onto the tangent cone of the feasible
// set at `theta`.
double ProjectedGradientNorm(std::span<const double> theta,
                             std::span<const double> grad, double b);

// (1/n) ||a - b||^2.
double Mse(std::span<const double> a, std::span<const double> b);

}  // namespace thurstone

#endif  // THURSTONE_ESTIMATORS_H_
