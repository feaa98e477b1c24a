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

#include "thurstone/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thurstone/errors.h"
#include "thurstone/halton.h"

namespace thurstone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckBox(double b) {
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw ValidationError("b must be finite and nonnegative");
  }
}

// Choice probability of the first item of a set with strengths `theta`,
// its gradient in theta, and the Hessian of -log p in theta.
struct ThetaDerivatives {
  double prob = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd neg_log_hessian;
};

ThetaDerivatives Derivatives(const NoiseModel& model,
                             const std::vector<double>& theta) {
  const int k = static_cast<int>(theta.size());
  std::vector<double> x(k - 1);
  for (int v = 1; v < k; ++v) x[v - 1] = theta[0] - theta[v];
  // x = J theta with row v of J equal to e_0 - e_v.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(k - 1, k);
  for (int v = 1; v < k; ++v) {
    jac(v - 1, 0) = 1.0;
    jac(v - 1, v) = -1.0;
  }
  const auto pg = ChoiceProbAndGrad(model, x);
  const Eigen::Map<const Eigen::VectorXd> gx(pg.grad.data(), k - 1);
  ThetaDerivatives out;
  out.prob = pg.prob;
  out.grad = jac.transpose() * gx;
  if (pg.prob > 0.0) {
    const Eigen::MatrixXd hess =
        jac.transpose() * ChoiceProbHessian(model, x) * jac;
    out.neg_log_hessian = -hess / pg.prob +
                          out.grad * out.grad.transpose() / (pg.prob * pg.prob);
  }
  return out;
}

std::vector<ConditionFlag> LambdaCondition(const std::string& name,
                                           double fiedler, double limit) {
  return {{name, fiedler >= limit, fiedler, limit}};
}

ConditionFlag LuceFlag(const NoiseModel& model) {
  return {"Luce (double-exponential) model", model.is_luce(),
          model.is_luce() ? 1.0 : 0.0, 1.0};
}

}  // namespace

ModelConstants BtPairConstants(double beta, double b) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  CheckBox(b);
  const double e = std::exp(-2.0 * b / beta);
  ModelConstants c;
  c.A = e / (beta * beta * (1.0 + e) * (1.0 + e));
  c.B = 1.0 / (beta * (1.0 + e));
  c.D = c.B / c.A;
  c.C = std::exp(-2.0 * b / beta);
  c.A_tilde = std::exp(4.0 * b / beta);
  c.C_tilde = std::exp(2.0 * b / beta);
  c.sigma = 1.0 / (beta * beta);
  c.b = b;
  c.note = "Bradley-Terry closed form";
  return c;
}

ModelConstants LuceConstants(double beta, double b) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  CheckBox(b);
  ModelConstants c;
  c.A = std::exp(-4.0 * b / beta);
  c.B = 4.0;
  c.C = std::exp(-2.0 * b / beta);
  c.A_tilde = std::exp(4.0 * b / beta);
  c.C_tilde = std::exp(2.0 * b / beta);
  c.D = c.B / (c.A * c.C);
  c.sigma = 1.0 / (beta * beta);
  c.b = b;
  c.note = "Luce closed form";
  return c;
}

ModelConstants PairConstants(const NoiseModel& model, double b, int samples) {
  if (model.is_luce()) return BtPairConstants(model.scale(), b);
  CheckBox(b);
  if (samples < 2) throw ValidationError("need at least two grid points");
  ModelConstants c = SampledConstants(model, {2}, b);
  c.A = kInf;
  c.B = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double xs[1] = {-2.0 * b + 4.0 * b * s / (samples - 1)};
    const auto pg = ChoiceProbAndGrad(model, xs);
    if (pg.prob <= 0.0) {
      c.A = 0.0;
      c.B = kInf;
      continue;
    }
    const double slope = pg.grad[0] / pg.prob;
    const double curvature =
        ChoiceProbHessian(model, xs)(0, 0) / pg.prob - slope * slope;
    c.A = std::min(c.A, -curvature);
    c.B = std::max(c.B, slope);
  }
  c.A = std::max(c.A, 0.0);
  c.D = c.B / c.A;
  c.certified = false;
  c.note = "pair constants sampled on a grid, not certified";
  return c;
}

ModelConstants SampledConstants(const NoiseModel& model,
                                const std::set<int>& ks, double b,
                                int samples) {
  CheckBox(b);
  if (ks.empty()) throw ValidationError("no cardinalities given");
  if (*ks.begin() < 2) throw ValidationError("cardinalities must be >= 2");
  double sigma = 0.0;
  for (int k : ks) sigma = std::max(sigma, 1.0 / GammaFk(model, k));
  if (model.is_luce()) {
    ModelConstants c = LuceConstants(model.scale(), b);
    c.sigma = sigma;
    return c;
  }
  if (samples < 0) throw ValidationError("negative sample count");

  ModelConstants c;
  c.b = b;
  c.sigma = sigma;
  c.A = kInf;
  c.A_tilde = 0.0;
  c.B = 0.0;
  c.C = kInf;
  c.C_tilde = 0.0;
  for (int k : ks) {
    if (k > kMaxQuadratureK) {
      throw ValidationError("cardinality too large for sampled constants");
    }
    const std::vector<double> low(k - 1, -2.0 * b), high(k - 1, 2.0 * b);
    c.C = std::min(c.C, k * ChoiceProb(model, low));
    c.C_tilde = std::max(c.C_tilde, k * ChoiceProb(model, high));

    const auto at_zero = Derivatives(model, std::vector<double>(k, 0.0));
    const double grad0 = at_zero.grad.norm();
    auto visit = [&](const std::vector<double>& theta) {
      const auto d = Derivatives(model, theta);
      c.B = std::max(c.B, d.grad.norm() / grad0);
      if (d.prob <= 0.0) {
        c.A_tilde = kInf;
        return;
      }
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          const double ratio =
              d.neg_log_hessian(i, j) / at_zero.neg_log_hessian(i, j);
          c.A = std::min(c.A, ratio);
          c.A_tilde = std::max(c.A_tilde, ratio);
        }
      }
    };
    if (k <= 12) {
      std::vector<double> corner(k);
      for (int mask = 0; mask < (1 << k); ++mask) {
        for (int i = 0; i < k; ++i) corner[i] = (mask >> i) & 1 ? b : -b;
        visit(corner);
      }
    }
    const auto primes = FirstPrimes(k);
    for (int s = 1; s <= samples; ++s) visit(HaltonPoint(s, primes, -b, b));
  }
  c.A = std::max(c.A, 0.0);
  c.D = c.B / (c.A * c.C);
  c.certified = false;
  c.note = "C and C~ exact; A, A~ and B sampled, not certified";
  return c;
}

Theorem ParseTheorem(std::string_view name) {
  if (name == "pair" || name == "mle") return Theorem::kPair;
  if (name == "luce-full" || name == "luce_full" || name == "full") {
    return Theorem::kLuceFull;
  }
  if (name == "general" || name == "karyub") return Theorem::kGeneral;
  if (name == "rank-all" || name == "rank_all") return Theorem::kRankAll;
  if (name == "rank-one" || name == "rank_one") return Theorem::kRankOne;
  throw ValidationError("unknown theorem '" + std::string(name) +
                        "' (use pair, luce-full, general, rank-all, rank-one)");
}

std::string TheoremName(Theorem theorem) {
  switch (theorem) {
    case Theorem::kPair:
      return "pair";
    case Theorem::kLuceFull:
      return "luce-full";
    case Theorem::kGeneral:
      return "general";
    case Theorem::kRankAll:
      return "rank-all";
    case Theorem::kRankOne:
      return "rank-one";
  }
  return "?";
}

WeightFunction TheoremWeight(Theorem theorem, const NoiseModel& model) {
  switch (theorem) {
    case Theorem::kPair:
      return WeightFunction::Constant(0.25);
    case Theorem::kGeneral:
      return WeightFunction::Optimal(model);
    default:
      return WeightFunction::Unit();
  }
}

bool BoundReport::preconditions_met() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const ConditionFlag& f) { return f.satisfied; });
}

BoundReport MseUpperBound(Theorem theorem, const BoundInputs& in) {
  ModelConstants constants;
  switch (theorem) {
    case Theorem::kPair:
      constants = PairConstants(in.model, in.b);
      break;
    case Theorem::kGeneral:
      constants = SampledConstants(in.model, in.ks.empty() ? std::set<int>{in.k}
                                                           : in.ks,
                                   in.b);
      break;
    default:
      constants = LuceConstants(in.model.scale(), in.b);
  }
  return MseUpperBound(theorem, in, constants);
}

BoundReport MseUpperBound(Theorem theorem, const BoundInputs& in,
                          const ModelConstants& constants) {
  if (in.n < 2) throw ValidationError("n must be at least 2");
  if (!(in.m > 0.0)) throw ValidationError("m must be positive");
  if (in.k < 2) throw ValidationError("k must be at least 2");
  CheckBox(in.b);
  if (!(in.fiedler > 0.0)) {
    throw ValidationError(
        "the bound is undefined: lambda_2 must be positive (connected "
        "comparison graph)");
  }
  BoundReport r;
  r.theorem = TheoremName(theorem);
  r.inputs = in;
  r.constants = constants;
  const double n = in.n, k = in.k, m = in.m, lambda = in.fiedler;
  const double ln_n = std::log(n);
  const double core = n * (ln_n + 2.0) / (lambda * lambda) / m;
  const double bb = in.b / in.model.scale();  // b in units of beta

  switch (theorem) {
    case Theorem::kPair:
      r.D = constants.B / constants.A;
      r.value = r.D * r.D * core;
      r.preconditions = {
          {"pair comparisons (k = 2)", in.k == 2, k, 2.0},
          {"P1/P2 constants finite and positive",
           constants.A > 0.0 && std::isfinite(constants.B), constants.A, 0.0},
      };
      break;
    case Theorem::kLuceFull:
      r.D = 4.0 * k * k * std::exp(4.0 * bb);
      r.value = r.D * r.D * core;
      r.preconditions = {LuceFlag(in.model)};
      break;
    case Theorem::kGeneral: {
      r.D = constants.B / (constants.A * constants.C);
      r.value = 32.0 * r.D * r.D * constants.sigma * core;
      r.preconditions = LambdaCondition(
          "lambda_2 >= 32 (sigma/C) n ln n / m", lambda,
          32.0 * (constants.sigma / constants.C) * n * ln_n / m);
      r.preconditions.push_back({"A1-A3 constants certified",
                                 constants.certified,
                                 constants.certified ? 1.0 : 0.0, 1.0});
      break;
    }
    case Theorem::kRankAll:
      r.D = 16.0 * std::sqrt(2.0) * std::sqrt(k * std::pow(k - 1.0, 3)) *
            std::exp(2.0 * bb);
      r.value = r.D * r.D * core;
      r.preconditions = LambdaCondition(
          "lambda_2 >= 128 (k-1)^2 e^{2b} n ln n / m", lambda,
          128.0 * (k - 1) * (k - 1) * std::exp(2.0 * bb) * n * ln_n / m);
      r.preconditions.push_back(LuceFlag(in.model));
      break;
    case Theorem::kRankOne:
      r.D = 4.0 * k * (k - 1) * std::exp(2.0 * bb);
      r.value = r.D * r.D * core;
      r.preconditions = LambdaCondition(
          "lambda_2 >= 8 k (k-1) e^{2b} n ln n / m", lambda,
          8.0 * k * (k - 1) * std::exp(2.0 * bb) * n * ln_n / m);
      r.preconditions.push_back(LuceFlag(in.model));
      break;
  }
  return r;
}

double CramerRaoLowerBound(const WeightedAdjacency& expected_wstar, double m,
                           const ModelConstants& constants) {
  if (!(m > 0.0)) throw ValidationError("m must be positive");
  const auto spectrum = Spectrum(expected_wstar);
  if (!(spectrum.fiedler > kFiedlerPositiveThreshold)) {
    throw ValidationError("expected design is disconnected (lambda_2 = 0)");
  }
  double sum = 0.0;
  for (size_t i = 1; i < spectrum.eigenvalues.size(); ++i) {
    sum += 1.0 / spectrum.eigenvalues[i];
  }
  return sum / (constants.A_tilde * constants.C_tilde) / m;
}

double CramerRaoFixedK(const WeightedAdjacency& expected_inv_k2, int k,
                       double gamma, double m,
                       const ModelConstants& constants) {
  if (k < 2) throw ValidationError("k must be at least 2");
  return (1.0 - 1.0 / k) * gamma *
         CramerRaoLowerBound(expected_inv_k2, m, constants);
}

double CramerRaoUniform(int n, double gamma, double m,
                        const ModelConstants& constants) {
  if (n < 2) throw ValidationError("n must be at least 2");
  if (!(m > 0.0)) throw ValidationError("m must be positive");
  const double shrink = 1.0 - 1.0 / n;
  return shrink * shrink * gamma * n / m /
         (constants.A_tilde * constants.C_tilde);
}

}  // namespace thurstone
