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

#include "thurstone/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "thurstone/errors.h"

namespace thurstone {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijoSlope = 1e-4;
constexpr double kContraction = 0.5;
constexpr double kMinStep = 1e-20;

// Tighter than the defaults: estimation sums many choice probabilities and
// the stopping rule looks at a gradient norm of 1e-8.
constexpr QuadratureOptions kEstimationQuadrature{1e-14, 1e-12, 4000};

// Identical observations, aggregated. `items` lists the winner first and
// the others in ascending order.
struct Group {
  std::vector<int> items;
  double count = 0.0;
};

std::vector<Group> GroupObservations(const Dataset& ds) {
  std::map<std::vector<int>, double> counts;
  for (const auto& obs : ds.observations()) {
    std::vector<int> key = {obs.winner};
    for (int item : obs.set) {
      if (item != obs.winner) key.push_back(item);
    }
    std::sort(key.begin() + 1, key.end());
    counts[key] += 1.0;
  }
  std::vector<Group> groups;
  groups.reserve(counts.size());
  for (auto& [items, count] : counts) groups.push_back({items, count});
  return groups;
}

struct ObjectiveValue {
  double value = 0.0;
  double error = 0.0;  // rough bound on the evaluation error of `value`
  int clamped = 0;
};

class Objective {
 public:
  Objective(const Dataset& ds, const NoiseModel& model)
      : model_(model), n_(ds.n_items()), groups_(GroupObservations(ds)) {}

  // Value, and the gradient into `grad` (resized to n) when non-null.
  ObjectiveValue Evaluate(std::span<const double> theta,
                          std::vector<double>* grad) const {
    ObjectiveValue out;
    if (grad) grad->assign(n_, 0.0);
    double magnitude = 0.0;
    const double log_floor = std::log(kProbabilityFloor);
    std::vector<double> x;
    for (const auto& g : groups_) {
      const int winner = g.items.front();
      double logp;
      if (model_.is_luce()) {
        const double beta = model_.scale();
        double top = -kInf;
        for (int i : g.items) top = std::max(top, theta[i] / beta);
        double sum = 0.0;
        for (int i : g.items) sum += std::exp(theta[i] / beta - top);
        const double lse = top + std::log(sum);
        logp = theta[winner] / beta - lse;
        if (logp < log_floor) {
          ++out.clamped;
          logp = log_floor;
        } else if (grad) {
          for (int i : g.items) {
            const double p = std::exp(theta[i] / beta - lse);
            (*grad)[i] -= g.count * p / beta;
          }
          (*grad)[winner] += g.count / beta;
        }
      } else {
        x.clear();
        for (size_t v = 1; v < g.items.size(); ++v) {
          x.push_back(theta[winner] - theta[g.items[v]]);
        }
        const auto r = ChoiceProbAndGrad(model_, x, kEstimationQuadrature);
        if (r.prob < kProbabilityFloor) {
          ++out.clamped;
          logp = log_floor;
        } else {
          logp = std::log(r.prob);
          out.error += g.count * 1e-11;
          if (grad) {
            for (size_t v = 1; v < g.items.size(); ++v) {
              const double d = g.count * r.grad[v - 1] / r.prob;
              (*grad)[winner] += d;
              (*grad)[g.items[v]] -= d;
            }
          }
        }
      }
      out.value += g.count * logp;
      magnitude += g.count * std::abs(logp);
    }
    out.error += 8.0 * std::numeric_limits<double>::epsilon() * magnitude;
    return out;
  }

  Eigen::MatrixXd LuceHessian(std::span<const double> theta) const {
    const double beta = model_.scale();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_, n_);
    std::vector<double> p;
    for (const auto& g : groups_) {
      double top = -kInf;
      for (int i : g.items) top = std::max(top, theta[i] / beta);
      p.clear();
      double sum = 0.0;
      for (int i : g.items) sum += p.emplace_back(std::exp(theta[i] / beta - top));
      for (double& v : p) v /= sum;
      const double scale = g.count / (beta * beta);
      for (size_t a = 0; a < g.items.size(); ++a) {
        h(g.items[a], g.items[a]) -= scale * p[a];
        for (size_t c = 0; c < g.items.size(); ++c) {
          h(g.items[a], g.items[c]) += scale * p[a] * p[c];
        }
      }
    }
    return h;
  }

 private:
  NoiseModel model_;
  int n_;
  std::vector<Group> groups_;
};

void CheckInputs(const Dataset& ds, const ParamVector& theta) {
  if (ds.m() == 0) throw ValidationError("dataset has no observations");
  if (theta.n() != ds.n_items()) {
    throw ValidationError("theta has " + std::to_string(theta.n()) +
                          " entries but the dataset has " +
                          std::to_string(ds.n_items()) + " items");
  }
  ValidateParams(theta);
}

// Returns tau with sum_i clamp(v_i - tau, lo_i, hi_i) = 0. Bounds may be
// infinite; the caller guarantees sum(lo) <= 0 <= sum(hi).
double ZeroSumShift(std::span<const double> v, std::span<const double> lo,
                    std::span<const double> hi) {
  const size_t n = v.size();
  auto total = [&](double tau) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += std::clamp(v[i] - tau, lo[i], hi[i]);
    return s;
  };
  std::vector<double> breaks;
  for (size_t i = 0; i < n; ++i) {
    if (std::isfinite(lo[i])) breaks.push_back(v[i] - lo[i]);
    if (std::isfinite(hi[i])) breaks.push_back(v[i] - hi[i]);
  }
  std::sort(breaks.begin(), breaks.end());
  // total() is nonincreasing; find the first breakpoint where it is <= 0.
  const auto it = std::partition_point(
      breaks.begin(), breaks.end(), [&](double tau) { return total(tau) > 0; });
  if (it != breaks.end() && total(*it) == 0.0) return *it;
  double probe;
  if (breaks.empty()) {
    probe = 0.0;
  } else if (it == breaks.begin()) {
    probe = breaks.front() - 1.0;
  } else if (it == breaks.end()) {
    probe = breaks.back() + 1.0;
  } else {
    probe = 0.5 * (*(it - 1) + *it);
  }
  // Between breakpoints the clamping pattern is fixed and total() is linear.
  double fixed = 0.0, free_sum = 0.0;
  int free_count = 0;
  for (size_t i = 0; i < n; ++i) {
    const double u = v[i] - probe;
    if (u <= lo[i]) {
      fixed += lo[i];
    } else if (u >= hi[i]) {
      fixed += hi[i];
    } else {
      free_sum += v[i];
      ++free_count;
    }
  }
  if (free_count == 0) return probe;
  return (free_sum + fixed) / free_count;
}

bool AtLower(double t, double b) { return t <= -b * (1.0 - 1e-12); }
bool AtUpper(double t, double b) { return t >= b * (1.0 - 1e-12); }

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void CheckConnected(const Dataset& ds) {
  if (ds.n_items() < 2) throw ValidationError("need at least two items");
  bool connected;
  double fiedler = std::numeric_limits<double>::quiet_NaN();
  if (ds.n_items() <= kMaxDenseItems) {
    fiedler = FiedlerValue(BuildWeightedAdjacency(ds, WeightFunction::Unit()));
    connected = fiedler > kFiedlerPositiveThreshold;
  } else {
    connected = IsConnected(ds);
  }
  if (connected) return;
  const auto labels = ComponentLabels(ds);
  std::vector<int> side;
  for (int i = 0; i < ds.n_items(); ++i) {
    if (labels[i] == labels[0]) side.push_back(i);
  }
  std::string listing;
  for (size_t i = 0; i < side.size() && i < 20; ++i) {
    listing += (i ? "," : "") + ds.labels()[side[i]];
  }
  if (side.size() > 20) listing += ",...";
  throw DisconnectedError(
      "comparison graph is disconnected (lambda_2 = " +
          std::to_string(fiedler) + "): items {" + listing +
          "} are never compared with the remaining items",
      side);
}

}  // namespace

EstimatorMethod ParseEstimatorMethod(std::string_view name) {
  if (name == "mle") return EstimatorMethod::kMle;
  if (name == "rank-all" || name == "rank_all") return EstimatorMethod::kRankAll;
  if (name == "rank-one" || name == "rank_one") return EstimatorMethod::kRankOne;
  throw ValidationError("unknown method '" + std::string(name) +
                        "' (use mle, rank-all or rank-one)");
}

std::string EstimatorMethodName(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::kMle:
      return "mle";
    case EstimatorMethod::kRankAll:
      return "rank-all";
    case EstimatorMethod::kRankOne:
      return "rank-one";
  }
  return "?";
}

double Loglik(const Dataset& ds, const NoiseModel& model,
              const ParamVector& theta, int* clamped) {
  CheckInputs(ds, theta);
  const auto value = Objective(ds, model).Evaluate(theta.theta, nullptr);
  if (clamped) *clamped = value.clamped;
  return value.value;
}

std::vector<double> LoglikGrad(const Dataset& ds, const NoiseModel& model,
                               const ParamVector& theta) {
  CheckInputs(ds, theta);
  std::vector<double> grad;
  Objective(ds, model).Evaluate(theta.theta, &grad);
  return grad;
}

Eigen::MatrixXd LoglikHessianLuce(const Dataset& ds, const NoiseModel& model,
                                  const ParamVector& theta) {
  if (!model.is_luce()) {
    throw UnsupportedError("closed-form Hessian needs the double-exponential "
                           "model, got " + model.Spec());
  }
  CheckInputs(ds, theta);
  return Objective(ds, model).LuceHessian(theta.theta);
}

Dataset BreakRanks(const Dataset& ds, EstimatorMethod method, uint64_t seed) {
  if (method == EstimatorMethod::kMle) return ds;
  Rng rng(seed);
  std::vector<Observation> pairs;
  std::vector<int> losers;
  for (const auto& obs : ds.observations()) {
    losers.clear();
    for (int item : obs.set) {
      if (item != obs.winner) losers.push_back(item);
    }
    if (method == EstimatorMethod::kRankAll) {
      for (int loser : losers) pairs.push_back({{obs.winner, loser}, obs.winner});
    } else {
      const int loser = losers[rng.Index(static_cast<int>(losers.size()))];
      pairs.push_back({{obs.winner, loser}, obs.winner});
    }
  }
  return Dataset(ds.labels(), std::move(pairs));
}

std::vector<double> ProjectOntoFeasible(std::span<const double> v, double b) {
  if (!(b > 0.0)) throw ValidationError("b must be positive");
  const std::vector<double> lo(v.size(), -b), hi(v.size(), b);
  const double tau = ZeroSumShift(v, lo, hi);
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i] - tau, -b, b);
  return out;
}

double ProjectedGradientNorm(std::span<const double> theta,
                             std::span<const double> grad, double b) {
  const size_t n = theta.size();
  std::vector<double> lo(n, -kInf), hi(n, kInf);
  for (size_t i = 0; i < n; ++i) {
    if (AtLower(theta[i], b)) lo[i] = 0.0;
    if (AtUpper(theta[i], b)) hi[i] = 0.0;
  }
  const double tau = ZeroSumShift(grad, lo, hi);
  double norm2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = std::clamp(grad[i] - tau, lo[i], hi[i]);
    norm2 += d * d;
  }
  return std::sqrt(norm2);
}

EstimateReport Estimate(const Dataset& ds, const EstimatorConfig& config) {
  if (!(config.b > 0.0) || !std::isfinite(config.b)) {
    throw ValidationError("b must be positive and finite");
  }
  if (!(config.tol_grad > 0.0)) throw ValidationError("tol_grad must be > 0");
  if (config.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (ds.m() == 0) throw ValidationError("dataset has no observations");

  const Dataset reduced = BreakRanks(ds, config.method, config.seed);
  CheckConnected(reduced);

  const Objective objective(reduced, config.model);
  const int n = ds.n_items();
  const double b = config.b;
  if (!config.initial.empty() && static_cast<int>(config.initial.size()) != n) {
    throw ValidationError("initial point has the wrong dimension");
  }
  std::vector<double> theta = config.initial.empty()
                                  ? std::vector<double>(n, 0.0)
                                  : ProjectOntoFeasible(config.initial, b);
  std::vector<double> grad, next(n), next_grad, step(n);
  ObjectiveValue current = objective.Evaluate(theta, &grad);

  EstimateReport report;
  double trial = 1.0;
  for (;;) {
    report.grad_norm = ProjectedGradientNorm(theta, grad, b);
    if (report.grad_norm <= config.tol_grad) {
      report.converged = true;
      break;
    }
    if (report.iterations >= config.max_iter) break;

    // Armijo backtracking along the projection arc. Differences below the
    // evaluation error of the objective count as no change.
    double t = trial;
    ObjectiveValue candidate;
    bool accepted = false;
    while (t >= kMinStep) {
      for (int i = 0; i < n; ++i) step[i] = theta[i] + t * grad[i];
      next = ProjectOntoFeasible(step, b);
      for (int i = 0; i < n; ++i) step[i] = next[i] - theta[i];
      candidate = objective.Evaluate(next, &next_grad);
      const double slack = current.error + candidate.error;
      if (candidate.value >=
          current.value + kArmijoSlope * Dot(grad, step) - slack) {
        accepted = true;
        break;
      }
      t *= kContraction;
    }
    if (!accepted) break;

    // Barzilai-Borwein trial step for the next iteration.
    double sy = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
      ss += step[i] * step[i];
      sy -= step[i] * (next_grad[i] - grad[i]);
    }
    trial = (sy > 0.0 && ss > 0.0) ? std::clamp(ss / sy, 1e-12, 1e12)
                                   : 2.0 * t;
    theta.swap(next);
    grad.swap(next_grad);
    current = candidate;
    ++report.iterations;
  }

  report.theta_hat = {theta, b};
  report.loglik = current.value;
  report.clamped = current.clamped;
  for (int i = 0; i < n; ++i) {
    if (AtLower(theta[i], b) || AtUpper(theta[i], b)) {
      report.active_box.push_back(i);
    }
  }
  return report;
}

double Mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("dimension mismatch in MSE");
  if (a.empty()) throw ValidationError("MSE of empty vectors");
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return sum / a.size();
}

}  // namespace thurstone
