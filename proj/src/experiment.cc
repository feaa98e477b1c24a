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

#include "thurstone/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "thurstone/bounds.h"
#include "thurstone/errors.h"
#include "thurstone/sampler.h"

namespace thurstone {
namespace {

std::string ThetaModeName(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::kZero:
      return "zero";
    case ThetaMode::kTwoClass:
      return "two-class";
    case ThetaMode::kGiven:
      return "given";
  }
  return "?";
}

ParamVector TrueTheta(const ExperimentSpec& spec, uint64_t rep_seed) {
  switch (spec.theta_mode) {
    case ThetaMode::kZero:
      return {std::vector<double>(spec.n, 0.0), spec.b};
    case ThetaMode::kTwoClass: {
      Rng rng(rep_seed ^ kThetaSalt);
      auto params = SampleTwoClassTheta(spec.n, spec.theta_b, rng).params;
      params.b = spec.b;
      return params;
    }
    case ThetaMode::kGiven:
      return {spec.theta_given, spec.b};
  }
  return {};
}

struct RunOutcome {
  double mse = 0.0;
  bool converged = false;
};

RunOutcome RunOnce(const ExperimentSpec& spec, int k, int rep) {
  const uint64_t rep_seed = spec.seed + static_cast<uint64_t>(rep);
  const ParamVector theta = TrueTheta(spec, rep_seed);
  const Dataset ds = SampleDataset(spec.model, theta,
                                   ComparisonDesign::Uniform(spec.n, k),
                                   spec.m, rep_seed);
  EstimatorConfig config;
  config.method = spec.method;
  config.model = spec.model;
  config.b = spec.b;
  config.seed = rep_seed;
  const auto report = Estimate(ds, config);
  return {Mse(report.theta_hat.theta, theta.theta), report.converged};
}

void AttachBound(const ExperimentSpec& spec, ExperimentRow& row) {
  BoundInputs in;
  in.n = spec.n;
  in.m = spec.m;
  in.k = row.k;
  in.ks = {row.k};
  in.b = spec.b;
  in.model = spec.model;
  const Theorem theorem =
      spec.model.is_luce() ? Theorem::kLuceFull : Theorem::kGeneral;
  in.fiedler = UnbiasedFiedler(spec.n, {{row.k, 1.0}},
                               TheoremWeight(theorem, spec.model));
  const ModelConstants constants =
      theorem == Theorem::kGeneral
          ? SampledConstants(spec.model, in.ks, spec.b, spec.bound_samples)
          : LuceConstants(spec.model.scale(), spec.b);
  const auto report = MseUpperBound(theorem, in, constants);
  row.bound_theorem = report.theorem;
  row.bound_value = report.value;
  row.bound_preconditions_met = report.preconditions_met();
}

nlohmann::json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void ValidateSpec(const ExperimentSpec& spec) {
  if (spec.n < 2) throw ValidationError("n must be at least 2");
  if (spec.m < 1) throw ValidationError("m must be at least 1");
  if (spec.repetitions < 1) throw ValidationError("repetitions must be >= 1");
  if (spec.threads < 1) throw ValidationError("threads must be >= 1");
  if (spec.k_values.empty()) throw ValidationError("no k values given");
  for (int k : spec.k_values) {
    if (k < 2 || k > spec.n) {
      throw ValidationError("k = " + std::to_string(k) + " outside [2, n]");
    }
  }
  if (!(spec.b > 0.0)) throw ValidationError("b must be positive");
  if (spec.theta_mode == ThetaMode::kTwoClass) {
    if (spec.n % 2 != 0) throw ValidationError("two-class theta needs even n");
    if (!(spec.theta_b > 0.0) || spec.theta_b > spec.b) {
      throw ValidationError("two-class magnitude must lie in (0, b]");
    }
  }
  if (spec.theta_mode == ThetaMode::kGiven) {
    if (static_cast<int>(spec.theta_given.size()) != spec.n) {
      throw ValidationError("given theta has the wrong length");
    }
    ValidateParams({spec.theta_given, spec.b});
  }
}

double PairwiseSum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = values.size() / 2;
  return PairwiseSum(values.first(half)) + PairwiseSum(values.subspan(half));
}

MeanStderr Aggregate(std::span<const double> values) {
  if (values.empty()) throw ValidationError("nothing to aggregate");
  MeanStderr out;
  const double count = static_cast<double>(values.size());
  out.mean = PairwiseSum(values) / count;
  if (values.size() > 1) {
    std::vector<double> squares(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
      squares[i] = (values[i] - out.mean) * (values[i] - out.mean);
    }
    const double variance = PairwiseSum(squares) / (count - 1.0);
    out.stderr_ = std::sqrt(variance / count);
  }
  return out;
}

ExperimentResult RunMseVsK(const ExperimentSpec& spec) {
  ValidateSpec(spec);
  const int n_k = static_cast<int>(spec.k_values.size());
  const int reps = spec.repetitions;
  const int tasks = n_k * reps;
  std::vector<RunOutcome> outcomes(tasks);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int t = next++; t < tasks; t = next++) {
      try {
        outcomes[t] = RunOnce(spec, spec.k_values[t / reps], t % reps);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };
  const int threads = std::min(spec.threads, tasks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.spec = spec;
  for (int ki = 0; ki < n_k; ++ki) {
    ExperimentRow row;
    row.k = spec.k_values[ki];
    for (int r = 0; r < reps; ++r) {
      const auto& o = outcomes[ki * reps + r];
      row.mses.push_back(o.mse);
      row.non_converged += !o.converged;
    }
    const auto agg = Aggregate(row.mses);
    row.mse_mean = agg.mean;
    row.mse_stderr = agg.stderr_;
    row.ci95_half_width = 1.96 * agg.stderr_;
    if (spec.attach_bounds) AttachBound(spec, row);
    result.rows.push_back(std::move(row));
  }
  return result;
}

void WriteExperimentTsv(const ExperimentResult& result, std::ostream& out) {
  out << "k\tmse_mean\tmse_stderr\tci95_half_width\tbound_theorem\t"
         "bound_value\tnon_converged\n";
  const auto old = out.precision(17);
  for (const auto& row : result.rows) {
    out << row.k << '\t' << row.mse_mean << '\t' << row.mse_stderr << '\t'
        << row.ci95_half_width << '\t'
        << (row.bound_theorem.empty() ? "-" : row.bound_theorem) << '\t';
    if (row.bound_theorem.empty()) {
      out << "nan";
    } else {
      out << row.bound_value;
    }
    out << '\t' << row.non_converged << '\n';
  }
  out.precision(old);
}

void WriteExperimentJson(const ExperimentResult& result, std::ostream& out) {
  const auto& spec = result.spec;
  nlohmann::json j;
  j["experiment"] = "mse-vs-k";
  j["spec"] = {
      {"n", spec.n},
      {"m", spec.m},
      {"k_values", spec.k_values},
      {"repetitions", spec.repetitions},
      {"noise", spec.model.Spec()},
      {"theta_mode", ThetaModeName(spec.theta_mode)},
      {"theta_b", spec.theta_b},
      {"method", EstimatorMethodName(spec.method)},
      {"b", spec.b},
      {"seed", spec.seed},
      {"design", "uniform"},
      {"substreams", "repetition r uses seed + r"},
  };
  if (spec.theta_mode == ThetaMode::kGiven) j["spec"]["theta"] = spec.theta_given;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r = {
        {"k", row.k},
        {"mse_mean", row.mse_mean},
        {"mse_stderr", row.mse_stderr},
        {"ci95_half_width", row.ci95_half_width},
        {"non_converged", row.non_converged},
        {"mse", row.mses},
    };
    if (!row.bound_theorem.empty()) {
      r["bound"] = {{"theorem", row.bound_theorem},
                    {"value", Number(row.bound_value)},
                    {"preconditions_met", row.bound_preconditions_met}};
    }
    j["rows"].push_back(r);
  }
  out << j.dump(2) << '\n';
}

Dataset TopNRestriction(const Dataset& ds, int top_n) {
  if (top_n < 2) throw ValidationError("top-n needs n >= 2");
  const int n = ds.n_items();
  if (top_n >= n) return ds;
  std::vector<int> count(n, 0);
  std::vector<long long> first(n, std::numeric_limits<long long>::max());
  long long position = 0;
  for (const auto& obs : ds.observations()) {
    for (int item : obs.set) {
      ++count[item];
      first[item] = std::min(first[item], position++);
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (count[a] != count[b]) return count[a] > count[b];
    return first[a] < first[b];
  });
  std::vector<bool> kept(n, false);
  for (int i = 0; i < top_n; ++i) kept[order[i]] = true;
  std::vector<int> index(n, -1);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    if (kept[i]) {
      index[i] = static_cast<int>(labels.size());
      labels.push_back(ds.labels()[i]);
    }
  }
  std::vector<Observation> observations;
  for (const auto& obs : ds.observations()) {
    if (!kept[obs.winner]) continue;
    Observation restricted;
    for (int item : obs.set) {
      if (kept[item]) restricted.set.push_back(index[item]);
    }
    if (restricted.set.size() < 2) continue;
    restricted.winner = index[obs.winner];
    observations.push_back(std::move(restricted));
  }
  return Dataset(std::move(labels), std::move(observations));
}

}  // namespace thurstone
