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

#include "thurstone/comparisons.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "thurstone/errors.h"

namespace thurstone {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    parent_[std::max(a, b)] = std::min(a, b);
    --components_;
  }
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  int components_;
};

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Maps labels to indices in order of first appearance.
class LabelIndex {
 public:
  int Get(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, labels_.size());
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::vector<std::string> Release() { return std::move(labels_); }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> labels_;
};

Observation MakeObservation(LabelIndex& index, const std::string& winner,
                            const std::vector<std::string>& members,
                            int line) {
  std::unordered_set<std::string> seen;
  for (const auto& label : members) {
    if (!seen.insert(label).second) {
      throw ValidationError("line " + std::to_string(line) +
                            ": duplicate member '" + label + "'");
    }
  }
  if (members.size() < 2) {
    throw ValidationError("line " + std::to_string(line) +
                          ": comparison set needs at least two members");
  }
  if (!seen.contains(winner)) {
    throw ValidationError("line " + std::to_string(line) + ": winner '" +
                          winner + "' is not a member of the set");
  }
  Observation obs;
  const int winner_index = index.Get(winner);
  for (const auto& label : members) obs.set.push_back(index.Get(label));
  obs.winner = winner_index;
  return obs;
}

}  // namespace

void ValidateObservation(const Observation& obs, int n_items) {
  if (obs.set.size() < 2) {
    throw ValidationError("comparison set needs at least two members");
  }
  std::vector<int> sorted = obs.set;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("comparison set has duplicate members");
  }
  if (sorted.front() < 0 || sorted.back() >= n_items) {
    throw ValidationError("item index out of range");
  }
  if (!std::binary_search(sorted.begin(), sorted.end(), obs.winner)) {
    throw ValidationError("winner is not a member of the comparison set");
  }
}

Dataset::Dataset(std::vector<std::string> labels,
                 std::vector<Observation> observations)
    : labels_(std::move(labels)), observations_(std::move(observations)) {
  std::unordered_set<std::string> distinct(labels_.begin(), labels_.end());
  if (distinct.size() != labels_.size()) {
    throw ValidationError("item labels must be distinct");
  }
  for (const auto& obs : observations_) ValidateObservation(obs, n_items());
}

Dataset Dataset::Unlabeled(int n_items, std::vector<Observation> observations) {
  if (n_items < 0) throw ValidationError("negative item count");
  std::vector<std::string> labels(n_items);
  for (int i = 0; i < n_items; ++i) labels[i] = std::to_string(i);
  return Dataset(std::move(labels), std::move(observations));
}

Dataset Dataset::Prefix(int count) const {
  if (count < 0 || count > m()) throw ValidationError("prefix out of range");
  Dataset out;
  out.labels_ = labels_;
  out.observations_.assign(observations_.begin(),
                           observations_.begin() + count);
  return out;
}

IngestResult Ingest(std::istream& in, InputFormat format) {
  LabelIndex index;
  std::vector<Observation> observations;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (format == InputFormat::kCsv) {
      std::vector<std::string> fields;
      std::stringstream row(trimmed);
      std::string field;
      while (std::getline(row, field, ',')) fields.push_back(Trim(field));
      if (trimmed.back() == ',') fields.emplace_back();
      if (fields.size() < 2) {
        throw ParseError(line_no, "expected winner,member1,member2,...");
      }
      for (const auto& f : fields) {
        if (f.empty()) throw ParseError(line_no, "empty label");
      }
      const std::vector<std::string> members(fields.begin() + 1, fields.end());
      observations.push_back(
          MakeObservation(index, fields.front(), members, line_no));
    } else {
      nlohmann::json row;
      try {
        row = nlohmann::json::parse(trimmed);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!row.is_object() || !row.contains("set") ||
          !row.contains("winner") || !row["set"].is_array() ||
          !row["winner"].is_string()) {
        throw ParseError(line_no,
                         "expected {\"set\": [labels...], \"winner\": label}");
      }
      std::vector<std::string> members;
      for (const auto& m : row["set"]) {
        if (!m.is_string() || m.get<std::string>().empty()) {
          throw ParseError(line_no, "set members must be non-empty strings");
        }
        members.push_back(m.get<std::string>());
      }
      observations.push_back(MakeObservation(
          index, row["winner"].get<std::string>(), members, line_no));
    }
  }
  IngestResult result;
  if (observations.empty()) {
    result.warnings.push_back("input contains no observations");
  }
  result.dataset = Dataset(index.Release(), std::move(observations));
  return result;
}

IngestResult IngestFile(const std::string& path,
                        std::optional<InputFormat> format) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  if (!format) {
    const bool json = path.ends_with(".jsonl") || path.ends_with(".json");
    format = json ? InputFormat::kJsonLines : InputFormat::kCsv;
  }
  return Ingest(in, *format);
}

void WriteCsv(const Dataset& ds, std::ostream& out) {
  out << "#winner,members...\n";
  for (const auto& obs : ds.observations()) {
    out << ds.labels()[obs.winner];
    for (int item : obs.set) out << ',' << ds.labels()[item];
    out << '\n';
  }
}

WeightFunction WeightFunction::Constant(double a) {
  if (!(a >= 0.0)) throw ValidationError("weight must be nonnegative");
  std::ostringstream name;
  name << "const:" << a;
  return WeightFunction(name.str(), [a](int) { return a; });
}

WeightFunction WeightFunction::InverseSquare() {
  return WeightFunction("inv-k2", [](int k) { return 1.0 / (double(k) * k); });
}

WeightFunction WeightFunction::Optimal(const NoiseModel& model) {
  return WeightFunction("wstar:" + model.Spec(), [model](int k) {
    return WeightStar(model, k);
  });
}

WeightFunction WeightFunction::Parse(std::string_view spec) {
  if (spec == "1" || spec == "unit") return Unit();
  if (spec == "inv-k2" || spec == "1/k^2") return InverseSquare();
  if (spec.starts_with("wstar:")) {
    return Optimal(NoiseModel::Parse(spec.substr(6)));
  }
  if (spec.starts_with("const:")) {
    const std::string value(spec.substr(6));
    size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw ValidationError("bad constant weight '" + value + "'");
    }
    return Constant(a);
  }
  throw ValidationError("unknown weight '" + std::string(spec) +
                        "' (use 1, const:<a>, inv-k2 or wstar:<noise>)");
}

namespace {

void CheckSize(int n) {
  if (n > kMaxDenseItems) {
    throw ValidationError("n = " + std::to_string(n) +
                          " exceeds the dense eigensolver cap of " +
                          std::to_string(kMaxDenseItems));
  }
}

// Adds w(|S|) to every pair of each observation in [begin, end).
void AccumulatePairs(const Dataset& ds, const WeightFunction& weight,
                     int begin, int end, Eigen::MatrixXd& counts) {
  const auto& obs = ds.observations();
  for (int t = begin; t < end; ++t) {
    const auto& set = obs[t].set;
    const double w = weight(static_cast<int>(set.size()));
    for (size_t a = 0; a < set.size(); ++a) {
      for (size_t b = a + 1; b < set.size(); ++b) {
        counts(set[a], set[b]) += w;
        counts(set[b], set[a]) += w;
      }
    }
  }
}

}  // namespace

WeightedAdjacency BuildWeightedAdjacency(const Dataset& ds,
                                         const WeightFunction& weight) {
  if (ds.m() == 0) {
    throw ValidationError("weighted adjacency of an empty dataset");
  }
  const int n = ds.n_items();
  CheckSize(n);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  AccumulatePairs(ds, weight, 0, ds.m(), counts);
  return {counts * (static_cast<double>(n) / ds.m())};
}

Eigen::MatrixXd Laplacian(const WeightedAdjacency& adjacency) {
  Eigen::MatrixXd lap = -adjacency.entries;
  lap.diagonal() = adjacency.entries.rowwise().sum();
  return lap;
}

LaplacianSpectrum Spectrum(const WeightedAdjacency& adjacency) {
  const int n = adjacency.n();
  CheckSize(n);
  if (n < 2) throw ValidationError("spectrum needs at least two items");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      Laplacian(adjacency), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed");
  }
  LaplacianSpectrum out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + n);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  out.fiedler = out.eigenvalues[1];
  return out;
}

double FiedlerValue(const WeightedAdjacency& adjacency) {
  return Spectrum(adjacency).fiedler;
}

std::vector<CurvePoint> FiedlerPrefixCurve(const Dataset& ds,
                                           const WeightFunction& weight,
                                           int step,
                                           CurveNormalization normalization) {
  if (step < 1) throw ValidationError("curve step must be >= 1");
  const int n = ds.n_items();
  CheckSize(n);
  std::vector<CurvePoint> curve;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  int done = 0;
  for (int prefix = step;; prefix += step) {
    prefix = std::min(prefix, ds.m());
    if (prefix == 0) break;
    AccumulatePairs(ds, weight, done, prefix, counts);
    done = prefix;
    const int scale_m =
        normalization == CurveNormalization::kPrefix ? prefix : ds.m();
    const WeightedAdjacency adjacency{counts * (static_cast<double>(n) /
                                                scale_m)};
    curve.push_back({prefix, FiedlerValue(adjacency)});
    if (prefix == ds.m()) break;
  }
  return curve;
}

void WriteCurveTsv(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "prefix_m\tfiedler\n";
  const auto old = out.precision(17);
  for (const auto& p : curve) out << p.prefix_m << '\t' << p.fiedler << '\n';
  out.precision(old);
}

namespace {

double UnbiasedEntry(int n, const std::map<int, double>& mix,
                     const WeightFunction& weight) {
  if (n < 2) throw ValidationError("need at least two items");
  double total = 0.0, entry = 0.0;
  for (const auto& [k, mu] : mix) {
    if (k < 2 || k > n) {
      throw ValidationError("cardinality " + std::to_string(k) +
                            " outside [2, n]");
    }
    if (mu < 0.0) throw ValidationError("negative cardinality fraction");
    total += mu;
    entry += weight(k) * k * (k - 1) * mu;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("cardinality fractions must sum to 1");
  }
  return entry / (n - 1);
}

}  // namespace

WeightedAdjacency ExpectedAdjacencyUnbiased(int n,
                                            const std::map<int, double>& mix,
                                            const WeightFunction& weight) {
  CheckSize(n);
  const double entry = UnbiasedEntry(n, mix, weight);
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, entry);
  a.diagonal().setZero();
  return {a};
}

double UnbiasedFiedler(int n, const std::map<int, double>& mix,
                       const WeightFunction& weight) {
  return n * UnbiasedEntry(n, mix, weight);
}

std::optional<int> ConnectivityThreshold(const Dataset& ds,
                                         const WeightFunction& weight) {
  const int n = ds.n_items();
  if (n < 2) return std::nullopt;
  DisjointSets sets(n);
  const auto& obs = ds.observations();
  for (int t = 0; t < ds.m(); ++t) {
    if (weight(static_cast<int>(obs[t].set.size())) > 0.0) {
      for (size_t a = 1; a < obs[t].set.size(); ++a) {
        sets.Union(obs[t].set[0], obs[t].set[a]);
      }
    }
    if (sets.components() > 1) continue;
    // Union-find says connected; confirm against the numerical floor and
    // keep scanning if tiny weights leave lambda_2 below it.
    for (int prefix = t + 1; prefix <= ds.m(); ++prefix) {
      const auto adjacency = BuildWeightedAdjacency(ds.Prefix(prefix), weight);
      if (FiedlerValue(adjacency) > kFiedlerPositiveThreshold) return prefix;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<int> ComponentLabels(const Dataset& ds) {
  DisjointSets sets(ds.n_items());
  for (const auto& obs : ds.observations()) {
    for (size_t a = 1; a < obs.set.size(); ++a) {
      sets.Union(obs.set[0], obs.set[a]);
    }
  }
  std::vector<int> labels(ds.n_items());
  for (int i = 0; i < ds.n_items(); ++i) labels[i] = sets.Find(i);
  return labels;
}

bool IsConnected(const Dataset& ds) {
  if (ds.n_items() < 2) return false;
  const auto labels = ComponentLabels(ds);
  return std::all_of(labels.begin(), labels.end(),
                     [&](int l) { return l == labels[0]; });
}

}  // namespace thurstone
