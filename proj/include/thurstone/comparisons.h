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

#ifndef THURSTONE_COMPARISONS_H_
#define THURSTONE_COMPARISONS_H_

// Observations (comparison set + chosen item), dataset ingestion, and the
// comparison-structure matrices: weighted adjacency, Laplacian, spectrum.

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "thurstone/noise.h"

namespace thurstone {

struct Observation {
  std::vector<int> set;  // distinct item indices, at least two
  int winner = -1;       // a member of `set`

  bool operator==(const Observation&) const = default;
};

// Items 0..n-1 with labels, and a sequence of observations over them.
// Immutable after construction; the constructor validates every row.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> labels,
          std::vector<Observation> observations);
  // Labels are the decimal item indices.
  static Dataset Unlabeled(int n_items, std::vector<Observation> observations);

  int n_items() const { return static_cast<int>(labels_.size()); }
  int m() const { return static_cast<int>(observations_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Observation>& observations() const { return observations_; }

  // The first `count` observations over the same item universe.
  Dataset Prefix(int count) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Observation> observations_;
};

// Throws ValidationError unless `obs` is a valid observation over n items.
void ValidateObservation(const Observation& obs, int n_items);

enum class InputFormat { kCsv, kJsonLines };

struct IngestResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// CSV rows are `winner,member1,member2,...`; lines starting with '#' and
// blank lines are skipped. JSON lines are {"set": [...], "winner": "..."}.
// Labels get indices in order of first appearance.
IngestResult Ingest(std::istream& in, InputFormat format);
// Picks JSON lines for .jsonl/.json paths unless `format` is given.
IngestResult IngestFile(const std::string& path,
                        std::optional<InputFormat> format = std::nullopt);
void WriteCsv(const Dataset& ds, std::ostream& out);

// w(k) applied to comparison sets of cardinality k.
class WeightFunction {
 public:
  WeightFunction(std::string name, std::function<double(int)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}

  static WeightFunction Constant(double a);
  static WeightFunction Unit() { return Constant(1.0); }
  static WeightFunction InverseSquare();
  // w*(k) = (k dp_k(0)/dx_1)^2 of the given noise model.
  static WeightFunction Optimal(const NoiseModel& model);
  // `1`, `const:<a>`, `inv-k2`, or `wstar:<noise spec>`.
  static WeightFunction Parse(std::string_view spec);

  double operator()(int k) const { return fn_(k); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(int)> fn_;
};

// Symmetric, nonnegative, zero diagonal.
struct WeightedAdjacency {
  Eigen::MatrixXd entries;
  int n() const { return static_cast<int>(entries.rows()); }
};

// m_ij = (n/m) sum_k w(k) #{t : |S_t| = k, {i,j} in S_t}. Throws on m = 0.
WeightedAdjacency BuildWeightedAdjacency(const Dataset& ds,
                                         const WeightFunction& weight);

// diag(A 1) - A.
Eigen::MatrixXd Laplacian(const WeightedAdjacency& adjacency);

struct LaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending
  double fiedler = 0.0;             // second smallest
};

inline constexpr int kMaxDenseItems = 2000;
inline constexpr double kFiedlerPositiveThreshold = 1e-10;

LaplacianSpectrum Spectrum(const WeightedAdjacency& adjacency);
double FiedlerValue(const WeightedAdjacency& adjacency);

struct CurvePoint {
  int prefix_m;
  double fiedler;
};

// Fiedler value of the weighted adjacency of each prefix of length step,
// 2 step, ..., always ending with the full dataset.
// How prefix counts are scaled. kFullDataset uses n/m with m the size of
// the whole dataset, so the curve tracks cumulative counts on a fixed scale
// and ends at the dataset's own Fiedler value. kPrefix rescales every prefix
// by n/m_prefix.
enum class CurveNormalization { kFullDataset, kPrefix };

// One point per prefix length step, 2 step, ..., always ending at m.
std::vector<CurvePoint> FiedlerPrefixCurve(
    const Dataset& ds, const WeightFunction& weight, int step,
    CurveNormalization normalization = CurveNormalization::kFullDataset);
void WriteCurveTsv(const std::vector<CurvePoint>& curve, std::ostream& out);

// Expected weighted adjacency when sets of each cardinality k are drawn
// uniformly (fraction mix[k]): every off-diagonal entry is
// sum_k w(k) k (k-1) mix[k] / (n-1).
WeightedAdjacency ExpectedAdjacencyUnbiased(int n,
                                            const std::map<int, double>& mix,
                                            const WeightFunction& weight);
// Closed-form Fiedler value of the matrix above: n/(n-1) sum_k w(k)k(k-1)mu(k).
double UnbiasedFiedler(int n, const std::map<int, double>& mix,
                       const WeightFunction& weight);

// Smallest prefix length with a positive Fiedler value, if any.
std::optional<int> ConnectivityThreshold(const Dataset& ds,
                                         const WeightFunction& weight);

// Connected-component label per item in the unweighted support graph.
std::vector<int> ComponentLabels(const Dataset& ds);
bool IsConnected(const Dataset& ds);

}  // namespace thurstone

#endif  // THURSTONE_COMPARISONS_H_
