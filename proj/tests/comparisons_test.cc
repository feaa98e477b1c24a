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

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "thurstone/errors.h"

namespace thurstone {
namespace {

Dataset PairsDataset(int n, const std::vector<std::vector<int>>& sets) {
  std::vector<Observation> obs;
  for (const auto& s : sets) obs.push_back({s, s.front()});
  return Dataset::Unlabeled(n, obs);
}

// Every ordered pair once per leg; two legs give a double round robin.
Dataset RoundRobin(int n, int legs) {
  std::vector<std::vector<int>> sets;
  for (int leg = 0; leg < legs; ++leg) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) sets.push_back({i, j});
    }
  }
  return PairsDataset(n, sets);
}

TEST(IngestTest, CsvAssignsLabelsInFirstAppearanceOrder) {
  std::istringstream in("a,a,b\nc,b,c\n");
  const auto result = Ingest(in, InputFormat::kCsv);
  const auto& ds = result.dataset;
  EXPECT_EQ(ds.n_items(), 3);
  EXPECT_EQ(ds.labels(), (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(ds.m(), 2);
  EXPECT_EQ(ds.observations()[0], (Observation{{0, 1}, 0}));
  EXPECT_EQ(ds.observations()[1], (Observation{{1, 2}, 2}));
  EXPECT_TRUE(result.warnings.empty());
}

TEST(IngestTest, EmptyInputWarns) {
  std::istringstream in("#winner,members...\n\n");
  const auto result = Ingest(in, InputFormat::kCsv);
  EXPECT_EQ(result.dataset.n_items(), 0);
  EXPECT_EQ(result.dataset.m(), 0);
  EXPECT_EQ(result.warnings.size(), 1u);
}

TEST(IngestTest, WinnerOutsideSetIsRejected) {
  std::istringstream in("a,b,c\n");
  EXPECT_THROW(Ingest(in, InputFormat::kCsv), ValidationError);
}

TEST(IngestTest, SingletonAndDuplicatesAreRejected) {
  std::istringstream singleton("a,a\n");
  EXPECT_THROW(Ingest(singleton, InputFormat::kCsv), ValidationError);
  std::istringstream dup("a,a,a,b\n");
  EXPECT_THROW(Ingest(dup, InputFormat::kCsv), ValidationError);
}

TEST(IngestTest, MalformedRowReportsLine) {
  std::istringstream in("a,a,b\n\nlonely\n");
  try {
    Ingest(in, InputFormat::kCsv);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  std::istringstream empty_label("a,a,,b\n");
  EXPECT_THROW(Ingest(empty_label, InputFormat::kCsv), ParseError);
}

TEST(IngestTest, JsonLines) {
  std::istringstream in(
      "{\"set\": [\"x\", \"y\", \"z\"], \"winner\": \"y\"}\n"
      "{\"set\": [\"z\", \"x\"], \"winner\": \"x\"}\n");
  const auto ds = Ingest(in, InputFormat::kJsonLines).dataset;
  // Winner is registered first.
  EXPECT_EQ(ds.labels(), (std::vector<std::string>{"y", "x", "z"}));
  EXPECT_EQ(ds.observations()[0], (Observation{{1, 0, 2}, 0}));
  EXPECT_EQ(ds.observations()[1], (Observation{{2, 1}, 1}));

  std::istringstream bad("{\"set\": [\"x\"], \"winner\": \"x\"}\n{oops}\n");
  EXPECT_THROW(Ingest(bad, InputFormat::kJsonLines), ValidationError);
  std::istringstream broken("{\"set\": [\"x\", \"y\"], \"winner\": \"x\"}\n{oops\n");
  try {
    Ingest(broken, InputFormat::kJsonLines);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(IngestTest, CsvRoundTrip) {
  std::istringstream in("b,a,b,c\nc,c,a\n");
  const auto ds = Ingest(in, InputFormat::kCsv).dataset;
  std::ostringstream out;
  WriteCsv(ds, out);
  std::istringstream again(out.str());
  EXPECT_EQ(Ingest(again, InputFormat::kCsv).dataset, ds);
}

TEST(DatasetTest, ValidatesIndices) {
  EXPECT_THROW(Dataset::Unlabeled(2, {{{0, 2}, 0}}), ValidationError);
  EXPECT_THROW(Dataset::Unlabeled(3, {{{0, 1}, 2}}), ValidationError);
  EXPECT_THROW(Dataset({"a", "a"}, {}), ValidationError);
}

TEST(WeightedAdjacencyTest, HandExample) {
  const auto ds = PairsDataset(3, {{0, 1}, {0, 1, 2}});
  const auto a = BuildWeightedAdjacency(ds, WeightFunction::Unit());
  EXPECT_DOUBLE_EQ(a.entries(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(a.entries(0, 2), 1.5);
  EXPECT_DOUBLE_EQ(a.entries(1, 2), 1.5);
  EXPECT_DOUBLE_EQ(a.entries(2, 1), 1.5);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.entries(i, i), 0.0);
}

TEST(WeightedAdjacencyTest, DoubleRoundRobinQuarterWeight) {
  for (int n : {4, 7, 20}) {
    const auto a =
        BuildWeightedAdjacency(RoundRobin(n, 2), WeightFunction::Constant(0.25));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) EXPECT_NEAR(a.entries(i, j), 1.0 / (2 * (n - 1)), 1e-14);
      }
    }
  }
}

TEST(WeightedAdjacencyTest, SinglePair) {
  const auto a =
      BuildWeightedAdjacency(PairsDataset(2, {{0, 1}}), WeightFunction::Unit());
  EXPECT_DOUBLE_EQ(a.entries(0, 1), 2.0);
}

TEST(WeightedAdjacencyTest, EmptyDatasetRejected) {
  EXPECT_THROW(BuildWeightedAdjacency(Dataset::Unlabeled(3, {}),
                                      WeightFunction::Unit()),
               ValidationError);
}

TEST(WeightFunctionTest, Parse) {
  EXPECT_DOUBLE_EQ(WeightFunction::Parse("1")(5), 1.0);
  EXPECT_DOUBLE_EQ(WeightFunction::Parse("const:0.25")(3), 0.25);
  EXPECT_DOUBLE_EQ(WeightFunction::Parse("inv-k2")(4), 1.0 / 16);
  EXPECT_DOUBLE_EQ(WeightFunction::Parse("wstar:luce:beta=1")(3),
                   WeightStar(NoiseModel::DoubleExponential(1.0), 3));
  EXPECT_THROW(WeightFunction::Parse("const:x"), ValidationError);
  EXPECT_THROW(WeightFunction::Parse("const:-1"), ValidationError);
  EXPECT_THROW(WeightFunction::Parse("square"), ValidationError);
}

WeightedAdjacency FromEdges(int n,
                            const std::vector<std::tuple<int, int, double>>& e) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j, w] : e) a(i, j) = a(j, i) = w;
  return {a};
}

TEST(SpectrumTest, CompleteGraph) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(4, 4);
  a.diagonal().setZero();
  const auto s = Spectrum({a});
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], 4.0, 1e-12);
  EXPECT_NEAR(s.fiedler, 4.0, 1e-12);
}

TEST(SpectrumTest, PathGraph) {
  const auto s = Spectrum(FromEdges(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[2], 3.0, 1e-12);
}

TEST(SpectrumTest, DisconnectedEdges) {
  EXPECT_NEAR(FiedlerValue(FromEdges(4, {{0, 1, 1.0}, {2, 3, 1.0}})), 0.0,
              1e-12);
}

TEST(SpectrumTest, EqualPairsSpectrum) {
  // Each pair compared equally often: lambda_2 = ... = lambda_n.
  const int n = 9;
  const double a = 0.7;
  const auto adj = BuildWeightedAdjacency(RoundRobin(n, 1),
                                          WeightFunction::Constant(a));
  const auto s = Spectrum(adj);
  const double expected = s.eigenvalues[1];
  for (int i = 1; i < n; ++i) EXPECT_NEAR(s.eigenvalues[i], expected, 1e-9);
  // The common value is n times the common entry.
  EXPECT_NEAR(expected, n * adj.entries(0, 1), 1e-9);
}

TEST(SpectrumTest, TooManyItemsRejected) {
  WeightedAdjacency big{Eigen::MatrixXd::Zero(kMaxDenseItems + 1,
                                              kMaxDenseItems + 1)};
  EXPECT_THROW(Spectrum(big), ValidationError);
}

TEST(PrefixCurveTest, PremierLeagueSchedule) {
  const auto ds = RoundRobin(20, 2);
  const auto w = WeightFunction::InverseSquare();
  const auto curve = FiedlerPrefixCurve(ds, w, 190);
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[0].prefix_m, 190);
  EXPECT_EQ(curve[1].prefix_m, 380);
  EXPECT_NEAR(curve[0].fiedler, 10.0 / 38.0, 1e-10);
  EXPECT_NEAR(curve[1].fiedler, 20.0 / 38.0, 1e-10);
  // The last point is the dataset's own Fiedler value.
  EXPECT_NEAR(curve[1].fiedler, FiedlerValue(BuildWeightedAdjacency(ds, w)),
              1e-12);
  // Rescaled per prefix, one full round robin already reaches 20/38.
  const auto rescaled =
      FiedlerPrefixCurve(ds, w, 190, CurveNormalization::kPrefix);
  EXPECT_NEAR(rescaled[0].fiedler, 20.0 / 38.0, 1e-10);
  EXPECT_NEAR(rescaled[1].fiedler, 20.0 / 38.0, 1e-10);
}

TEST(PrefixCurveTest, StepsAndLastPoint) {
  const auto ds = RoundRobin(5, 1);  // m = 10
  const auto curve = FiedlerPrefixCurve(ds, WeightFunction::Unit(), 3,
                                        CurveNormalization::kPrefix);
  std::vector<int> prefixes;
  for (const auto& p : curve) prefixes.push_back(p.prefix_m);
  EXPECT_EQ(prefixes, (std::vector<int>{3, 6, 9, 10}));
  const auto full = FiedlerPrefixCurve(ds, WeightFunction::Unit(), 3);
  for (size_t i = 0; i < full.size(); ++i) {
    EXPECT_NEAR(full[i].fiedler * ds.m() / full[i].prefix_m,
                curve[i].fiedler, 1e-12);
  }
  EXPECT_EQ(FiedlerPrefixCurve(ds, WeightFunction::Unit(), 50).size(), 1u);
  for (const auto& p : curve) {
    EXPECT_NEAR(p.fiedler,
                FiedlerValue(BuildWeightedAdjacency(ds.Prefix(p.prefix_m),
                                                    WeightFunction::Unit())),
                1e-12);
  }
  EXPECT_TRUE(FiedlerPrefixCurve(Dataset::Unlabeled(3, {}),
                                 WeightFunction::Unit(), 1)
                  .empty());
  EXPECT_THROW(FiedlerPrefixCurve(ds, WeightFunction::Unit(), 0),
               ValidationError);
  std::ostringstream out;
  WriteCurveTsv(curve, out);
  EXPECT_EQ(out.str().substr(0, 16), "prefix_m\tfiedler");
}

TEST(UnbiasedTest, PairsUnitWeight) {
  const auto a = ExpectedAdjacencyUnbiased(10, {{2, 1.0}},
                                           WeightFunction::Unit());
  EXPECT_NEAR(a.entries(0, 1), 2.0 / 9.0, 1e-14);
  EXPECT_EQ(a.entries(3, 3), 0.0);
  const double fiedler = UnbiasedFiedler(10, {{2, 1.0}}, WeightFunction::Unit());
  EXPECT_NEAR(fiedler, 20.0 / 9.0, 1e-12);
  EXPECT_NEAR(FiedlerValue(a), fiedler, 1e-10);
}

TEST(UnbiasedTest, TriplesInverseSquare) {
  const auto w = WeightFunction::InverseSquare();
  const double fiedler = UnbiasedFiedler(10, {{3, 1.0}}, w);
  EXPECT_NEAR(fiedler, 20.0 / 27.0, 1e-12);
  EXPECT_NEAR(FiedlerValue(ExpectedAdjacencyUnbiased(10, {{3, 1.0}}, w)),
              fiedler, 1e-10);
}

TEST(UnbiasedTest, TwoItems) {
  const auto a = ExpectedAdjacencyUnbiased(2, {{2, 1.0}},
                                           WeightFunction::Unit());
  EXPECT_NEAR(a.entries(0, 1), 2.0, 1e-14);
  EXPECT_NEAR(FiedlerValue(a), 4.0, 1e-12);
}

TEST(UnbiasedTest, MatchesLargeSampleAverage) {
  // Uniform random 3-subsets of 6 items: the empirical matrix converges to
  // the expected one.
  const int n = 6;
  std::vector<std::vector<int>> sets;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) sets.push_back({a, b, c});
  const auto empirical = BuildWeightedAdjacency(PairsDataset(n, sets),
                                                WeightFunction::InverseSquare());
  const auto expected = ExpectedAdjacencyUnbiased(
      n, {{3, 1.0}}, WeightFunction::InverseSquare());
  EXPECT_LT((empirical.entries - expected.entries).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(UnbiasedTest, MixMustSumToOne) {
  EXPECT_THROW(UnbiasedFiedler(5, {{2, 0.5}}, WeightFunction::Unit()),
               ValidationError);
  EXPECT_THROW(UnbiasedFiedler(5, {{6, 1.0}}, WeightFunction::Unit()),
               ValidationError);
  EXPECT_NO_THROW(
      UnbiasedFiedler(5, {{2, 0.5}, {3, 0.5 + 1e-10}}, WeightFunction::Unit()));
}

TEST(ConnectivityTest, Examples) {
  const auto w = WeightFunction::Unit();
  EXPECT_EQ(ConnectivityThreshold(PairsDataset(3, {{0, 1}, {1, 2}, {0, 2}}), w),
            2);
  EXPECT_EQ(ConnectivityThreshold(PairsDataset(4, {{0, 1}, {1, 0}}), w),
            std::nullopt);
  EXPECT_EQ(ConnectivityThreshold(PairsDataset(2, {{0, 1}}), w), 1);
}

TEST(ConnectivityTest, ZeroWeightEdgesDoNotConnect) {
  const WeightFunction pairs_only("pairs", [](int k) { return k == 2 ? 1.0 : 0.0; });
  const auto ds = PairsDataset(3, {{0, 1, 2}, {0, 1}, {1, 2}});
  EXPECT_EQ(ConnectivityThreshold(ds, pairs_only), 3);
  EXPECT_EQ(ConnectivityThreshold(ds, WeightFunction::Unit()), 1);
}

Dataset RandomSparse(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> count(1, n);
  std::uniform_int_distribution<int> size(2, std::min(n, 4));
  std::vector<std::vector<int>> sets;
  const int m = count(rng);
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  for (int t = 0; t < m; ++t) {
    std::shuffle(items.begin(), items.end(), rng);
    sets.emplace_back(items.begin(), items.begin() + size(rng));
  }
  return PairsDataset(n, sets);
}

TEST(InvariantTest, FiedlerPositiveIffConnected) {
  std::mt19937_64 rng(7);
  int connected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 10;
    const auto ds = RandomSparse(rng, n);
    const auto adj = BuildWeightedAdjacency(ds, WeightFunction::Unit());
    const bool positive = FiedlerValue(adj) > kFiedlerPositiveThreshold;
    EXPECT_EQ(positive, IsConnected(ds)) << "trial " << trial;
    connected += IsConnected(ds);
  }
  // Both outcomes are exercised.
  EXPECT_GT(connected, 20);
  EXPECT_LT(connected, 180);
}

TEST(InvariantTest, LaplacianRowSumsAndLinearity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = RandomSparse(rng, 8);
    const auto unit = BuildWeightedAdjacency(ds, WeightFunction::Unit());
    const auto scaled = BuildWeightedAdjacency(ds, WeightFunction::Constant(2.5));
    EXPECT_LT((scaled.entries - 2.5 * unit.entries).cwiseAbs().maxCoeff(),
              1e-12);
    const auto optimal = BuildWeightedAdjacency(
        ds, WeightFunction::Optimal(NoiseModel::Gaussian(1.0)));
    for (const auto* a : {&unit, &scaled, &optimal}) {
      EXPECT_LT(Laplacian(*a).rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_TRUE(a->entries.isApprox(a->entries.transpose()));
    }
  }
}

TEST(InvariantTest, FiedlerMonotoneUnderEntryIncrease) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 6;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        a(i, j) = a(j, i) = unif(rng) < 0.5 ? unif(rng) : 0.0;
    const double before = FiedlerValue({a});
    const int i = trial % n, j = (trial / n + i + 1) % n;
    const double bump = unif(rng);
    a(i, j) += bump;
    a(j, i) += bump;
    EXPECT_GE(FiedlerValue({a}), before - 1e-9);
  }
}

}  // namespace
}  // namespace thurstone
