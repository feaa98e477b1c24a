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

#include "thurstone/noise.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"
#include "thurstone/errors.h"

namespace thurstone {
namespace {

using ::thurstone::testing::CentralDifference;
using ::thurstone::testing::RelClose;

constexpr double kEulerGamma = std::numbers::egamma;

std::vector<NoiseModel> AllModels() {
  return {NoiseModel::Gaussian(1.0), NoiseModel::DoubleExponential(1.0),
          NoiseModel::Laplace(1.0), NoiseModel::Uniform(1.0)};
}

double StdNormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

TEST(NoiseModelTest, CdfExamples) {
  EXPECT_DOUBLE_EQ(NoiseModel::Uniform(1.0).Cdf(0.0), 0.5);
  EXPECT_DOUBLE_EQ(NoiseModel::Laplace(1.0).Cdf(0.0), 0.5);
  EXPECT_NEAR(NoiseModel::DoubleExponential(1.0).Cdf(-kEulerGamma),
              std::exp(-1.0), 1e-15);
}

TEST(NoiseModelTest, PdfExamples) {
  EXPECT_DOUBLE_EQ(NoiseModel::Uniform(2.0).Pdf(0.0), 0.25);
  EXPECT_NEAR(NoiseModel::Gaussian(1.0).Pdf(0.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(NoiseModel::Laplace(1.0).Pdf(1.0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(NoiseModel::Uniform(1.0).PdfDeriv(1.0), 0.0);
  EXPECT_DOUBLE_EQ(NoiseModel::Uniform(1.0).PdfDeriv(-1.0), 0.0);
}

TEST(NoiseModelTest, DensityIntegratesToOneWithZeroMeanAndStatedVariance) {
  for (const auto& model :
       {NoiseModel::Gaussian(0.7), NoiseModel::DoubleExponential(1.3),
        NoiseModel::Laplace(0.5), NoiseModel::Uniform(2.0)}) {
    std::vector<double> knots = model.Knots();
    knots.push_back(model.SupportLow());
    knots.push_back(model.SupportHigh());
    std::sort(knots.begin(), knots.end());
    auto moments = [&](double z, double* out) {
      const double f = model.Pdf(z);
      out[0] = f;
      out[1] = z * f;
      out[2] = z * z * f;
    };
    const auto res = IntegrateVector(moments, 3, knots);
    EXPECT_NEAR(res.value[0], 1.0, 1e-12) << model.Spec();
    EXPECT_NEAR(res.value[1], 0.0, 1e-10) << model.Spec();
    EXPECT_NEAR(res.value[2], model.Variance(), 1e-9) << model.Spec();
  }
}

TEST(NoiseModelTest, CdfIsMonotoneWithLimitsAndMatchesQuantile) {
  for (const auto& model : AllModels()) {
    double prev = 0.0;
    for (double x = -30.0; x <= 30.0; x += 0.01) {
      const double c = model.Cdf(x);
      EXPECT_GE(c, prev);
      prev = c;
    }
    EXPECT_NEAR(model.Cdf(-30.0), 0.0, 1e-12);
    EXPECT_NEAR(model.Cdf(30.0), 1.0, 1e-12);
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.99}) {
      EXPECT_NEAR(model.Cdf(model.Quantile(u)), u, 1e-12) << model.Spec();
    }
  }
}

TEST(NoiseModelTest, UnitVarianceScales) {
  for (auto kind : {NoiseKind::kGaussian, NoiseKind::kDoubleExponential,
                    NoiseKind::kLaplace, NoiseKind::kUniform}) {
    EXPECT_NEAR(NoiseModel::UnitVariance(kind).Variance(), 1.0, 1e-15);
  }
}

TEST(NoiseModelTest, ParsesSpecStrings) {
  EXPECT_EQ(NoiseModel::Parse("gumbel:beta=1"),
            NoiseModel::DoubleExponential(1.0));
  EXPECT_EQ(NoiseModel::Parse("gaussian:sigma=1"), NoiseModel::Gaussian(1.0));
  EXPECT_EQ(NoiseModel::Parse("laplace:beta=0.5"), NoiseModel::Laplace(0.5));
  EXPECT_EQ(NoiseModel::Parse("uniform:a=1"), NoiseModel::Uniform(1.0));
  EXPECT_EQ(NoiseModel::Parse("uniform:unit-variance"),
            NoiseModel::Uniform(std::sqrt(3.0)));
  const auto model = NoiseModel::Parse("laplace:beta=0.25");
  EXPECT_EQ(NoiseModel::Parse(model.Spec()), model);
  EXPECT_THROW(NoiseModel::Parse("cauchy:gamma=1"), ValidationError);
  EXPECT_THROW(NoiseModel::Parse("gaussian:beta=1"), ValidationError);
  EXPECT_THROW(NoiseModel::Parse("gaussian:sigma=-1"), ValidationError);
  EXPECT_THROW(NoiseModel::Parse("gaussian:sigma=1x"), ValidationError);
  EXPECT_THROW(NoiseModel::Parse("gaussian"), ValidationError);
}

TEST(ChoiceProbTest, ZeroDifferencesGiveOneOverK) {
  for (const auto& model : AllModels()) {
    for (int k = 2; k <= 6; ++k) {
      const std::vector<double> x(k - 1, 0.0);
      EXPECT_NEAR(ChoiceProb(model, x), 1.0 / k, 1e-10) << model.Spec();
    }
  }
}

TEST(ChoiceProbTest, LuceClosedForm) {
  const std::vector<double> x = {std::log(3.0)};
  EXPECT_NEAR(ChoiceProb(NoiseModel::DoubleExponential(1.0), x), 0.75, 1e-15);
}

TEST(ChoiceProbTest, GaussianPairIsConvolutionOfTwoNormals) {
  // X1 - X2 ~ N(0, 2 sigma^2), so p_2(x) = Phi(x / (sqrt(2) sigma)).
  const auto model = NoiseModel::Gaussian(1.0);
  const std::vector<double> half = {0.5};
  EXPECT_NEAR(ChoiceProb(model, half), StdNormalCdf(0.5 / std::sqrt(2.0)),
              1e-10);
  EXPECT_NEAR(ChoiceProb(model, half), 0.6382, 5e-5);
  const auto wide = NoiseModel::Gaussian(1.7);
  for (double x : {-3.0, -1.0, 0.2, 2.5}) {
    const std::vector<double> v = {x};
    EXPECT_NEAR(ChoiceProb(wide, v), StdNormalCdf(x / (std::sqrt(2.0) * 1.7)),
                1e-10);
  }

  // Brute-force check of the same value by simulation.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int draws = 200000;
  int wins = 0;
  for (int i = 0; i < draws; ++i) wins += (0.5 + noise(rng) > noise(rng));
  const double p = ChoiceProb(model, half);
  EXPECT_NEAR(static_cast<double>(wins) / draws, p,
              4.0 * std::sqrt(p * (1 - p) / draws));
}

TEST(ChoiceProbTest, UniformPairMatchesTriangularDifference) {
  // X1 - X2 is triangular on [-2a, 2a].
  const double a = 1.3;
  const auto model = NoiseModel::Uniform(a);
  for (double x : {-3.0, -2.0, -0.4, 0.0, 0.9, 2.5, 3.0}) {
    double expected;
    if (x <= -2 * a) {
      expected = 0.0;
    } else if (x <= 0) {
      expected = (2 * a + x) * (2 * a + x) / (8 * a * a);
    } else if (x < 2 * a) {
      expected = 1.0 - (2 * a - x) * (2 * a - x) / (8 * a * a);
    } else {
      expected = 1.0;
    }
    const std::vector<double> v = {x};
    EXPECT_NEAR(ChoiceProb(model, v), expected, 1e-13) << x;
  }
}

TEST(ChoiceProbTest, ProbabilitiesOverASetSumToOne) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> strength(-2.0, 2.0);
  for (const auto& model : AllModels()) {
    for (int k = 2; k <= 6; ++k) {
      std::vector<double> theta(k);
      for (double& t : theta) t = strength(rng);
      double total = 0.0;
      for (int i = 0; i < k; ++i) {
        std::vector<double> x;
        for (int j = 0; j < k; ++j) {
          if (j != i) x.push_back(theta[i] - theta[j]);
        }
        total += ChoiceProb(model, x);
      }
      EXPECT_NEAR(total, 1.0, 1e-8) << model.Spec() << " k=" << k;
    }
  }
}

TEST(ChoiceProbTest, SymmetricInEntriesAndIncreasing) {
  const std::vector<double> x = {0.3, -0.7, 1.1};
  const std::vector<double> permuted = {1.1, 0.3, -0.7};
  for (const auto& model : AllModels()) {
    EXPECT_NEAR(ChoiceProb(model, x), ChoiceProb(model, permuted), 1e-12);
    const double base = ChoiceProb(model, x);
    for (size_t v = 0; v < x.size(); ++v) {
      auto bumped = x;
      bumped[v] += 0.1;
      EXPECT_GT(ChoiceProb(model, bumped), base) << model.Spec();
    }
  }
}

TEST(ChoiceProbGradTest, Examples) {
  const std::vector<double> zeros2 = {0.0, 0.0};
  for (double g : ChoiceProbGrad(NoiseModel::DoubleExponential(1.0), zeros2)) {
    EXPECT_NEAR(g, 1.0 / 9.0, 1e-15);
  }
  const std::vector<double> zero = {0.0};
  EXPECT_NEAR(ChoiceProbGrad(NoiseModel::Uniform(1.0), zero)[0], 0.5, 1e-13);
  // int phi(z)^2 dz = 1 / (2 sqrt(pi)).
  EXPECT_NEAR(ChoiceProbGrad(NoiseModel::Gaussian(1.0), zero)[0],
              1.0 / (2.0 * std::sqrt(M_PI)), 1e-11);
}

TEST(ChoiceProbGradTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (const auto& model : AllModels()) {
    for (int k : {2, 3, 5}) {
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(k - 1);
        for (double& v : x) v = coord(rng);
        const auto grad = ChoiceProbGrad(model, x);
        const auto fd = CentralDifference(
            [&](const std::vector<double>& y) { return ChoiceProb(model, y); },
            x);
        for (int v = 0; v < k - 1; ++v) {
          ASSERT_TRUE(RelClose(grad[v], fd[v], 1e-5))
              << model.Spec() << " k=" << k << " v=" << v << " grad "
              << grad[v] << " fd " << fd[v];
        }
      }
    }
  }
}

TEST(ChoiceProbHessianTest, MatchesDifferencedGradient) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (const auto& model : AllModels()) {
    for (int k : {2, 3, 4}) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(k - 1);
        for (double& v : x) v = coord(rng);
        const auto h = ChoiceProbHessian(model, x);
        for (int u = 0; u < k - 1; ++u) {
          const auto fd = CentralDifference(
              [&](const std::vector<double>& y) {
                return ChoiceProbGrad(model, y)[u];
              },
              x, 1e-5);
          for (int v = 0; v < k - 1; ++v) {
            EXPECT_TRUE(RelClose(h(u, v), fd[v], 1e-4, 1e-6))
                << model.Spec() << " k=" << k << " (" << u << "," << v
                << ") " << h(u, v) << " vs " << fd[v];
          }
        }
      }
    }
  }
}

TEST(Dpk0Test, TableOneExamples) {
  EXPECT_NEAR(Dpk0(NoiseModel::DoubleExponential(1.0), 3), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(Dpk0(NoiseModel::Uniform(1.0), 4), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(Dpk0(NoiseModel::Laplace(1.0), 2), 0.25, 1e-15);
}

TEST(Dpk0Test, ClosedFormsMatchQuadrature) {
  for (const auto& model :
       {NoiseModel::DoubleExponential(1.0), NoiseModel::DoubleExponential(0.6),
        NoiseModel::Laplace(1.0), NoiseModel::Laplace(2.5),
        NoiseModel::Uniform(1.0), NoiseModel::Uniform(0.3)}) {
    for (int k = 2; k <= 10; ++k) {
      EXPECT_TRUE(RelClose(Dpk0(model, k), Dpk0Quadrature(model, k), 1e-8, 0))
          << model.Spec() << " k=" << k;
    }
  }
}

TEST(Dpk0Test, EqualsGradientOfChoiceProbAtZero) {
  for (const auto& model : AllModels()) {
    for (int k : {2, 3, 6}) {
      const std::vector<double> zeros(k - 1, 0.0);
      EXPECT_TRUE(RelClose(ChoiceProbGrad(model, zeros)[0], Dpk0(model, k),
                           1e-8, 0))
          << model.Spec() << " k=" << k;
    }
  }
}

TEST(Dpk0Test, RejectsOutOfRangeK) {
  EXPECT_THROW(Dpk0(NoiseModel::Uniform(1.0), 1), ValidationError);
  EXPECT_THROW(Dpk0(NoiseModel::Uniform(1.0), kMaxClosedFormK + 1),
               ValidationError);
  EXPECT_THROW(Dpk0Quadrature(NoiseModel::Uniform(1.0), kMaxQuadratureK + 1),
               ValidationError);
  EXPECT_NO_THROW(Dpk0(NoiseModel::Laplace(1.0), kMaxClosedFormK));
}

TEST(GammaTest, TableOneExamples) {
  EXPECT_NEAR(GammaFk(NoiseModel::DoubleExponential(1.0), 2), 2.0, 1e-14);
  EXPECT_NEAR(GammaFk(NoiseModel::Uniform(1.0), 2), 0.5, 1e-14);
  EXPECT_NEAR(GammaFk(NoiseModel::Laplace(1.0), 2), 2.0, 1e-14);
}

TEST(GammaTest, TableOneClosedFormsAcrossK) {
  const double beta = 0.8, a = 1.7;
  for (int k = 2; k <= 12; ++k) {
    const double kk = k;
    EXPECT_NEAR(GammaFk(NoiseModel::DoubleExponential(beta), k),
                beta * beta * kk / (kk - 1), 1e-12);
    const double lap = 1.0 - std::pow(0.5, k - 1);
    EXPECT_NEAR(GammaFk(NoiseModel::Laplace(beta), k),
                beta * beta * (kk - 1) / (kk * lap * lap), 1e-12);
    EXPECT_NEAR(GammaFk(NoiseModel::Uniform(a), k),
                4 * a * a * (kk - 1) / (kk * kk * kk), 1e-12);
  }
}

TEST(GammaTest, IdentityWithWeightStar) {
  for (const auto& model : AllModels()) {
    for (int k = 2; k <= 8; ++k) {
      EXPECT_TRUE(RelClose(1.0 / GammaFk(model, k),
                           k * (k - 1) * WeightStar(model, k), 1e-14, 0));
    }
  }
}

TEST(GammaTest, OrderBoundsOverK) {
  // gamma_{F,k} = O(1) and Omega(1/k^2), in units of scale^2.
  for (const auto& model :
       {NoiseModel::Gaussian(1.3), NoiseModel::DoubleExponential(0.7),
        NoiseModel::Laplace(2.0), NoiseModel::Uniform(0.5)}) {
    const double s2 = model.scale() * model.scale();
    for (int k = 2; k <= 50; ++k) {
      const double gamma = GammaFk(model, k);
      EXPECT_GE(gamma * k * k / s2, 1.0) << model.Spec() << " k=" << k;
      EXPECT_LE(gamma / s2, 2.0 + 1e-12) << model.Spec() << " k=" << k;
    }
  }
}

TEST(Dpk0FormsTest, Examples) {
  const auto uniform = Dpk0AllForms(NoiseModel::Uniform(1.0), 3);
  EXPECT_NEAR(uniform.direct, 0.25, 1e-13);
  ASSERT_TRUE(uniform.boundary_form.has_value());
  EXPECT_NEAR(*uniform.boundary_form, 0.25, 1e-13);

  const auto laplace = Dpk0AllForms(NoiseModel::Laplace(1.0), 2);
  ASSERT_TRUE(laplace.even_form.has_value());
  EXPECT_NEAR(*laplace.even_form, 0.25, 1e-12);

  const auto gauss = Dpk0AllForms(NoiseModel::Gaussian(1.0), 2);
  ASSERT_TRUE(gauss.even_form.has_value());
  EXPECT_NEAR(gauss.direct, 1.0 / (2.0 * std::sqrt(M_PI)), 1e-12);
  EXPECT_NEAR(*gauss.even_form, gauss.direct, 1e-12);
}

TEST(Dpk0FormsTest, AllApplicableFormsAgree) {
  for (const auto& model : AllModels()) {
    for (int k = 2; k <= 10; ++k) {
      const double ref = Dpk0(model, k);
      const auto forms = Dpk0AllForms(model, k);
      EXPECT_TRUE(RelClose(forms.direct, ref, 1e-7, 0)) << model.Spec();
      EXPECT_TRUE(RelClose(forms.maxform, ref, 1e-7, 0))
          << model.Spec() << " k=" << k << " " << forms.maxform << " vs "
          << ref;
      if (forms.boundary_form) {
        EXPECT_TRUE(RelClose(*forms.boundary_form, ref, 1e-7, 0));
      }
      if (forms.even_form) {
        EXPECT_TRUE(RelClose(*forms.even_form, ref, 1e-7, 0)) << model.Spec();
      }
    }
  }
}

TEST(Dpk0FormsTest, UnsupportedFormsThrow) {
  EXPECT_THROW(Dpk0ByForm(NoiseModel::Gaussian(1.0), 3, Dpk0Form::kBoundary),
               UnsupportedError);
  EXPECT_THROW(
      Dpk0ByForm(NoiseModel::DoubleExponential(1.0), 3, Dpk0Form::kEven),
      UnsupportedError);
  const auto luce = Dpk0AllForms(NoiseModel::DoubleExponential(1.0), 3);
  EXPECT_FALSE(luce.even_form.has_value());
  EXPECT_FALSE(luce.boundary_form.has_value());
}

}  // namespace
}  // namespace thurstone
