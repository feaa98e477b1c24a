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

#ifndef THURSTONE_NOISE_H_
#define THURSTONE_NOISE_H_

// Noise distributions of Thurstone choice models and the choice-probability
// function p_k(x) = P[item with strength advantage x_v over each rival wins].

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "thurstone/quadrature.h"

namespace thurstone {

enum class NoiseKind { kGaussian, kDoubleExponential, kLaplace, kUniform };

// A zero-mean noise distribution. `scale` is sigma (Gaussian), beta
// (double-exponential, Laplace) or the half-width a (uniform).
class NoiseModel {
 public:
  NoiseModel(NoiseKind kind, double scale);

  static NoiseModel Gaussian(double sigma) {
    return {NoiseKind::kGaussian, sigma};
  }
  static NoiseModel DoubleExponential(double beta) {
    return {NoiseKind::kDoubleExponential, beta};
  }
  static NoiseModel Laplace(double beta) { return {NoiseKind::kLaplace, beta}; }
  static NoiseModel Uniform(double a) { return {NoiseKind::kUniform, a}; }
  static NoiseModel UnitVariance(NoiseKind kind);

  // Parses `<kind>:<param>=<value>` or `<kind>:unit-variance`, with kind one
  // of gaussian, gumbel (alias double-exponential), laplace, uniform.
  static NoiseModel Parse(std::string_view spec);
  std::string Spec() const;

  NoiseKind kind() const { return kind_; }
  double scale() const { return scale_; }
  bool is_luce() const { return kind_ == NoiseKind::kDoubleExponential; }
  bool has_even_density() const { return !is_luce(); }
  bool has_compact_support() const { return kind_ == NoiseKind::kUniform; }

  double Cdf(double x) const;
  double Pdf(double x) const;
  // Derivative of the density. Zero at the uniform boundary and at the
  // Laplace cusp.
  double PdfDeriv(double x) const;
  double Quantile(double u) const;
  double Variance() const;
  double StdDev() const;

  // Finite integration window outside which the density is negligible
  // (below 1e-16 relative) or zero, and the density's non-smooth points.
  double SupportLow() const;
  double SupportHigh() const;
  std::vector<double> Knots() const;

 private:
  NoiseKind kind_;
  double scale_;
};

bool operator==(const NoiseModel& l, const NoiseModel& r);

// p_k(x) for x in R^{k-1}. Closed form for the double-exponential model,
// adaptive quadrature otherwise.
double ChoiceProb(const NoiseModel& model, std::span<const double> x,
                  const QuadratureOptions& options = {});

struct ChoiceProbWithGrad {
  double prob;
  std::vector<double> grad;  // d p_k / d x_v
};

ChoiceProbWithGrad ChoiceProbAndGrad(const NoiseModel& model,
                                     std::span<const double> x,
                                     const QuadratureOptions& options = {});

std::vector<double> ChoiceProbGrad(const NoiseModel& model,
                                   std::span<const double> x,
                                   const QuadratureOptions& options = {});

// Full (k-1)x(k-1) Hessian of p_k.
Eigen::MatrixXd ChoiceProbHessian(const NoiseModel& model,
                                  std::span<const double> x,
                                  const QuadratureOptions& options = {});

// Largest k accepted by closed forms and by quadrature forms.
inline constexpr int kMaxClosedFormK = 1000000;
inline constexpr int kMaxQuadratureK = 1000;

// d p_k(0) / d x_1 = int f(x)^2 F(x)^{k-2} dx. Closed form where one exists,
// quadrature for the Gaussian.
double Dpk0(const NoiseModel& model, int k);
// The same integral, always by quadrature.
double Dpk0Quadrature(const NoiseModel& model, int k);

// w*(k) = (k dp_k(0)/dx_1)^2 and gamma_{F,k} = 1 / (k(k-1) w*(k)).
double WeightStar(const NoiseModel& model, int k);
double GammaFk(const NoiseModel& model, int k);

enum class Dpk0Form {
  kDirect,    // int f^2 F^{k-2}
  kMaxForm,   // E[f(max of k-1 draws)] / (k-1), via the quantile function
  kBoundary,  // f(a)/(k-1) + E[-f'(max of k draws)]/(k(k-1)); compact support
  kEven,      // int_0^inf f^2 (F^{k-2} + (1-F)^{k-2}); even densities
};

// Throws UnsupportedError for kBoundary on unbounded support and for kEven on
// an asymmetric density.
double Dpk0ByForm(const NoiseModel& model, int k, Dpk0Form form);

struct Dpk0Characterizations {
  double direct;
  double maxform;
  std::optional<double> boundary_form;
  std::optional<double> even_form;
};

Dpk0Characterizations Dpk0AllForms(const NoiseModel& model, int k);

}  // namespace thurstone

#endif  // THURSTONE_NOISE_H_
