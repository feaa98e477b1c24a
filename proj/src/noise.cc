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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "thurstone/errors.h"

namespace thurstone {
namespace {

constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kPi = std::numbers::pi;

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

void CheckK(int k, int cap) {
  if (k < 2) throw ValidationError("set size k must be >= 2");
  if (k > cap) {
    throw ValidationError("set size k = " + std::to_string(k) +
                          " exceeds cap " + std::to_string(cap));
  }
}

// Knots for integrands of the form g(z) * prod_v h(x_v + z): the density's
// own knots, plus every rival's shifted knots and the point -x_v where F
// changes fastest.
std::vector<double> ChoiceKnots(const NoiseModel& model,
                                std::span<const double> x) {
  const double lo = model.SupportLow();
  const double hi = model.SupportHigh();
  std::vector<double> knots = model.Knots();
  std::vector<double> base = knots;
  if (model.has_compact_support()) {
    base.push_back(lo);
    base.push_back(hi);
  }
  base.push_back(0.0);
  for (double xv : x) {
    for (double b : base) knots.push_back(b - xv);
  }
  knots.push_back(lo);
  knots.push_back(hi);
  std::vector<double> out;
  for (double k : knots) {
    if (k >= lo && k <= hi) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ChoiceProbWithGrad LuceProbAndGrad(double beta, std::span<const double> x) {
  // p = 1 / (1 + sum_v exp(-x_v / beta)), evaluated with a max shift.
  double top = 0.0;
  for (double xv : x) top = std::max(top, -xv / beta);
  double denom = std::exp(-top);
  for (double xv : x) denom += std::exp(-xv / beta - top);
  ChoiceProbWithGrad out;
  out.prob = std::exp(-top) / denom;
  out.grad.resize(x.size());
  for (size_t v = 0; v < x.size(); ++v) {
    out.grad[v] = out.prob * std::exp(-x[v] / beta - top) / denom / beta;
  }
  return out;
}

}  // namespace

NoiseModel::NoiseModel(NoiseKind kind, double scale)
    : kind_(kind), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("noise scale must be positive and finite");
  }
}

NoiseModel NoiseModel::UnitVariance(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return Gaussian(1.0);
    case NoiseKind::kDoubleExponential:
      return DoubleExponential(std::sqrt(6.0) / kPi);
    case NoiseKind::kLaplace:
      return Laplace(1.0 / std::sqrt(2.0));
    case NoiseKind::kUniform:
      return Uniform(std::sqrt(3.0));
  }
  throw ValidationError("unknown noise kind");
}

NoiseModel NoiseModel::Parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ValidationError("noise spec '" + std::string(spec) +
                          "' must look like <kind>:<param>=<value>");
  }
  const std::string kind_name = Lower(spec.substr(0, colon));
  const std::string rest = Lower(spec.substr(colon + 1));
  NoiseKind kind;
  std::string param;
  if (kind_name == "gaussian" || kind_name == "normal") {
    kind = NoiseKind::kGaussian;
    param = "sigma";
  } else if (kind_name == "gumbel" || kind_name == "double-exponential" ||
             kind_name == "luce") {
    kind = NoiseKind::kDoubleExponential;
    param = "beta";
  } else if (kind_name == "laplace") {
    kind = NoiseKind::kLaplace;
    param = "beta";
  } else if (kind_name == "uniform") {
    kind = NoiseKind::kUniform;
    param = "a";
  } else {
    throw ValidationError("unknown noise kind '" + kind_name + "'");
  }
  if (rest == "unit-variance") return UnitVariance(kind);
  const auto eq = rest.find('=');
  if (eq == std::string::npos || rest.substr(0, eq) != param) {
    throw ValidationError("noise spec for " + kind_name + " expects " + param +
                          "=<value> or unit-variance");
  }
  const std::string value = rest.substr(eq + 1);
  size_t used = 0;
  double scale = 0.0;
  try {
    scale = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ValidationError("bad noise parameter value '" + value + "'");
  }
  return {kind, scale};
}

std::string NoiseModel::Spec() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case NoiseKind::kGaussian:
      out << "gaussian:sigma=" << scale_;
      break;
    case NoiseKind::kDoubleExponential:
      out << "gumbel:beta=" << scale_;
      break;
    case NoiseKind::kLaplace:
      out << "laplace:beta=" << scale_;
      break;
    case NoiseKind::kUniform:
      out << "uniform:a=" << scale_;
      break;
  }
  return out.str();
}

bool operator==(const NoiseModel& l, const NoiseModel& r) {
  return l.kind() == r.kind() && l.scale() == r.scale();
}

double NoiseModel::Cdf(double x) const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return 0.5 * std::erfc(-x / (s * std::numbers::sqrt2));
    case NoiseKind::kDoubleExponential:
      return std::exp(-std::exp(-(x + s * kEulerGamma) / s));
    case NoiseKind::kLaplace:
      return x < 0.0 ? 0.5 * std::exp(x / s) : 1.0 - 0.5 * std::exp(-x / s);
    case NoiseKind::kUniform:
      if (x <= -s) return 0.0;
      if (x >= s) return 1.0;
      return (x + s) / (2.0 * s);
  }
  return 0.0;
}

double NoiseModel::Pdf(double x) const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return std::exp(-0.5 * (x / s) * (x / s)) /
             (s * std::sqrt(2.0 * kPi));
    case NoiseKind::kDoubleExponential: {
      const double e = std::exp(-(x + s * kEulerGamma) / s);
      return e * std::exp(-e) / s;
    }
    case NoiseKind::kLaplace:
      return std::exp(-std::abs(x) / s) / (2.0 * s);
    case NoiseKind::kUniform:
      return (x >= -s && x <= s) ? 1.0 / (2.0 * s) : 0.0;
  }
  return 0.0;
}

double NoiseModel::PdfDeriv(double x) const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return -x / (s * s) * Pdf(x);
    case NoiseKind::kDoubleExponential: {
      const double e = std::exp(-(x + s * kEulerGamma) / s);
      return Pdf(x) * (e - 1.0) / s;
    }
    case NoiseKind::kLaplace:
      if (x == 0.0) return 0.0;
      return (x > 0.0 ? -1.0 : 1.0) * Pdf(x) / s;
    case NoiseKind::kUniform:
      return 0.0;
  }
  return 0.0;
}

double NoiseModel::Quantile(double u) const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      if (u <= 0.0) return -std::numeric_limits<double>::infinity();
      if (u >= 1.0) return std::numeric_limits<double>::infinity();
      return -s * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
    case NoiseKind::kDoubleExponential:
      return -s * std::log(-std::log(u)) - s * kEulerGamma;
    case NoiseKind::kLaplace:
      return u < 0.5 ? s * std::log(2.0 * u) : -s * std::log(2.0 * (1.0 - u));
    case NoiseKind::kUniform:
      return s * (2.0 * u - 1.0);
  }
  return 0.0;
}

double NoiseModel::Variance() const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return s * s;
    case NoiseKind::kDoubleExponential:
      return kPi * kPi * s * s / 6.0;
    case NoiseKind::kLaplace:
      return 2.0 * s * s;
    case NoiseKind::kUniform:
      return s * s / 3.0;
  }
  return 0.0;
}

double NoiseModel::StdDev() const { return std::sqrt(Variance()); }

double NoiseModel::SupportLow() const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return -12.0 * s;
    case NoiseKind::kDoubleExponential:
      return s * (-4.5 - kEulerGamma);
    case NoiseKind::kLaplace:
      return -40.0 * s;
    case NoiseKind::kUniform:
      return -s;
  }
  return 0.0;
}

double NoiseModel::SupportHigh() const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return 12.0 * s;
    case NoiseKind::kDoubleExponential:
      return s * (40.0 - kEulerGamma);
    case NoiseKind::kLaplace:
      return 40.0 * s;
    case NoiseKind::kUniform:
      return s;
  }
  return 0.0;
}

std::vector<double> NoiseModel::Knots() const {
  const double s = scale_;
  switch (kind_) {
    case NoiseKind::kGaussian:
      return {-8 * s, -4 * s, -2 * s, 0.0, 2 * s, 4 * s, 8 * s};
    case NoiseKind::kDoubleExponential: {
      std::vector<double> knots;
      for (double u : {-2.0, 0.0, 2.0, 5.0, 10.0, 20.0}) {
        knots.push_back(s * (u - kEulerGamma));
      }
      return knots;
    }
    case NoiseKind::kLaplace:
      return {-20 * s, -10 * s, -4 * s, 0.0, 4 * s, 10 * s, 20 * s};
    case NoiseKind::kUniform:
      return {};
  }
  return {};
}

ChoiceProbWithGrad ChoiceProbAndGrad(const NoiseModel& model,
                                     std::span<const double> x,
                                     const QuadratureOptions& options) {
  if (x.empty()) throw ValidationError("difference vector must be non-empty");
  if (model.is_luce()) return LuceProbAndGrad(model.scale(), x);

  const int rivals = static_cast<int>(x.size());
  std::vector<double> cdf(rivals), pdf(rivals), prefix(rivals + 1),
      suffix(rivals + 1);
  auto integrand = [&](double z, double* out) {
    const double fz = model.Pdf(z);
    for (int v = 0; v < rivals; ++v) {
      cdf[v] = model.Cdf(x[v] + z);
      pdf[v] = model.Pdf(x[v] + z);
    }
    prefix[0] = 1.0;
    for (int v = 0; v < rivals; ++v) prefix[v + 1] = prefix[v] * cdf[v];
    suffix[rivals] = 1.0;
    for (int v = rivals - 1; v >= 0; --v) suffix[v] = suffix[v + 1] * cdf[v];
    out[0] = prefix[rivals] * fz;
    for (int v = 0; v < rivals; ++v) {
      out[v + 1] = pdf[v] * prefix[v] * suffix[v + 1] * fz;
    }
  };
  const auto knots = ChoiceKnots(model, x);
  const auto res = IntegrateVector(integrand, rivals + 1, knots, options);
  ChoiceProbWithGrad out;
  out.prob = std::clamp(res.value[0], 0.0, 1.0);
  out.grad.assign(res.value.begin() + 1, res.value.end());
  for (double& g : out.grad) g = std::max(g, 0.0);
  return out;
}

double ChoiceProb(const NoiseModel& model, std::span<const double> x,
                  const QuadratureOptions& options) {
  if (x.empty()) throw ValidationError("difference vector must be non-empty");
  if (model.is_luce()) return LuceProbAndGrad(model.scale(), x).prob;
  const int rivals = static_cast<int>(x.size());
  auto integrand = [&](double z, double* out) {
    double prod = model.Pdf(z);
    for (int v = 0; v < rivals && prod != 0.0; ++v) {
      prod *= model.Cdf(x[v] + z);
    }
    out[0] = prod;
  };
  const auto knots = ChoiceKnots(model, x);
  return std::clamp(IntegrateVector(integrand, 1, knots, options).value[0],
                    0.0, 1.0);
}

std::vector<double> ChoiceProbGrad(const NoiseModel& model,
                                   std::span<const double> x,
                                   const QuadratureOptions& options) {
  return ChoiceProbAndGrad(model, x, options).grad;
}

Eigen::MatrixXd ChoiceProbHessian(const NoiseModel& model,
                                  std::span<const double> x,
                                  const QuadratureOptions& options) {
  if (x.empty()) throw ValidationError("difference vector must be non-empty");
  const int r = static_cast<int>(x.size());
  Eigen::MatrixXd h(r, r);
  if (model.is_luce()) {
    const double beta = model.scale();
    double top = 0.0;
    for (double xv : x) top = std::max(top, -xv / beta);
    // Scaled so that e_v / d is exp(-x_v/beta) / (1 + sum exp(-x/beta)).
    std::vector<double> e(r);
    double d = std::exp(-top);
    for (int v = 0; v < r; ++v) {
      e[v] = std::exp(-x[v] / beta - top);
      d += e[v];
    }
    const double p = std::exp(-top) / d;
    for (int u = 0; u < r; ++u) {
      for (int v = 0; v < r; ++v) {
        const double qu = e[u] / d, qv = e[v] / d;
        h(u, v) = 2.0 * p * qu * qv / (beta * beta);
        if (u == v) h(u, v) -= p * qu / (beta * beta);
      }
    }
    return h;
  }

  // Upper triangle, row-major, packed.
  const int dim = r * (r + 1) / 2;
  std::vector<double> cdf(r), pdf(r), dpdf(r);
  auto integrand = [&](double z, double* out) {
    const double fz = model.Pdf(z);
    for (int v = 0; v < r; ++v) {
      cdf[v] = model.Cdf(x[v] + z);
      pdf[v] = model.Pdf(x[v] + z);
      dpdf[v] = model.PdfDeriv(x[v] + z);
    }
    int idx = 0;
    for (int u = 0; u < r; ++u) {
      for (int v = u; v < r; ++v) {
        double prod = fz;
        for (int w = 0; w < r; ++w) {
          if (w != u && w != v) prod *= cdf[w];
        }
        out[idx++] = (u == v) ? prod * dpdf[u] : prod * pdf[u] * pdf[v];
      }
    }
  };
  const auto knots = ChoiceKnots(model, x);
  const auto res = IntegrateVector(integrand, dim, knots, options);
  int idx = 0;
  for (int u = 0; u < r; ++u) {
    for (int v = u; v < r; ++v) {
      h(u, v) = h(v, u) = res.value[idx++];
    }
  }
  if (model.has_compact_support()) {
    // The uniform density jumps at +-a, so d/dx_v of f(x_v + z) carries point
    // masses f(a) at z = -a - x_v and -f(a) at z = a - x_v.
    const double a = model.scale();
    const double fa = 1.0 / (2.0 * a);
    for (int v = 0; v < r; ++v) {
      for (double edge : {-a, a}) {
        const double z = edge - x[v];
        if (z <= -a || z >= a) continue;
        double prod = model.Pdf(z);
        for (int w = 0; w < r; ++w) {
          if (w != v) prod *= model.Cdf(x[w] + z);
        }
        h(v, v) += (edge < 0 ? fa : -fa) * prod;
      }
    }
  }
  return h;
}

double Dpk0Quadrature(const NoiseModel& model, int k) {
  CheckK(k, kMaxQuadratureK);
  auto integrand = [&](double z) {
    const double f = model.Pdf(z);
    return f * f * std::pow(model.Cdf(z), k - 2);
  };
  std::vector<double> knots = model.Knots();
  knots.push_back(model.SupportLow());
  knots.push_back(model.SupportHigh());
  std::sort(knots.begin(), knots.end());
  return Integrate(integrand, knots);
}

double Dpk0(const NoiseModel& model, int k) {
  const double s = model.scale();
  switch (model.kind()) {
    case NoiseKind::kGaussian:
      return Dpk0Quadrature(model, k);
    case NoiseKind::kDoubleExponential:
      CheckK(k, kMaxClosedFormK);
      return 1.0 / (s * static_cast<double>(k) * k);
    case NoiseKind::kLaplace:
      CheckK(k, kMaxClosedFormK);
      return (1.0 - std::pow(0.5, k - 1)) /
             (s * static_cast<double>(k) * (k - 1));
    case NoiseKind::kUniform:
      CheckK(k, kMaxClosedFormK);
      return 1.0 / (2.0 * s * (k - 1));
  }
  return 0.0;
}

double WeightStar(const NoiseModel& model, int k) {
  const double kd = k * Dpk0(model, k);
  return kd * kd;
}

double GammaFk(const NoiseModel& model, int k) {
  return 1.0 / (static_cast<double>(k) * (k - 1) * WeightStar(model, k));
}

double Dpk0ByForm(const NoiseModel& model, int k, Dpk0Form form) {
  switch (form) {
    case Dpk0Form::kDirect:
      return Dpk0Quadrature(model, k);
    case Dpk0Form::kMaxForm: {
      CheckK(k, kMaxQuadratureK);
      // E[f(X)] for X the max of k-1 draws: substitute u = F(X)^{k-1}.
      const double root = 1.0 / (k - 1);
      auto integrand = [&](double u) {
        return model.Pdf(model.Quantile(std::pow(u, root)));
      };
      std::vector<double> knots = {0.0, 1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0};
      if (model.kind() == NoiseKind::kLaplace) {
        knots.push_back(std::pow(0.5, k - 1));  // quantile's cusp at 1/2
      }
      std::sort(knots.begin(), knots.end());
      knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
      return Integrate(integrand, knots) / (k - 1);
    }
    case Dpk0Form::kBoundary: {
      CheckK(k, kMaxQuadratureK);
      if (!model.has_compact_support()) {
        throw UnsupportedError(
            "boundary form needs a density with compact support");
      }
      const double a = model.scale();
      const double boundary = (1.0 / (2.0 * a)) / (k - 1);
      auto integrand = [&](double z) {
        return -model.PdfDeriv(z) * k * std::pow(model.Cdf(z), k - 1) *
               model.Pdf(z);
      };
      const std::vector<double> knots = {-a, a};
      return boundary +
             Integrate(integrand, knots) / (static_cast<double>(k) * (k - 1));
    }
    case Dpk0Form::kEven: {
      CheckK(k, kMaxQuadratureK);
      if (!model.has_even_density()) {
        throw UnsupportedError("even form needs an even density");
      }
      auto integrand = [&](double z) {
        const double f = model.Pdf(z);
        return f * f *
               (std::pow(model.Cdf(z), k - 2) +
                std::pow(model.Cdf(-z), k - 2));
      };
      std::vector<double> knots = {0.0, model.SupportHigh()};
      for (double kn : model.Knots()) {
        if (kn > 0.0 && kn < model.SupportHigh()) knots.push_back(kn);
      }
      std::sort(knots.begin(), knots.end());
      return Integrate(integrand, knots);
    }
  }
  return 0.0;
}

Dpk0Characterizations Dpk0AllForms(const NoiseModel& model, int k) {
  Dpk0Characterizations out;
  out.direct = Dpk0ByForm(model, k, Dpk0Form::kDirect);
  out.maxform = Dpk0ByForm(model, k, Dpk0Form::kMaxForm);
  if (model.has_compact_support()) {
    out.boundary_form = Dpk0ByForm(model, k, Dpk0Form::kBoundary);
  }
  if (model.has_even_density()) {
    out.even_form = Dpk0ByForm(model, k, Dpk0Form::kEven);
  }
  return out;
}

}  // namespace thurstone
