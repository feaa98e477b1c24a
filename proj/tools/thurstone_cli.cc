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

// Command-line front end: simulation, estimation, spectral diagnostics,
// classification, theorem bounds and the Monte-Carlo experiment harness.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thurstone/bounds.h"
#include "thurstone/classifier.h"
#include "thurstone/comparisons.h"
#include "thurstone/errors.h"
#include "thurstone/estimators.h"
#include "thurstone/experiment.h"
#include "thurstone/noise.h"
#include "thurstone/sampler.h"

namespace thurstone {
namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  uint64_t seed = 0;
  int threads = 1;
  std::string output;  // empty means stdout
  std::string format;  // empty means the subcommand default
};

// Writes to --output or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ValidationError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string Format(const GlobalOptions& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "tsv" && f != "json") {
    throw ValidationError("--format must be tsv or json");
  }
  return f;
}

json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Dataset LoadDataset(const std::string& path) {
  auto result = IngestFile(path);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(result.dataset);
}

std::vector<double> ReadNumbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ValidationError(path + ": not a number: " + token);
    }
  }
  return values;
}

// "2..10", "2,4,8" or a single value.
std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const int lo = std::stoi(text.substr(0, dots));
      const int hi = std::stoi(text.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::exception&) {
    throw ValidationError("cannot parse integer list: " + text);
  }
  if (out.empty()) throw ValidationError("empty integer list: " + text);
  return out;
}

json FlagsJson(const std::vector<ConditionFlag>& flags) {
  json out = json::array();
  for (const auto& f : flags) {
    out.push_back({{"name", f.name},
                   {"satisfied", f.satisfied},
                   {"value", Number(f.value)},
                   {"limit", Number(f.limit)}});
  }
  return out;
}

json ConstantsJson(const ModelConstants& c) {
  return {{"A", Number(c.A)},         {"B", Number(c.B)},
          {"C", Number(c.C)},         {"A_tilde", Number(c.A_tilde)},
          {"C_tilde", Number(c.C_tilde)}, {"D", Number(c.D)},
          {"sigma", Number(c.sigma)}, {"b", c.b},
          {"certified", c.certified}, {"note", c.note}};
}

// ---- simulate ----

struct SimulateOptions {
  int n = 10;
  int m = 100;
  int k = 2;
  std::string design = "uniform";
  int rounds = 1;
  std::string noise = "gumbel:beta=1";
  std::string theta = "zero";
  double theta_b = 1.0;
  std::string theta_file;
  double b = 5.0;
  std::string sidecar;
};

void RunSimulate(const SimulateOptions& o, const GlobalOptions& g) {
  const NoiseModel model = NoiseModel::Parse(o.noise);
  ParamVector params{std::vector<double>(o.n, 0.0), o.b};
  if (o.theta == "two-class") {
    Rng rng(g.seed ^ kThetaSalt);
    params = SampleTwoClassTheta(o.n, o.theta_b, rng).params;
    params.b = o.b;
  } else if (o.theta == "file") {
    params.theta = ReadNumbers(o.theta_file);
  } else if (o.theta != "zero") {
    throw ValidationError("--theta must be zero, two-class or file");
  }
  ValidateParams(params);
  const int n = static_cast<int>(params.theta.size());

  ComparisonDesign design = ComparisonDesign::Uniform(n, o.k);
  if (o.design == "round-robin") {
    design = ComparisonDesign::RoundRobin(n, o.rounds);
  } else if (o.design != "uniform") {
    throw ValidationError("--design must be uniform or round-robin");
  }
  const int m = o.m > 0 ? o.m : design.natural_m();
  const Dataset ds = SampleDataset(model, params, design, m, g.seed);

  Sink sink(g.output);
  WriteCsv(ds, sink.stream());

  std::string sidecar = o.sidecar;
  if (sidecar.empty() && !g.output.empty()) sidecar = g.output + ".json";
  if (sidecar.empty()) return;
  json j = {{"theta", params.theta},
            {"b", params.b},
            {"noise", model.Spec()},
            {"design",
             {{"kind", o.design},
              {"k", o.design == "uniform" ? o.k : 2},
              {"rounds", o.design == "uniform" ? 0 : o.rounds}}},
            {"n", n},
            {"m", m},
            {"seed", g.seed}};
  std::ofstream out(sidecar);
  if (!out) throw ValidationError("cannot open " + sidecar);
  out << j.dump(2) << '\n';
}

// ---- estimate ----

struct EstimateOptions {
  std::string method = "mle";
  std::string noise = "gumbel:beta=1";
  double b = 5.0;
  std::string input;
  double tol = 1e-8;
  int max_iter = 10000;
};

void RunEstimate(const EstimateOptions& o, const GlobalOptions& g) {
  const Dataset ds = LoadDataset(o.input);
  EstimatorConfig config;
  config.method = ParseEstimatorMethod(o.method);
  config.model = NoiseModel::Parse(o.noise);
  config.b = o.b;
  config.tol_grad = o.tol;
  config.max_iter = o.max_iter;
  config.seed = g.seed;
  const EstimateReport r = Estimate(ds, config);
  Sink sink(g.output);
  auto& out = sink.stream();
  if (Format(g, "json") == "tsv") {
    out << "label\ttheta\n";
    out.precision(17);
    for (int i = 0; i < ds.n_items(); ++i) {
      out << ds.labels()[i] << '\t' << r.theta_hat.theta[i] << '\n';
    }
    return;
  }
  json items = json::array();
  for (int i = 0; i < ds.n_items(); ++i) {
    items.push_back({{"label", ds.labels()[i]}, {"theta", r.theta_hat.theta[i]}});
  }
  json active = json::array();
  for (int i : r.active_box) active.push_back(ds.labels()[i]);
  const json j = {{"method", EstimatorMethodName(config.method)},
                  {"noise", config.model.Spec()},
                  {"b", config.b},
                  {"items", items},
                  {"loglik", Number(r.loglik)},
                  {"grad_norm", r.grad_norm},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"active_box", active},
                  {"clamped", r.clamped}};
  out << j.dump(2) << '\n';
}

// ---- fiedler ----

struct FiedlerOptions {
  std::string input;
  std::string weight = "1";
  int step = 1;
  std::string normalize = "full";
};

void RunFiedler(const FiedlerOptions& o, const GlobalOptions& g) {
  const Dataset ds = LoadDataset(o.input);
  CurveNormalization normalization = CurveNormalization::kFullDataset;
  if (o.normalize == "prefix") {
    normalization = CurveNormalization::kPrefix;
  } else if (o.normalize != "full") {
    throw ValidationError("--normalize must be full or prefix");
  }
  const auto curve = FiedlerPrefixCurve(ds, WeightFunction::Parse(o.weight),
                                        o.step, normalization);
  Sink sink(g.output);
  if (Format(g, "tsv") == "tsv") {
    WriteCurveTsv(curve, sink.stream());
    return;
  }
  json points = json::array();
  for (const auto& p : curve) {
    points.push_back({{"prefix_m", p.prefix_m}, {"fiedler", p.fiedler}});
  }
  sink.stream() << json{{"weight", o.weight},
                        {"normalize", o.normalize},
                        {"curve", points}}
                       .dump(2)
                << '\n';
}

// ---- classify ----

struct ClassifyOptions {
  std::string input;
  bool complexity = false;
  std::string noise = "gumbel:beta=1";
  int k = 2;
  double b = 1.0;
  int n = 10;
  double delta = 0.05;
  int hessian_samples = kDefaultHessianSamples;
};

void RunClassify(const ClassifyOptions& o, const GlobalOptions& g) {
  Sink sink(g.output);
  auto& out = sink.stream();
  if (o.complexity) {
    const auto model = NoiseModel::Parse(o.noise);
    const auto sc =
        ClassifySampleComplexity(model, o.k, o.b, o.n, o.delta,
                                 o.hessian_samples);
    if (Format(g, "json") == "tsv") {
      out.precision(17);
      out << "sufficient_m\tnecessary_m\n"
          << sc.sufficient_m << '\t' << sc.necessary_m << '\n';
      return;
    }
    const json j = {{"noise", model.Spec()},
                    {"k", o.k},
                    {"b", o.b},
                    {"n", o.n},
                    {"delta", o.delta},
                    {"sufficient_m", Number(sc.sufficient_m)},
                    {"necessary_m", Number(sc.necessary_m)},
                    {"gamma", Number(sc.gamma)},
                    {"dpk0", sc.dpk0},
                    {"hessian_max", sc.hessian_max},
                    {"hessian_samples", sc.hessian_samples},
                    {"conditions", FlagsJson(sc.conditions)}};
    out << j.dump(2) << '\n';
    return;
  }
  if (o.input.empty()) throw ValidationError("--input is required");
  const Dataset ds = LoadDataset(o.input);
  const auto result = PointScoreClassify(ds);
  if (Format(g, "json") == "tsv") {
    std::vector<int> high(ds.n_items(), 0);
    for (int i : result.high_class) high[i] = 1;
    out << "label\tscore\tclass\n";
    for (int i = 0; i < ds.n_items(); ++i) {
      out << ds.labels()[i] << '\t' << result.scores[i] << '\t'
          << (high[i] ? "high" : "low") << '\n';
    }
    return;
  }
  auto labels = [&](const std::vector<int>& items) {
    json a = json::array();
    for (int i : items) a.push_back(ds.labels()[i]);
    return a;
  };
  json scores = json::object();
  for (int i = 0; i < ds.n_items(); ++i) {
    scores[ds.labels()[i]] = result.scores[i];
  }
  out << json{{"high_class", labels(result.high_class)},
              {"low_class", labels(result.low_class)},
              {"scores", scores}}
             .dump(2)
      << '\n';
}

// ---- bounds ----

struct BoundsOptions {
  std::string theorem = "general";
  int n = 0;
  double m = 0.0;
  int k = 2;
  std::string ks;
  double b = 1.0;
  std::string noise = "gumbel:beta=1";
  double fiedler = 0.0;
  std::string from_data;
  int samples = 4096;
};

void RunBounds(const BoundsOptions& o, const GlobalOptions& g) {
  const Theorem theorem = ParseTheorem(o.theorem);
  BoundInputs in;
  in.model = NoiseModel::Parse(o.noise);
  in.b = o.b;
  in.n = o.n;
  in.m = o.m;
  in.k = o.k;
  in.fiedler = o.fiedler;
  if (!o.ks.empty()) {
    for (int k : ParseIntList(o.ks)) in.ks.insert(k);
  }
  if (!o.from_data.empty()) {
    const Dataset ds = LoadDataset(o.from_data);
    in.n = ds.n_items();
    in.m = ds.m();
    in.ks.clear();
    for (const auto& obs : ds.observations()) {
      in.ks.insert(static_cast<int>(obs.set.size()));
    }
    in.k = *in.ks.rbegin();
    in.fiedler = FiedlerValue(
        BuildWeightedAdjacency(ds, TheoremWeight(theorem, in.model)));
  }
  if (in.ks.empty()) in.ks = {in.k};
  BoundReport r;
  if (theorem == Theorem::kGeneral) {
    r = MseUpperBound(theorem, in,
                      SampledConstants(in.model, in.ks, in.b, o.samples));
  } else {
    r = MseUpperBound(theorem, in);
  }
  Sink sink(g.output);
  auto& out = sink.stream();
  if (Format(g, "json") == "tsv") {
    out.precision(17);
    out << "theorem\tvalue\tD\tpreconditions_met\n"
        << r.theorem << '\t' << r.value << '\t' << r.D << '\t'
        << (r.preconditions_met() ? "true" : "false") << '\n';
    return;
  }
  const json j = {
      {"theorem", r.theorem},
      {"value", Number(r.value)},
      {"D", Number(r.D)},
      {"constants", ConstantsJson(r.constants)},
      {"preconditions", FlagsJson(r.preconditions)},
      {"preconditions_met", r.preconditions_met()},
      {"inputs",
       {{"n", in.n},
        {"m", in.m},
        {"k", in.k},
        {"ks", std::vector<int>(in.ks.begin(), in.ks.end())},
        {"b", in.b},
        {"noise", in.model.Spec()},
        {"fiedler", in.fiedler}}}};
  out << j.dump(2) << '\n';
}

// ---- experiment mse-vs-k ----

struct ExperimentOptions {
  int n = 10;
  int m = 100;
  std::string k_values = "2..10";
  int repetitions = 100;
  std::string noise = "gumbel:unit-variance";
  std::string theta = "zero";
  double theta_b = 1.0;
  std::string theta_file;
  std::string method = "mle";
  double b = 5.0;
  bool no_bounds = false;
  int bound_samples = 4096;
  std::string manifest;
};

void RunExperiment(const ExperimentOptions& o, const GlobalOptions& g) {
  ExperimentSpec spec;
  spec.n = o.n;
  spec.m = o.m;
  spec.k_values = ParseIntList(o.k_values);
  spec.repetitions = o.repetitions;
  spec.model = NoiseModel::Parse(o.noise);
  if (o.theta == "two-class") {
    spec.theta_mode = ThetaMode::kTwoClass;
  } else if (o.theta == "file") {
    spec.theta_mode = ThetaMode::kGiven;
    spec.theta_given = ReadNumbers(o.theta_file);
  } else if (o.theta != "zero") {
    throw ValidationError("--theta must be zero, two-class or file");
  }
  spec.theta_b = o.theta_b;
  spec.method = ParseEstimatorMethod(o.method);
  spec.b = o.b;
  spec.seed = g.seed;
  spec.threads = g.threads;
  spec.attach_bounds = !o.no_bounds;
  spec.bound_samples = o.bound_samples;
  const ExperimentResult result = RunMseVsK(spec);
  Sink sink(g.output);
  if (Format(g, "tsv") == "tsv") {
    WriteExperimentTsv(result, sink.stream());
  } else {
    WriteExperimentJson(result, sink.stream());
  }
  std::string manifest = o.manifest;
  if (manifest.empty() && !g.output.empty() && Format(g, "tsv") == "tsv") {
    manifest = g.output + ".json";
  }
  if (!manifest.empty()) {
    std::ofstream out(manifest);
    if (!out) throw ValidationError("cannot open " + manifest);
    WriteExperimentJson(result, out);
  }
}

// ---- dataset top-n ----

struct TopNOptions {
  std::string input;
  int top_n = 2;
};

void RunTopN(const TopNOptions& o, const GlobalOptions& g) {
  const Dataset ds = TopNRestriction(LoadDataset(o.input), o.top_n);
  Sink sink(g.output);
  WriteCsv(ds, sink.stream());
}

int Main(int argc, char** argv) {
  CLI::App app{"Parameter estimation for Thurstone choice models"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output", g.output, "Output path (default stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"tsv", "json"}));

  SimulateOptions sim;
  auto* simulate =
      app.add_subcommand("simulate", "Sample a comparison dataset (CSV)");
  simulate->fallthrough();
  simulate->add_option("--n", sim.n, "Number of items")->capture_default_str();
  simulate->add_option("--m", sim.m,
                       "Observations (0: one pass of the round-robin schedule)")
      ->capture_default_str();
  simulate->add_option("--k", sim.k, "Set size for the uniform design")
      ->capture_default_str();
  simulate->add_option("--design", sim.design, "uniform or round-robin")
      ->capture_default_str();
  simulate->add_option("--rounds", sim.rounds, "Round-robin legs")
      ->capture_default_str();
  simulate->add_option("--noise", sim.noise, "Noise spec")
      ->capture_default_str();
  simulate->add_option("--theta", sim.theta, "zero, two-class or file")
      ->capture_default_str();
  simulate->add_option("--theta-b", sim.theta_b, "Two-class magnitude")
      ->capture_default_str();
  simulate->add_option("--theta-file", sim.theta_file,
                       "Whitespace-separated strengths");
  simulate->add_option("--b", sim.b, "Box radius")->capture_default_str();
  simulate->add_option("--sidecar", sim.sidecar,
                       "JSON sidecar path (default <output>.json)");

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate strengths");
  estimate->fallthrough();
  estimate->add_option("--method", est.method, "mle, rank-all or rank-one")
      ->capture_default_str();
  estimate->add_option("--noise", est.noise, "Noise spec")
      ->capture_default_str();
  estimate->add_option("--b", est.b, "Box radius")->capture_default_str();
  estimate->add_option("--input", est.input, "Comparison file")->required();
  estimate->add_option("--tol", est.tol, "Projected gradient tolerance")
      ->capture_default_str();
  estimate->add_option("--max-iter", est.max_iter, "Iteration cap")
      ->capture_default_str();

  FiedlerOptions fo;
  auto* fiedler = app.add_subcommand("fiedler", "Fiedler value prefix curve");
  fiedler->fallthrough();
  fiedler->add_option("--input", fo.input, "Comparison file")->required();
  fiedler->add_option("--weight", fo.weight, "1, const:<a>, inv-k2, wstar:<noise>")
      ->capture_default_str();
  fiedler->add_option("--step", fo.step, "Prefix step")->capture_default_str();
  fiedler->add_option("--normalize", fo.normalize, "full or prefix")
      ->capture_default_str();

  ClassifyOptions co;
  auto* classify =
      app.add_subcommand("classify", "Point-score two-class classification");
  classify->fallthrough();
  classify->add_option("--input", co.input, "Comparison file");
  classify->add_flag("--complexity", co.complexity,
                     "Print sample-complexity thresholds instead");
  classify->add_option("--noise", co.noise, "Noise spec")
      ->capture_default_str();
  classify->add_option("--k", co.k, "Set size")->capture_default_str();
  classify->add_option("--b", co.b, "Class gap parameter")
      ->capture_default_str();
  classify->add_option("--n", co.n, "Number of items")->capture_default_str();
  classify->add_option("--delta", co.delta, "Failure probability")
      ->capture_default_str();
  classify->add_option("--hessian-samples", co.hessian_samples,
                       "Sample points for the Hessian condition")
      ->capture_default_str();

  BoundsOptions bo;
  auto* bounds = app.add_subcommand("bounds", "Evaluate an MSE upper bound");
  bounds->fallthrough();
  bounds->add_option("--theorem", bo.theorem,
                     "pair, luce-full, general, rank-all or rank-one")
      ->capture_default_str();
  bounds->add_option("--n", bo.n, "Number of items");
  bounds->add_option("--m", bo.m, "Number of observations");
  bounds->add_option("--k", bo.k, "Set size")->capture_default_str();
  bounds->add_option("--ks", bo.ks, "Observed set sizes, e.g. 2,3 or 2..5");
  bounds->add_option("--b", bo.b, "Box radius")->capture_default_str();
  bounds->add_option("--noise", bo.noise, "Noise spec")
      ->capture_default_str();
  bounds->add_option("--fiedler", bo.fiedler, "lambda_2 of the weighted matrix");
  bounds->add_option("--from-data", bo.from_data,
                     "Take n, m, set sizes and lambda_2 from a dataset");
  bounds->add_option("--samples", bo.samples,
                     "Sample points for the general constants")
      ->capture_default_str();

  ExperimentOptions eo;
  auto* experiment = app.add_subcommand("experiment", "Monte-Carlo experiments");
  experiment->require_subcommand(1);
  experiment->fallthrough();
  auto* mse = experiment->add_subcommand("mse-vs-k", "MSE against set size");
  mse->fallthrough();
  mse->add_option("--n", eo.n, "Number of items")->capture_default_str();
  mse->add_option("--m", eo.m, "Observations per dataset")
      ->capture_default_str();
  mse->add_option("--k-values", eo.k_values, "e.g. 2..10 or 2,5,10")
      ->capture_default_str();
  mse->add_option("--repetitions", eo.repetitions, "Repetitions per k")
      ->capture_default_str();
  mse->add_option("--noise", eo.noise, "Noise spec")->capture_default_str();
  mse->add_option("--theta", eo.theta, "zero, two-class or file")
      ->capture_default_str();
  mse->add_option("--theta-b", eo.theta_b, "Two-class magnitude")
      ->capture_default_str();
  mse->add_option("--theta-file", eo.theta_file,
                  "Whitespace-separated strengths");
  mse->add_option("--method", eo.method, "mle, rank-all or rank-one")
      ->capture_default_str();
  mse->add_option("--b", eo.b, "Box radius")->capture_default_str();
  mse->add_flag("--no-bounds", eo.no_bounds, "Skip the per-row bound");
  mse->add_option("--bound-samples", eo.bound_samples,
                  "Sample points for the general constants")
      ->capture_default_str();
  mse->add_option("--manifest", eo.manifest,
                  "JSON manifest path (default <output>.json for TSV)");

  TopNOptions to;
  auto* dataset = app.add_subcommand("dataset", "Dataset transformations");
  dataset->require_subcommand(1);
  dataset->fallthrough();
  auto* top_n = dataset->add_subcommand("top-n", "Keep the n most active items");
  top_n->fallthrough();
  top_n->add_option("--input", to.input, "Comparison file")->required();
  top_n->add_option("--top-n", to.top_n, "Items to keep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*simulate) RunSimulate(sim, g);
    if (*estimate) RunEstimate(est, g);
    if (*fiedler) RunFiedler(fo, g);
    if (*classify) RunClassify(co, g);
    if (*bounds) RunBounds(bo, g);
    if (*mse) RunExperiment(eo, g);
    if (*top_n) RunTopN(to, g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}

}  // namespace
}  // namespace thurstone

int main(int argc, char** argv) { return thurstone::Main(argc, argv); }
