// Copyright 2026 The bntrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bntrace: membership-inference risk auditing for discrete Bayesian networks.
//
// Exit codes: 0 success, 2 validation error, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "bntrace/attack.h"
#include "bntrace/dataset.h"
#include "bntrace/experiment_config.h"
#include "bntrace/harness.h"
#include "bntrace/learn.h"
#include "bntrace/model_io.h"
#include "bntrace/network.h"
#include "bntrace/status_macros.h"
#include "bntrace/theory.h"

namespace bntrace {
namespace {

constexpr int kValidationError = 2;
constexpr int kRuntimeError = 3;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kFailedPrecondition:
      return kValidationError;
    default:
      return kRuntimeError;
  }
}

absl::Status MaybeWrite(const std::string& text, const std::string& path) {
  if (path.empty()) return absl::OkStatus();
  return WriteText(text, path);
}

struct ComplexityArgs {
  std::string model;
};

absl::Status RunComplexity(const ComplexityArgs& args) {
  ASSIGN_OR_RETURN(BayesianNetwork network, LoadModel(args.model));
  std::cout << Complexity(network.structure()) << "\n";
  return absl::OkStatus();
}

struct BoundArgs {
  double complexity = 0;
  int64_t pool_size = 0;
  std::optional<double> gdp_mu;
  std::string out;
  int points = 200;
};

absl::Status RunBound(const BoundArgs& args) {
  const std::vector<double> grid = LogAlphaGrid(args.points);
  ASSIGN_OR_RETURN(BoundCurve curve, ComputeBoundCurve(args.complexity, args.pool_size,
                                                       grid, args.gdp_mu));
  ASSIGN_OR_RETURN(double power_at_005, BoundPower(args.complexity, args.pool_size, 0.05));
  std::cout << absl::StrFormat("complexity %.6g\npool_size %d\n", args.complexity,
                               args.pool_size);
  std::cout << absl::StrFormat("bound_auc %.4f\n", curve.auc);
  std::cout << absl::StrFormat("power_at_alpha_0.05 %.6f\n", power_at_005);
  std::vector<std::string> comments = {
      absl::StrFormat("bound for C=%.6g n=%d", args.complexity, args.pool_size),
      absl::StrFormat("bound_auc %.6f", curve.auc)};
  if (args.gdp_mu.has_value()) {
    ASSIGN_OR_RETURN(double capped,
                     CappedAuc(args.complexity, args.pool_size, args.gdp_mu));
    std::cout << absl::StrFormat("gdp_mu %.6g\ngdp_capped_auc %.4f\n", *args.gdp_mu,
                                 capped);
    comments.push_back(absl::StrFormat("capped by %.6g-GDP, auc %.6f", *args.gdp_mu,
                                       capped));
  }
  comments.push_back("alpha power");
  return MaybeWrite(FormatCurve(curve.points, comments), args.out);
}

struct LearnArgs {
  std::string data;
  std::string schema;
  int eta = 0;
  double prior = 1.0;
  std::string out;
  int64_t min_support = 50;
};

absl::StatusOr<Dataset> LoadData(const std::string& path, const std::string& schema) {
  if (schema.empty()) return LoadCsv(path);
  return LoadCsv(path, std::filesystem::path(schema));
}

absl::Status RunLearn(const LearnArgs& args) {
  ASSIGN_OR_RETURN(Dataset data, LoadData(args.data, args.schema));
  ASSIGN_OR_RETURN(NetworkStructure structure, LearnStructure(data, {.eta = args.eta}));
  ASSIGN_OR_RETURN(BayesianNetwork network,
                   LearnParameters(data, structure, {args.prior}));
  RETURN_IF_ERROR(SaveModel(network, args.out));
  const auto low = MinSupportFilter(network, args.min_support);
  std::cout << absl::StrFormat("nodes %d\nedges %d\ncomplexity %d\n",
                               network.node_count(), structure.edge_count(),
                               Complexity(structure));
  if (!low.empty()) {
    std::cerr << absl::StrFormat(
        "warning: %d CPT rows rest on fewer than %d records\n", low.size(),
        args.min_support);
  }
  return absl::OkStatus();
}

struct SynthesizeArgs {
  std::string data;
  std::string schema;
  int eta = 3;
  int count = 0;
  uint64_t seed = 0;
  double prior = 1.0;
  std::string out;
};

absl::Status RunSynthesize(const SynthesizeArgs& args) {
  ASSIGN_OR_RETURN(Dataset data, LoadData(args.data, args.schema));
  ASSIGN_OR_RETURN(Dataset synthetic,
                   Synthesize(data, args.eta, args.count, args.seed, {args.prior}));
  return WriteCsv(synthetic, args.out);
}

struct SampleArgs {
  std::string model;
  int count = 0;
  uint64_t seed = 0;
  std::string out;
};

absl::Status RunSample(const SampleArgs& args) {
  ASSIGN_OR_RETURN(BayesianNetwork network, LoadModel(args.model));
  return WriteCsv(network.Sample(args.count, args.seed), args.out);
}

struct RandomNetworkArgs {
  int nodes = 0;
  int cardinality = 2;
  int eta = 0;
  int edges = 0;
  uint64_t seed = 0;
  double uniform_mix = 0.4;
  std::string out;
};

absl::Status RunRandomNetwork(const RandomNetworkArgs& args) {
  if (args.nodes < 1) return absl::InvalidArgumentError("--nodes must be positive");
  ASSIGN_OR_RETURN(NetworkStructure structure,
                   RandomStructure(std::vector<int>(args.nodes, args.cardinality),
                                   args.eta, args.edges, args.seed));
  ASSIGN_OR_RETURN(BayesianNetwork network,
                   RandomNetwork(structure, args.seed + 1, {args.uniform_mix}));
  RETURN_IF_ERROR(SaveModel(network, args.out));
  std::cout << "complexity " << Complexity(structure) << "\n";
  return absl::OkStatus();
}

struct AttackArgs {
  std::string released;
  std::string pool;
  std::string reference;
  std::string nonmembers;
  double prior = 1.0;
  std::optional<double> alpha;
  std::string out;
};

absl::Status RunAttack(const AttackArgs& args) {
  ASSIGN_OR_RETURN(BayesianNetwork released, LoadModel(args.released));
  const auto& cards = released.structure().cardinalities();
  auto load = [&](const std::string& path) -> absl::StatusOr<Dataset> {
    ASSIGN_OR_RETURN(Dataset raw, LoadCsv(path));
    // Re-read with the model's value space so constant columns keep their
    // cardinality.
    ASSIGN_OR_RETURN(Dataset data, ParseCsv(ToCsv(raw), cards));
    return data;
  };
  ASSIGN_OR_RETURN(Dataset pool, load(args.pool));
  ASSIGN_OR_RETURN(Dataset reference, load(args.reference));
  ASSIGN_OR_RETURN(Dataset nonmembers, load(args.nonmembers));
  ASSIGN_OR_RETURN(BayesianNetwork population,
                   FitPopulationModel(reference, released.structure(), {args.prior}));
  ASSIGN_OR_RETURN(std::vector<double> member_stats,
                   LrStatistics(population, released, pool));
  ASSIGN_OR_RETURN(std::vector<double> nonmember_stats,
                   LrStatistics(population, released, nonmembers));
  ASSIGN_OR_RETURN(RocCurve roc, EmpiricalRoc(member_stats, nonmember_stats));
  const int64_t complexity = Complexity(released.structure());
  ASSIGN_OR_RETURN(double bound_auc, BoundAuc(static_cast<double>(complexity),
                                              pool.row_count()));
  std::cout << absl::StrFormat("complexity %d\nauc %.6f\nbound_auc %.6f\n", complexity,
                               roc.auc, bound_auc);
  if (args.alpha.has_value()) {
    ASSIGN_OR_RETURN(std::vector<double> reference_stats,
                     LrStatistics(population, released, reference));
    ASSIGN_OR_RETURN(double threshold, CalibrateThreshold(reference_stats, *args.alpha));
    int flagged = 0;
    for (double s : member_stats) {
      if (Decide(s, threshold).verdict == Verdict::kIn) ++flagged;
    }
    std::cout << absl::StrFormat("threshold %.9g\npower_at_threshold %.6f\n", threshold,
                                 static_cast<double>(flagged) / member_stats.size());
  }
  return MaybeWrite(
      FormatCurve(roc.points, std::vector<std::string>{
                                  absl::StrFormat("empirical ROC, auc %.6f", roc.auc),
                                  "alpha power"}),
      args.out);
}

struct ExperimentArgs {
  std::vector<std::string> configs;
  std::string out;
  std::string roc_out;
  std::string bound_out;
  std::string csv_out;
};

absl::Status RunExperimentCommand(const ExperimentArgs& args) {
  std::vector<ExperimentReport> reports;
  std::string text;
  for (const std::string& path : args.configs) {
    ASSIGN_OR_RETURN(ExperimentConfig config, LoadExperimentConfig(path));
    if (config.label.empty()) config.label = std::filesystem::path(path).stem().string();
    ASSIGN_OR_RETURN(ExperimentReport report, RunExperiment(config));
    text += FormatReport(report);
    text += "\n";
    reports.push_back(std::move(report));
  }
  ASSIGN_OR_RETURN(ComparisonTable table, CompareTable(reports));
  text += table.text;
  std::cout << text;
  RETURN_IF_ERROR(MaybeWrite(text, args.out));
  RETURN_IF_ERROR(MaybeWrite(table.csv, args.csv_out));
  if (reports.size() == 1) {
    RETURN_IF_ERROR(MaybeWrite(FormatMeanRoc(reports.front()), args.roc_out));
    RETURN_IF_ERROR(MaybeWrite(FormatBoundCurve(reports.front()), args.bound_out));
  } else if (!args.roc_out.empty() || !args.bound_out.empty()) {
    return absl::InvalidArgumentError("--roc-out/--bound-out need a single config");
  }
  return absl::OkStatus();
}

struct NbVarianceArgs {
  int64_t attributes = 0;
  int64_t pool_size = 0;
  double p1 = 0.5;
};

absl::Status RunNbVariance(const NbVarianceArgs& args) {
  ASSIGN_OR_RETURN(double variance,
                   NaiveBayesVariance(args.attributes, args.pool_size, args.p1));
  std::cout << absl::StrFormat("%.12g\n", variance);
  return absl::OkStatus();
}

struct GdpArgs {
  double mu = 1.0;
  double epsilon = 0.0;
  std::optional<double> alpha;
};

absl::Status RunGdp(const GdpArgs& args) {
  ASSIGN_OR_RETURN(double delta, GdpDelta(args.epsilon, args.mu));
  std::cout << absl::StrFormat("delta %.9g\n", delta);
  if (args.alpha.has_value()) {
    ASSIGN_OR_RETURN(double cap, GdpPowerCap(args.mu, *args.alpha));
    std::cout << absl::StrFormat("power_cap %.9g\n", cap);
  }
  return absl::OkStatus();
}

}  // namespace
}  // namespace bntrace

int main(int argc, char** argv) {
  using namespace bntrace;
  CLI::App app{"Membership-inference risk auditing for discrete Bayesian networks"};
  app.require_subcommand(1);
  absl::Status status;

  ComplexityArgs complexity_args;
  auto* complexity = app.add_subcommand("complexity", "Print the model's parameter count");
  complexity->add_option("--model", complexity_args.model, "Model JSON")->required();
  complexity->callback([&] { status = RunComplexity(complexity_args); });

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "Theoretical power/error bound and AUC");
  bound->add_option("--complexity", bound_args.complexity, "Model complexity C")->required();
  bound->add_option("--pool-size", bound_args.pool_size, "Pool size n")->required();
  bound->add_option("--gdp-mu", bound_args.gdp_mu, "Cap by a mu-GDP training guarantee");
  bound->add_option("--points", bound_args.points, "Alpha grid size")->check(CLI::Range(2, 1000000));
  bound->add_option("--out", bound_args.out, "Write the bound curve here");
  bound->callback([&] { status = RunBound(bound_args); });

  LearnArgs learn_args;
  auto* learn = app.add_subcommand("learn", "Learn structure and parameters from a CSV");
  learn->add_option("--data", learn_args.data, "Training CSV")->required();
  learn->add_option("--schema", learn_args.schema, "Schema sidecar");
  learn->add_option("--eta", learn_args.eta, "Maximum parents per node")->required();
  learn->add_option("--prior", learn_args.prior, "Dirichlet pseudo-count");
  learn->add_option("--min-support", learn_args.min_support, "Warn below this row support");
  learn->add_option("--out", learn_args.out, "Model JSON")->required();
  learn->callback([&] { status = RunLearn(learn_args); });

  SynthesizeArgs synth_args;
  auto* synth = app.add_subcommand("synthesize", "Sample synthetic records from a learned posterior");
  synth->add_option("--data", synth_args.data, "Source CSV")->required();
  synth->add_option("--schema", synth_args.schema, "Schema sidecar");
  synth->add_option("--eta", synth_args.eta, "Maximum parents per node")->required();
  synth->add_option("--count", synth_args.count, "Records to draw")->required();
  synth->add_option("--seed", synth_args.seed, "Random seed")->required();
  synth->add_option("--prior", synth_args.prior, "Dirichlet pseudo-count");
  synth->add_option("--out", synth_args.out, "Output CSV")->required();
  synth->callback([&] { status = RunSynthesize(synth_args); });

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Ancestral sampling from a model");
  sample->add_option("--model", sample_args.model, "Model JSON")->required();
  sample->add_option("--count", sample_args.count, "Records to draw")->required();
  sample->add_option("--seed", sample_args.seed, "Random seed")->required();
  sample->add_option("--out", sample_args.out, "Output CSV")->required();
  sample->callback([&] { status = RunSample(sample_args); });

  RandomNetworkArgs random_args;
  auto* random = app.add_subcommand("random-network", "Random structure with random CPTs");
  random->add_option("--nodes", random_args.nodes, "Node count")->required();
  random->add_option("--cardinality", random_args.cardinality, "Values per node");
  random->add_option("--eta", random_args.eta, "Maximum parents per node")->required();
  random->add_option("--edges", random_args.edges, "Edges to place")->required();
  random->add_option("--seed", random_args.seed, "Random seed")->required();
  random->add_option("--uniform-mix", random_args.uniform_mix, "Weight of the uniform component");
  random->add_option("--out", random_args.out, "Model JSON")->required();
  random->callback([&] { status = RunRandomNetwork(random_args); });

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "Likelihood-ratio tracing attack and ROC");
  attack->add_option("--released", attack_args.released, "Released model JSON")->required();
  attack->add_option("--pool", attack_args.pool, "Members CSV")->required();
  attack->add_option("--reference", attack_args.reference, "Reference population CSV")->required();
  attack->add_option("--nonmembers", attack_args.nonmembers, "Non-members CSV")->required();
  attack->add_option("--prior", attack_args.prior, "Dirichlet pseudo-count");
  attack->add_option("--alpha", attack_args.alpha, "Also calibrate a threshold at this error");
  attack->add_option("--out", attack_args.out, "Write the ROC here");
  attack->callback([&] { status = RunAttack(attack_args); });

  ExperimentArgs experiment_args;
  auto* experiment = app.add_subcommand("experiment", "Run the split-and-average protocol");
  experiment->add_option("--config", experiment_args.configs, "Config file(s)")->required();
  experiment->add_option("--out", experiment_args.out, "Write the report here");
  experiment->add_option("--csv", experiment_args.csv_out, "Write the comparison CSV here");
  experiment->add_option("--roc-out", experiment_args.roc_out, "Mean empirical ROC file");
  experiment->add_option("--bound-out", experiment_args.bound_out, "Bound curve file");
  experiment->callback([&] { status = RunExperimentCommand(experiment_args); });

  NbVarianceArgs nb_args;
  auto* nb = app.add_subcommand("nb-variance", "Exact Naive Bayes variance of L");
  nb->add_option("--attributes", nb_args.attributes, "Attribute count m")->required();
  nb->add_option("--pool-size", nb_args.pool_size, "Pool size n")->required();
  nb->add_option("--p1", nb_args.p1, "Class marginal")->required();
  nb->callback([&] { status = RunNbVariance(nb_args); });

  GdpArgs gdp_args;
  auto* gdp = app.add_subcommand("gdp", "mu-GDP to (epsilon, delta) and power cap");
  gdp->add_option("--mu", gdp_args.mu, "GDP parameter")->required();
  gdp->add_option("--epsilon", gdp_args.epsilon, "Epsilon");
  gdp->add_option("--alpha", gdp_args.alpha, "Also print the power cap at this error");
  gdp->callback([&] { status = RunGdp(gdp_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }
  if (!status.ok()) {
    std::cerr << "error: " << status.message() << "\n";
    return ExitCodeFor(status);
  }
  return 0;
}
