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

#include "bntrace/harness.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "bntrace/random.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

// Stream identifiers for per-split seed derivation.
enum Stream : uint64_t {
  kPoolStream = 1,
  kReferenceStream = 2,
  kNonmemberStream = 3,
  kStructureStream = 4,
};

struct SplitData {
  Dataset pool;
  Dataset reference;
  Dataset nonmembers;
};

BiasSpec MakeBiasSpec(const ExperimentConfig& config) {
  return {.bias = config.bias.value_or(0.0),
          .attribute = config.bias_attribute,
          .max_attempts = config.bias_max_attempts};
}

const std::vector<int>& PopulationCardinalities(const ExperimentConfig& config) {
  return config.generator ? config.generator->structure().cardinalities()
                          : config.dataset->cardinalities();
}

absl::StatusOr<SplitData> DrawFromGenerator(const ExperimentConfig& config,
                                            uint64_t split_seed) {
  const BayesianNetwork& generator = *config.generator;
  const int nonmembers =
      config.nonmember_count > 0 ? config.nonmember_count : config.reference_size;
  std::optional<Dataset> pool;
  if (config.bias.has_value()) {
    ASSIGN_OR_RETURN(pool, BiasedSampleFromGenerator(generator, config.pool_size,
                                                     MakeBiasSpec(config),
                                                     MixSeed(split_seed, kPoolStream)));
  } else {
    pool = generator.Sample(config.pool_size, MixSeed(split_seed, kPoolStream));
  }
  return SplitData{
      *std::move(pool),
      generator.Sample(config.reference_size, MixSeed(split_seed, kReferenceStream)),
      generator.Sample(nonmembers, MixSeed(split_seed, kNonmemberStream))};
}

absl::StatusOr<SplitData> DrawFromDataset(const ExperimentConfig& config,
                                          uint64_t split_seed) {
  const Dataset& population = *config.dataset;
  const int total = population.row_count();
  std::vector<int> pool_rows;
  std::vector<int> reference_rows;
  if (config.bias.has_value()) {
    ASSIGN_OR_RETURN(pool_rows,
                     BiasedSampleIndices(population, config.pool_size,
                                         MakeBiasSpec(config),
                                         MixSeed(split_seed, kPoolStream)));
    std::vector<bool> taken(total, false);
    for (int r : pool_rows) taken[r] = true;
    std::vector<int> rest;
    for (int r = 0; r < total; ++r) {
      if (!taken[r]) rest.push_back(r);
    }
    if (static_cast<int>(rest.size()) < config.reference_size) {
      return absl::InvalidArgumentError("reference does not fit beside the pool");
    }
    Rng rng = MakeRng(split_seed, kReferenceStream);
    std::vector<int> order = RandomPermutation(rng, static_cast<int>(rest.size()));
    for (int k = 0; k < config.reference_size; ++k) {
      reference_rows.push_back(rest[order[k]]);
    }
    std::sort(pool_rows.begin(), pool_rows.end());
    std::sort(reference_rows.begin(), reference_rows.end());
  } else {
    ASSIGN_OR_RETURN(
        SplitIndices split,
        DrawSplitIndices(total, {config.pool_size, config.reference_size,
                                 MixSeed(split_seed, kPoolStream)}));
    pool_rows = std::move(split.pool);
    reference_rows = std::move(split.reference);
  }

  std::vector<int> holdout;
  if (config.nonmembers_include_pool) {
    holdout.resize(total);
    std::iota(holdout.begin(), holdout.end(), 0);
  } else {
    std::vector<bool> used(total, false);
    for (int r : pool_rows) used[r] = true;
    for (int r : reference_rows) used[r] = true;
    for (int r = 0; r < total; ++r) {
      if (!used[r]) holdout.push_back(r);
    }
  }
  if (config.nonmember_count > 0 &&
      config.nonmember_count < static_cast<int>(holdout.size())) {
    Rng rng = MakeRng(split_seed, kNonmemberStream);
    std::vector<int> order = RandomPermutation(rng, static_cast<int>(holdout.size()));
    std::vector<int> chosen;
    for (int k = 0; k < config.nonmember_count; ++k) chosen.push_back(holdout[order[k]]);
    std::sort(chosen.begin(), chosen.end());
    holdout = std::move(chosen);
  }
  if (holdout.empty()) {
    return absl::InvalidArgumentError(
        "no population rows left outside the pool and reference to use as "
        "non-members");
  }
  return SplitData{population.Subset(pool_rows), population.Subset(reference_rows),
                   population.Subset(holdout)};
}

std::pair<double, double> MeanAndVariance(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  return {mean, values.size() > 1 ? sum_sq / (n - 1.0) : 0.0};
}

absl::StatusOr<SplitResult> RunSplit(const ExperimentConfig& config, int index) {
  SplitResult result;
  result.index = index;
  result.seed = config.seed + static_cast<uint64_t>(index);
  ASSIGN_OR_RETURN(SplitData data, config.generator
                                       ? DrawFromGenerator(config, result.seed)
                                       : DrawFromDataset(config, result.seed));

  std::optional<NetworkStructure> structure;
  if (config.release_generator_structure) {
    structure = config.generator->structure();
  } else if (config.random_edges.has_value()) {
    ASSIGN_OR_RETURN(structure,
                     RandomStructure(PopulationCardinalities(config),
                                     config.eta_released, *config.random_edges,
                                     MixSeed(result.seed, kStructureStream)));
  } else {
    ASSIGN_OR_RETURN(structure,
                     LearnStructure(data.pool, {.eta = config.eta_released}));
  }

  ASSIGN_OR_RETURN(BayesianNetwork released,
                   LearnParameters(data.pool, *structure, config.prior));
  std::optional<BayesianNetwork> population_model;
  if (config.eta_population_model.has_value()) {
    ASSIGN_OR_RETURN(NetworkStructure population_structure,
                     LearnStructure(data.reference,
                                    {.eta = *config.eta_population_model}));
    ASSIGN_OR_RETURN(population_model, LearnParameters(data.reference,
                                                       population_structure,
                                                       config.prior));
  } else {
    ASSIGN_OR_RETURN(population_model,
                     FitPopulationModel(data.reference, *structure, config.prior));
  }
  if (config.control) released = *population_model;

  result.complexity = Complexity(released.structure());
  result.edge_count = released.structure().edge_count();
  result.low_support_rows =
      static_cast<int64_t>(MinSupportFilter(released, config.min_support).size());

  ASSIGN_OR_RETURN(std::vector<double> members,
                   LrStatistics(*population_model, released, data.pool));
  ASSIGN_OR_RETURN(std::vector<double> nonmembers,
                   LrStatistics(*population_model, released, data.nonmembers));
  ASSIGN_OR_RETURN(RocCurve roc, EmpiricalRoc(members, nonmembers));
  result.auc = roc.auc;
  result.power.reserve(config.alpha_grid.size());
  for (double alpha : config.alpha_grid) result.power.push_back(PowerAtError(roc, alpha));

  result.member_count = static_cast<int>(members.size());
  result.nonmember_count = static_cast<int>(nonmembers.size());
  std::tie(result.member_mean, result.member_variance) = MeanAndVariance(members);
  std::tie(result.nonmember_mean, result.nonmember_variance) =
      MeanAndVariance(nonmembers);
  return result;
}

std::string FormatNumber(double value) { return absl::StrFormat("%.6g", value); }

}  // namespace

absl::StatusOr<NetworkStructure> RandomStructure(std::vector<int> cardinalities,
                                                 int eta, int edge_count,
                                                 uint64_t seed, int64_t max_attempts) {
  if (edge_count < 0) return absl::InvalidArgumentError("edge count must be non-negative");
  const int m = static_cast<int>(cardinalities.size());
  ASSIGN_OR_RETURN(NetworkStructure structure,
                   NetworkStructure::Edgeless(std::move(cardinalities), eta));
  Rng rng = MakeRng(seed);
  int placed = 0;
  for (int64_t attempt = 0; placed < edge_count; ++attempt) {
    if (attempt >= max_attempts || m < 2) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "placed ", placed, " of ", edge_count, " random edges within ",
          max_attempts, " attempts"));
    }
    const int parent = static_cast<int>(UniformIndex(rng, m));
    const int child = static_cast<int>(UniformIndex(rng, m));
    if (structure.CanAddEdge(parent, child)) {
      RETURN_IF_ERROR(structure.AddEdge(parent, child));
      ++placed;
    }
  }
  return structure;
}

absl::StatusOr<BayesianNetwork> RandomNetwork(const NetworkStructure& structure,
                                              uint64_t seed,
                                              const RandomCptOptions& options) {
  if (!(options.uniform_mix >= 0.0 && options.uniform_mix <= 1.0)) {
    return absl::InvalidArgumentError("uniform_mix must lie in [0, 1]");
  }
  Rng rng = MakeRng(seed);
  std::vector<Cpt> cpts(structure.node_count());
  for (int i = 0; i < structure.node_count(); ++i) {
    const int k = structure.cardinality(i);
    cpts[i].cardinality = k;
    const std::vector<double> ones(k, 1.0);
    for (int64_t r = 0; r < structure.ParentConfigCount(i); ++r) {
      for (double p : SampleDirichlet(rng, ones)) {
        cpts[i].probabilities.push_back((1.0 - options.uniform_mix) * p +
                                        options.uniform_mix / k);
      }
    }
  }
  return BayesianNetwork::Create(structure, std::move(cpts));
}

absl::StatusOr<Dataset> BiasedSampleFromGenerator(const BayesianNetwork& generator,
                                                  int count, const BiasSpec& spec,
                                                  uint64_t seed) {
  RETURN_IF_ERROR(ValidateBiasSpec(spec, generator.structure().cardinalities()));
  if (count < 0) return absl::InvalidArgumentError("count must be non-negative");
  Rng rng = MakeRng(seed);
  std::vector<int> accepted;
  int accepted_count = 0;
  int64_t attempts = 0;
  const int batch = std::max(1024, count);
  for (uint64_t batch_index = 0; accepted_count < count; ++batch_index) {
    const Dataset candidates =
        generator.Sample(batch, MixSeed(seed, 1000 + batch_index));
    for (int r = 0; r < batch && accepted_count < count; ++r) {
      if (attempts++ >= spec.max_attempts) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "biased sampling accepted ", accepted_count, " of ", count,
            " records within ", spec.max_attempts, " attempts"));
      }
      if (Uniform01(rng) < SelectionProbability(candidates.row(r), spec)) {
        auto record = candidates.row(r);
        accepted.insert(accepted.end(), record.begin(), record.end());
        ++accepted_count;
      }
    }
  }
  return Dataset::Create(generator.node_names(),
                         generator.structure().cardinalities(), std::move(accepted));
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (static_cast<bool>(config.dataset) == static_cast<bool>(config.generator)) {
    return absl::InvalidArgumentError(
        "exactly one of a population dataset or a generator model is required");
  }
  if (config.splits < 1) return absl::InvalidArgumentError("splits must be at least 1");
  if (config.pool_size < 1 || config.reference_size < 1) {
    return absl::InvalidArgumentError("pool and reference sizes must be positive");
  }
  if (config.nonmember_count < 0) {
    return absl::InvalidArgumentError("nonmember count must be non-negative");
  }
  if (config.dataset &&
      static_cast<int64_t>(config.pool_size) + config.reference_size >
          config.dataset->row_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pool (", config.pool_size, ") + reference (", config.reference_size,
        ") exceeds population size ", config.dataset->row_count()));
  }
  if (config.eta_released < 0 ||
      (config.eta_population_model.has_value() && *config.eta_population_model < 0)) {
    return absl::InvalidArgumentError("eta must be non-negative");
  }
  if (config.release_generator_structure && !config.generator) {
    return absl::InvalidArgumentError(
        "releasing the generator structure needs a generator model");
  }
  if (config.release_generator_structure && config.random_edges.has_value()) {
    return absl::InvalidArgumentError(
        "choose either the generator structure or a random structure");
  }
  if (config.bias.has_value()) {
    RETURN_IF_ERROR(ValidateBiasSpec(
        {config.bias.value(), config.bias_attribute, config.bias_max_attempts},
        PopulationCardinalities(config)));
  }
  if (!(config.prior.pseudo_count > 0.0)) {
    return absl::InvalidArgumentError("prior pseudo-count must be positive");
  }
  if (config.alpha_grid.empty()) return absl::InvalidArgumentError("empty alpha grid");
  for (size_t k = 0; k < config.alpha_grid.size(); ++k) {
    const double a = config.alpha_grid[k];
    if (!(a > 0.0 && a <= 1.0) || (k > 0 && !(a > config.alpha_grid[k - 1]))) {
      return absl::InvalidArgumentError(
          "alpha grid must be strictly increasing within (0, 1]");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config) {
  RETURN_IF_ERROR(ValidateConfig(config));
  ExperimentReport report;
  report.label = config.label;
  report.pool_size = config.pool_size;
  report.eta_released = config.eta_released;
  report.control = config.control;
  report.bias = config.bias;
  report.alpha_grid = config.alpha_grid;
  report.min_support = config.min_support;
  report.model_mismatch = config.eta_population_model.has_value();
  report.mean_power.assign(config.alpha_grid.size(), 0.0);

  for (int s = 0; s < config.splits; ++s) {
    auto split = RunSplit(config, s);
    if (!split.ok()) {
      return absl::Status(split.status().code(),
                          absl::StrCat("split ", s, ": ", split.status().message()));
    }
    report.splits.push_back(*std::move(split));
  }

  const double count = static_cast<double>(report.splits.size());
  std::vector<double> aucs;
  for (const SplitResult& split : report.splits) {
    aucs.push_back(split.auc);
    report.mean_complexity += static_cast<double>(split.complexity) / count;
    report.mean_edges += static_cast<double>(split.edge_count) / count;
    report.low_support_rows += split.low_support_rows;
    for (size_t k = 0; k < split.power.size(); ++k) {
      report.mean_power[k] += split.power[k] / count;
    }
  }
  auto [mean_auc, auc_variance] = MeanAndVariance(aucs);
  report.mean_auc = mean_auc;
  report.auc_standard_error = std::sqrt(auc_variance / count);

  ASSIGN_OR_RETURN(report.theory, LrMoments(report.mean_complexity, config.pool_size));
  ASSIGN_OR_RETURN(report.bound, ComputeBoundCurve(report.mean_complexity,
                                                   config.pool_size,
                                                   config.alpha_grid));
  return report;
}

std::string FormatReport(const ExperimentReport& report) {
  std::string out;
  absl::StrAppend(&out, "label: ", report.label.empty() ? "-" : report.label, "\n");
  absl::StrAppend(&out, "pool_size: ", report.pool_size, "\n");
  absl::StrAppend(&out, "eta_released: ", report.eta_released, "\n");
  absl::StrAppend(&out, "model_mismatch: ", report.model_mismatch ? "yes" : "no", "\n");
  absl::StrAppend(&out, "control: ", report.control ? "yes" : "no", "\n");
  absl::StrAppend(&out, "bias: ",
                  report.bias.has_value() ? FormatNumber(*report.bias) : "none", "\n");
  absl::StrAppend(&out, "splits: ", report.splits.size(), "\n");
  absl::StrAppend(&out, "\n# split seed auc complexity edges low_support "
                        "member_mean member_var nonmember_mean nonmember_var\n");
  for (const SplitResult& s : report.splits) {
    absl::StrAppend(&out, absl::StrFormat(
                              "%d %d %.9f %d %d %d %.9g %.9g %.9g %.9g\n", s.index,
                              s.seed, s.auc, s.complexity, s.edge_count,
                              s.low_support_rows, s.member_mean, s.member_variance,
                              s.nonmember_mean, s.nonmember_variance));
  }
  absl::StrAppend(&out, "\n");
  absl::StrAppend(&out, absl::StrFormat("mean_auc: %.9f\n", report.mean_auc));
  absl::StrAppend(&out, absl::StrFormat("auc_standard_error: %.9f\n",
                                        report.auc_standard_error));
  absl::StrAppend(&out, absl::StrFormat("mean_complexity: %.6f\n", report.mean_complexity));
  absl::StrAppend(&out, absl::StrFormat("mean_edges: %.6f\n", report.mean_edges));
  absl::StrAppend(&out, absl::StrFormat("theoretical_auc: %.9f\n", report.bound.auc));
  absl::StrAppend(&out, absl::StrFormat(
                            "theory_moments: mu0=%.9g var0=%.9g mu1=%.9g var1=%.9g\n",
                            report.theory.mu0, report.theory.var0, report.theory.mu1,
                            report.theory.var1));
  absl::StrAppend(&out, "low_support_rows: ", report.low_support_rows,
                  " (threshold ", report.min_support, ", summed over splits)\n");
  if (report.low_support_rows > 0) {
    absl::StrAppend(&out, "warning: some released parameters rest on fewer than ",
                    report.min_support,
                    " records; the Gaussian approximation may not hold\n");
  }
  return out;
}

std::string FormatMeanRoc(const ExperimentReport& report) {
  std::vector<RocPoint> points;
  for (size_t k = 0; k < report.alpha_grid.size(); ++k) {
    points.push_back({report.alpha_grid[k], report.mean_power[k]});
  }
  const std::vector<std::string> comments = {
      absl::StrCat("mean empirical ROC over ", report.splits.size(), " splits"),
      absl::StrFormat("mean_auc %.6f", report.mean_auc), "alpha power"};
  return FormatCurve(points, comments);
}

std::string FormatBoundCurve(const ExperimentReport& report) {
  const std::vector<std::string> comments = {
      absl::StrFormat("bound for C=%.6g n=%d", report.mean_complexity,
                      report.pool_size),
      absl::StrFormat("bound_auc %.6f", report.bound.auc), "alpha power"};
  return FormatCurve(report.bound.points, comments);
}

absl::StatusOr<ComparisonTable> CompareTable(
    const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) return absl::InvalidArgumentError("no reports to compare");
  std::vector<const ExperimentReport*> rows;
  for (const auto& report : reports) rows.push_back(&report);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return a->mean_complexity < b->mean_complexity;
  });
  ComparisonTable table;
  table.text = absl::StrFormat("%-16s %4s %10s %12s %16s %18s\n", "label", "eta",
                               "edges", "complexity", "AUC (empirical)",
                               "AUC (theoretical)");
  table.csv = "label,eta,edges,complexity,empirical_auc,theoretical_auc\n";
  for (const ExperimentReport* r : rows) {
    const std::string label = r->label.empty() ? "-" : r->label;
    table.text += absl::StrFormat("%-16s %4d %10s %12s %16.4f %18.4f\n", label,
                                  r->eta_released, FormatNumber(r->mean_edges),
                                  FormatNumber(r->mean_complexity), r->mean_auc,
                                  r->bound.auc);
    table.csv += absl::StrFormat("%s,%d,%s,%s,%.6f,%.6f\n", label, r->eta_released,
                                 FormatNumber(r->mean_edges),
                                 FormatNumber(r->mean_complexity), r->mean_auc,
                                 r->bound.auc);
  }
  return table;
}

}  // namespace bntrace
