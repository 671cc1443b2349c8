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

#ifndef BNTRACE_HARNESS_H_
#define BNTRACE_HARNESS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "bntrace/attack.h"
#include "bntrace/dataset.h"
#include "bntrace/learn.h"
#include "bntrace/network.h"
#include "bntrace/theory.h"

namespace bntrace {

// Proposes uniformly random ordered pairs and keeps each edge that preserves
// acyclicity and the eta cap, until `edge_count` edges are placed.
absl::StatusOr<NetworkStructure> RandomStructure(std::vector<int> cardinalities,
                                                 int eta, int edge_count,
                                                 uint64_t seed,
                                                 int64_t max_attempts = 1'000'000);

// Random CPTs for a synthetic generator. Each row is a Dirichlet(1) draw mixed
// with the uniform distribution, so every entry is at least
// uniform_mix / cardinality.
struct RandomCptOptions {
  double uniform_mix = 0.4;
};

absl::StatusOr<BayesianNetwork> RandomNetwork(const NetworkStructure& structure,
                                              uint64_t seed,
                                              const RandomCptOptions& options = {});

// Rejection sampling of `count` records from a generator with the biased
// selection rule of BiasSpec.
absl::StatusOr<Dataset> BiasedSampleFromGenerator(const BayesianNetwork& generator,
                                                  int count, const BiasSpec& spec,
                                                  uint64_t seed);

struct ExperimentConfig {
  std::string label;
  // Exactly one population source. A dataset is split without replacement; a
  // generator model yields fresh pool, reference and non-member draws.
  std::shared_ptr<const Dataset> dataset;
  std::shared_ptr<const BayesianNetwork> generator;

  int pool_size = 0;
  int reference_size = 0;
  // Generator: non-members drawn per split (0 means reference_size).
  // Dataset: cap on held-out rows used as non-members (0 means all of them).
  int nonmember_count = 0;
  // Dataset source: use every population row, pool members included, as the
  // negative set.
  bool nonmembers_include_pool = false;

  int eta_released = 0;
  // Learn the attacker's population model with its own structure (model
  // mismatch experiments).
  std::optional<int> eta_population_model;
  // Release the generator's own structure instead of learning one.
  bool release_generator_structure = false;
  // Release a random structure with this many edges instead of a learned one.
  std::optional<int> random_edges;

  std::optional<double> bias;
  std::optional<int> bias_attribute;
  int64_t bias_max_attempts = 100'000'000;

  // Release the population model itself (no-leakage control).
  bool control = false;

  int splits = 50;
  uint64_t seed = 0;
  PriorSpec prior;
  int64_t min_support = 50;
  std::vector<double> alpha_grid = LogAlphaGrid();
};

absl::Status ValidateConfig(const ExperimentConfig& config);

struct SplitResult {
  int index = 0;
  uint64_t seed = 0;
  double auc = 0.0;
  int64_t complexity = 0;
  int edge_count = 0;
  int64_t low_support_rows = 0;
  int member_count = 0;
  int nonmember_count = 0;
  double member_mean = 0.0;
  double member_variance = 0.0;
  double nonmember_mean = 0.0;
  double nonmember_variance = 0.0;
  std::vector<double> power;  // on the report's alpha grid
};

struct ExperimentReport {
  std::string label;
  int pool_size = 0;
  int eta_released = 0;
  bool model_mismatch = false;
  bool control = false;
  std::optional<double> bias;
  std::vector<double> alpha_grid;
  std::vector<SplitResult> splits;
  // Vertical average of the per-split ROC curves.
  std::vector<double> mean_power;
  double mean_auc = 0.0;
  double auc_standard_error = 0.0;
  double mean_complexity = 0.0;
  double mean_edges = 0.0;
  int64_t min_support = 0;
  int64_t low_support_rows = 0;  // summed over splits
  TheoryProfile theory;          // at the mean released complexity
  BoundCurve bound;              // on alpha_grid
};

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

// Deterministic plain-text rendering of a report.
std::string FormatReport(const ExperimentReport& report);

// The mean empirical ROC and the bound as plottable two-column files.
std::string FormatMeanRoc(const ExperimentReport& report);
std::string FormatBoundCurve(const ExperimentReport& report);

struct ComparisonTable {
  std::string text;
  std::string csv;
};

// One row per report, sorted by ascending complexity.
absl::StatusOr<ComparisonTable> CompareTable(const std::vector<ExperimentReport>& reports);

}  // namespace bntrace

#endif  // BNTRACE_HARNESS_H_
