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

#ifndef BNTRACE_LEARN_H_
#define BNTRACE_LEARN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bntrace/dataset.h"
#include "bntrace/network.h"

namespace bntrace {

// Symmetric Dirichlet prior on every CPT row.
struct PriorSpec {
  double pseudo_count = 1.0;
};

// How the parent-parent correlation sum in the score denominator counts pairs.
enum class PairSum {
  kOrdered,    // every unordered pair twice
  kUnordered,  // every unordered pair once
};

struct StructureSearchConfig {
  int eta = 0;
  uint64_t seed = 0;  // reserved; the search is deterministic
  PairSum pair_sum = PairSum::kOrdered;
};

// Empirical entropy (natural log) of one column.
double ColumnEntropy(const Dataset& dataset, int column);

// 2 - 2 H(Xi, Xj) / (H(Xi) + H(Xj)); 0 when both columns are constant.
double EntropyCorrelation(const Dataset& dataset, int i, int j);

// Pairwise EntropyCorrelation for all attribute pairs, computed once.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(const Dataset& dataset);
  CorrelationMatrix(int size, std::vector<double> values);

  int size() const { return size_; }
  double at(int i, int j) const { return values_[i * size_ + j]; }

 private:
  int size_;
  std::vector<double> values_;
};

// Correlation-based merit of a parent set for `child`:
//   sum_j corr(child, j) / sqrt(|S| + sum_{j != k} corr(j, k)).
// The empty set scores 0.
double ParentScore(const CorrelationMatrix& correlations, int child,
                   std::span<const int> parents, PairSum pair_sum = PairSum::kOrdered);

// Greedy parent addition. Every round, each node below the eta cap proposes
// the single parent that maximizes its score (lowest index wins ties); a
// proposal counts only if it strictly improves the node's score. Proposals are
// applied by ascending child index, skipping any that would now close a cycle.
// Stops after a round with no improvement.
absl::StatusOr<NetworkStructure> LearnStructure(const Dataset& dataset,
                                                const StructureSearchConfig& config);

// Per node and parent assignment: value counts c[v][j], flattened row-major.
std::vector<std::vector<int64_t>> CountFamilies(const Dataset& dataset,
                                                const NetworkStructure& structure);

// Posterior-mode parameters (pseudo_count + c_j) / sum_j (pseudo_count + c_j).
// The result carries per-row support counts.
absl::StatusOr<BayesianNetwork> LearnParameters(const Dataset& dataset,
                                                const NetworkStructure& structure,
                                                const PriorSpec& prior,
                                                const NetworkOptions& options = {});

// One draw of every CPT row from its Dirichlet(pseudo_count + counts)
// posterior.
absl::StatusOr<BayesianNetwork> SamplePosteriorNetwork(
    const Dataset& dataset, const NetworkStructure& structure,
    const PriorSpec& prior, uint64_t seed, const NetworkOptions& options = {});

struct LowSupportRow {
  int node = 0;
  int64_t row = 0;
  int64_t support = 0;

  bool operator==(const LowSupportRow&) const = default;
};

// CPT rows estimated from fewer than `threshold` records. Empty for networks
// that carry no support counts.
std::vector<LowSupportRow> MinSupportFilter(const BayesianNetwork& network,
                                            int64_t threshold);

// Learn a structure with the given eta, draw parameters from the posterior,
// then sample `count` records.
absl::StatusOr<Dataset> Synthesize(const Dataset& dataset, int eta, int count,
                                   uint64_t seed, const PriorSpec& prior);

}  // namespace bntrace

#endif  // BNTRACE_LEARN_H_
