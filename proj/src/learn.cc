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

#include "bntrace/learn.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "bntrace/random.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

double EntropyOfCounts(std::span<const int64_t> counts, int64_t total) {
  double h = 0.0;
  for (int64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

double CorrelationFromEntropies(double h_i, double h_j, double h_joint) {
  const double marginal = h_i + h_j;
  if (marginal <= 0.0) return 0.0;
  // Rounding can push the ratio a hair outside [1/2, 1].
  return std::clamp(2.0 - 2.0 * h_joint / marginal, 0.0, 1.0);
}

double JointEntropy(const Dataset& dataset, int i, int j) {
  const int ci = dataset.cardinalities()[i];
  const int cj = dataset.cardinalities()[j];
  std::vector<int64_t> counts(static_cast<size_t>(ci) * cj, 0);
  for (int r = 0; r < dataset.row_count(); ++r) {
    ++counts[dataset.value(r, i) * cj + dataset.value(r, j)];
  }
  return EntropyOfCounts(counts, dataset.row_count());
}

// Nodes reachable from `node` along parent -> child edges, including itself.
std::vector<bool> Descendants(const NetworkStructure& structure,
                              const std::vector<std::vector<int>>& children,
                              int node) {
  std::vector<bool> seen(structure.node_count(), false);
  std::vector<int> stack = {node};
  seen[node] = true;
  while (!stack.empty()) {
    const int current = stack.back();
    stack.pop_back();
    for (int c : children[current]) {
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
  }
  return seen;
}

absl::Status CheckSchema(const Dataset& dataset, const NetworkStructure& structure) {
  if (dataset.cardinalities() != structure.cardinalities()) {
    return absl::InvalidArgumentError(
        "dataset attributes do not match the network's node cardinalities");
  }
  return absl::OkStatus();
}

}  // namespace

double ColumnEntropy(const Dataset& dataset, int column) {
  std::vector<int64_t> counts(dataset.cardinalities()[column], 0);
  for (int r = 0; r < dataset.row_count(); ++r) ++counts[dataset.value(r, column)];
  return EntropyOfCounts(counts, dataset.row_count());
}

double EntropyCorrelation(const Dataset& dataset, int i, int j) {
  if (dataset.row_count() == 0) return 0.0;
  if (i > j) std::swap(i, j);
  return CorrelationFromEntropies(ColumnEntropy(dataset, i),
                                  ColumnEntropy(dataset, j),
                                  JointEntropy(dataset, i, j));
}

CorrelationMatrix::CorrelationMatrix(const Dataset& dataset)
    : size_(dataset.attribute_count()),
      values_(static_cast<size_t>(size_) * size_, 0.0) {
  if (dataset.row_count() == 0) return;
  std::vector<double> entropy(size_);
  for (int i = 0; i < size_; ++i) entropy[i] = ColumnEntropy(dataset, i);
  for (int i = 0; i < size_; ++i) {
    values_[i * size_ + i] = entropy[i] > 0.0 ? 1.0 : 0.0;
    for (int j = i + 1; j < size_; ++j) {
      const double corr =
          CorrelationFromEntropies(entropy[i], entropy[j], JointEntropy(dataset, i, j));
      values_[i * size_ + j] = corr;
      values_[j * size_ + i] = corr;
    }
  }
}

CorrelationMatrix::CorrelationMatrix(int size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {}

double ParentScore(const CorrelationMatrix& correlations, int child,
                   std::span<const int> parents, PairSum pair_sum) {
  if (parents.empty()) return 0.0;
  double numerator = 0.0;
  for (int j : parents) numerator += correlations.at(child, j);
  double pair_total = 0.0;
  for (size_t a = 0; a < parents.size(); ++a) {
    for (size_t b = a + 1; b < parents.size(); ++b) {
      pair_total += correlations.at(parents[a], parents[b]);
    }
  }
  if (pair_sum == PairSum::kOrdered) pair_total *= 2.0;
  return numerator / std::sqrt(static_cast<double>(parents.size()) + pair_total);
}

absl::StatusOr<NetworkStructure> LearnStructure(const Dataset& dataset,
                                                const StructureSearchConfig& config) {
  if (config.eta < 0) return absl::InvalidArgumentError("eta must be non-negative");
  if (dataset.row_count() == 0) {
    return absl::InvalidArgumentError("structure learning needs at least one row");
  }
  ASSIGN_OR_RETURN(NetworkStructure structure,
                   NetworkStructure::Edgeless(dataset.cardinalities(), config.eta));
  if (config.eta == 0) return structure;

  const CorrelationMatrix correlations(dataset);
  const int m = structure.node_count();
  struct Proposal {
    int child;
    int parent;
  };
  while (true) {
    std::vector<std::vector<int>> children(m);
    for (int i = 0; i < m; ++i) {
      for (int p : structure.parents(i)) children[p].push_back(i);
    }
    std::vector<Proposal> proposals;
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(structure.parents(i).size()) >= config.eta) continue;
      const std::vector<bool> below = Descendants(structure, children, i);
      std::vector<int> candidate_set = structure.parents(i);
      candidate_set.push_back(-1);
      double best_score =
          ParentScore(correlations, i, structure.parents(i), config.pair_sum);
      int best_parent = -1;
      for (int j = 0; j < m; ++j) {
        if (below[j] || structure.HasEdge(j, i)) continue;
        candidate_set.back() = j;
        const double score =
            ParentScore(correlations, i, candidate_set, config.pair_sum);
        if (score > best_score) {
          best_score = score;
          best_parent = j;
        }
      }
      if (best_parent >= 0) proposals.push_back({i, best_parent});
    }
    int applied = 0;
    for (const Proposal& proposal : proposals) {
      if (structure.CanAddEdge(proposal.parent, proposal.child)) {
        RETURN_IF_ERROR(structure.AddEdge(proposal.parent, proposal.child));
        ++applied;
      }
    }
    if (applied == 0) break;
  }
  return structure;
}

std::vector<std::vector<int64_t>> CountFamilies(const Dataset& dataset,
                                                const NetworkStructure& structure) {
  const int m = structure.node_count();
  std::vector<std::vector<int64_t>> counts(m);
  for (int i = 0; i < m; ++i) {
    counts[i].assign(structure.ParentConfigCount(i) * structure.cardinality(i), 0);
  }
  for (int r = 0; r < dataset.row_count(); ++r) {
    auto record = dataset.row(r);
    for (int i = 0; i < m; ++i) {
      const int64_t row = structure.ParentRow(i, record);
      ++counts[i][row * structure.cardinality(i) + record[i]];
    }
  }
  return counts;
}

absl::StatusOr<BayesianNetwork> LearnParameters(const Dataset& dataset,
                                                const NetworkStructure& structure,
                                                const PriorSpec& prior,
                                                const NetworkOptions& options) {
  if (!(prior.pseudo_count > 0.0)) {
    return absl::InvalidArgumentError("Dirichlet pseudo-count must be positive");
  }
  RETURN_IF_ERROR(CheckSchema(dataset, structure));
  const auto counts = CountFamilies(dataset, structure);
  const int m = structure.node_count();
  std::vector<Cpt> cpts(m);
  std::vector<std::vector<int64_t>> support(m);
  for (int i = 0; i < m; ++i) {
    const int k = structure.cardinality(i);
    const int64_t rows = structure.ParentConfigCount(i);
    cpts[i].cardinality = k;
    cpts[i].probabilities.resize(rows * k);
    support[i].resize(rows);
    for (int64_t r = 0; r < rows; ++r) {
      int64_t n_row = 0;
      for (int j = 0; j < k; ++j) n_row += counts[i][r * k + j];
      support[i][r] = n_row;
      const double denominator = prior.pseudo_count * k + static_cast<double>(n_row);
      for (int j = 0; j < k; ++j) {
        cpts[i].probabilities[r * k + j] =
            (prior.pseudo_count + static_cast<double>(counts[i][r * k + j])) /
            denominator;
      }
    }
  }
  ASSIGN_OR_RETURN(BayesianNetwork network,
                   BayesianNetwork::Create(structure, std::move(cpts),
                                           dataset.attribute_names(), options));
  return network.WithSupportCounts(std::move(support));
}

absl::StatusOr<BayesianNetwork> SamplePosteriorNetwork(
    const Dataset& dataset, const NetworkStructure& structure,
    const PriorSpec& prior, uint64_t seed, const NetworkOptions& options) {
  if (!(prior.pseudo_count > 0.0)) {
    return absl::InvalidArgumentError("Dirichlet pseudo-count must be positive");
  }
  RETURN_IF_ERROR(CheckSchema(dataset, structure));
  const auto counts = CountFamilies(dataset, structure);
  Rng rng = MakeRng(seed);
  const int m = structure.node_count();
  std::vector<Cpt> cpts(m);
  for (int i = 0; i < m; ++i) {
    const int k = structure.cardinality(i);
    const int64_t rows = structure.ParentConfigCount(i);
    cpts[i].cardinality = k;
    cpts[i].probabilities.reserve(rows * k);
    std::vector<double> alphas(k);
    for (int64_t r = 0; r < rows; ++r) {
      for (int j = 0; j < k; ++j) {
        alphas[j] = prior.pseudo_count + static_cast<double>(counts[i][r * k + j]);
      }
      for (double p : SampleDirichlet(rng, alphas)) cpts[i].probabilities.push_back(p);
    }
  }
  return BayesianNetwork::Create(structure, std::move(cpts),
                                 dataset.attribute_names(), options);
}

std::vector<LowSupportRow> MinSupportFilter(const BayesianNetwork& network,
                                            int64_t threshold) {
  std::vector<LowSupportRow> report;
  const auto& support = network.support_counts();
  for (int i = 0; i < static_cast<int>(support.size()); ++i) {
    for (int64_t r = 0; r < static_cast<int64_t>(support[i].size()); ++r) {
      if (support[i][r] < threshold) report.push_back({i, r, support[i][r]});
    }
  }
  return report;
}

absl::StatusOr<Dataset> Synthesize(const Dataset& dataset, int eta, int count,
                                   uint64_t seed, const PriorSpec& prior) {
  if (count < 0) return absl::InvalidArgumentError("count must be non-negative");
  ASSIGN_OR_RETURN(NetworkStructure structure,
                   LearnStructure(dataset, {.eta = eta, .seed = seed}));
  ASSIGN_OR_RETURN(BayesianNetwork posterior_draw,
                   SamplePosteriorNetwork(dataset, structure, prior,
                                          MixSeed(seed, 1)));
  return posterior_draw.Sample(count, MixSeed(seed, 2));
}

}  // namespace bntrace
