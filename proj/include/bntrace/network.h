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

#ifndef BNTRACE_NETWORK_H_
#define BNTRACE_NETWORK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bntrace/dataset.h"

namespace bntrace {

// Topological order of a parent-list graph. Among ready nodes the lowest index
// goes first. Fails with a cycle witness if the graph is not acyclic.
absl::StatusOr<std::vector<int>> TopologicalOrder(
    std::span<const std::vector<int>> parents);

// DAG over m categorical nodes with a cap `eta` on the number of parents.
class NetworkStructure {
 public:
  // `eta` defaults to the largest parent count in `parents`.
  static absl::StatusOr<NetworkStructure> Create(
      std::vector<int> cardinalities, std::vector<std::vector<int>> parents,
      std::optional<int> eta = std::nullopt);

  static absl::StatusOr<NetworkStructure> Edgeless(std::vector<int> cardinalities,
                                                   int eta = 0);

  int node_count() const { return static_cast<int>(cardinalities_.size()); }
  int eta() const { return eta_; }
  int cardinality(int node) const { return cardinalities_[node]; }
  const std::vector<int>& cardinalities() const { return cardinalities_; }
  const std::vector<int>& parents(int node) const { return parents_[node]; }
  const std::vector<std::vector<int>>& all_parents() const { return parents_; }
  const std::vector<int>& topological_order() const { return order_; }
  int edge_count() const;

  // |V(Pa_i)|: product of parent cardinalities, 1 for a parentless node.
  int64_t ParentConfigCount(int node) const;

  // Mixed-radix index of the parent assignment in `record`; the first parent
  // is the most significant digit.
  int64_t ParentRow(int node, std::span<const int> record) const;

  // Parent values for a row index; inverse of ParentRow.
  std::vector<int> ParentValues(int node, int64_t row) const;

  bool HasEdge(int parent, int child) const;
  // True if `to` is reachable from `from` along parent -> child edges.
  bool HasPath(int from, int to) const;
  // Whether parent -> child keeps the graph acyclic and within the eta cap.
  bool CanAddEdge(int parent, int child) const;
  absl::Status AddEdge(int parent, int child);

  bool operator==(const NetworkStructure& other) const {
    return cardinalities_ == other.cardinalities_ && parents_ == other.parents_;
  }

 private:
  NetworkStructure() = default;

  std::vector<int> cardinalities_;
  std::vector<std::vector<int>> parents_;
  std::vector<int> order_;
  int eta_ = 0;
};

// Number of independent parameters: sum over nodes of
// |V(Pa_i)| * (|V(X_i)| - 1).
int64_t Complexity(const NetworkStructure& structure);

struct NetworkOptions {
  // Probabilities below the floor are raised to it and the row renormalized.
  // Zero disables the floor.
  double probability_floor = 1e-6;
  double sum_tolerance = 1e-9;
};

// One conditional distribution per parent assignment, stored row-major as
// ParentConfigCount(i) rows of cardinality(i) entries.
struct Cpt {
  int cardinality = 0;
  std::vector<double> probabilities;

  int64_t row_count() const {
    return cardinality == 0
               ? 0
               : static_cast<int64_t>(probabilities.size()) / cardinality;
  }
  std::span<const double> row(int64_t r) const {
    return {probabilities.data() + r * cardinality,
            static_cast<size_t>(cardinality)};
  }
};

// A structure plus its CPTs. Immutable after construction.
class BayesianNetwork {
 public:
  static absl::StatusOr<BayesianNetwork> Create(
      NetworkStructure structure, std::vector<Cpt> cpts,
      std::vector<std::string> node_names = {},
      const NetworkOptions& options = {});

  const NetworkStructure& structure() const { return structure_; }
  int node_count() const { return structure_.node_count(); }
  const std::vector<std::string>& node_names() const { return node_names_; }
  const Cpt& cpt(int node) const { return cpts_[node]; }

  double probability(int node, int64_t row, int value) const {
    return cpts_[node].probabilities[row * cpts_[node].cardinality + value];
  }
  double log_probability(int node, int64_t row, int value) const {
    return log_probabilities_[node][row * cpts_[node].cardinality + value];
  }

  // ln Pr[record]. Returns -infinity if any factor is zero; use
  // FirstZeroFactor to find which node caused it.
  double LogJoint(std::span<const int> record) const;
  std::optional<int> FirstZeroFactor(std::span<const int> record) const;

  // Validates that a record fits the node cardinalities.
  absl::Status CheckRecord(std::span<const int> record) const;

  // Ancestral sampling in topological order.
  Dataset Sample(int count, uint64_t seed) const;

  // Number of training records behind each CPT row, when the network was
  // learned from data; empty otherwise.
  const std::vector<std::vector<int64_t>>& support_counts() const {
    return support_counts_;
  }
  BayesianNetwork WithSupportCounts(
      std::vector<std::vector<int64_t>> support_counts) const;

 private:
  BayesianNetwork(NetworkStructure structure) : structure_(std::move(structure)) {}

  NetworkStructure structure_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<double>> log_probabilities_;
  std::vector<std::string> node_names_;
  std::vector<std::vector<int64_t>> support_counts_;
};

std::vector<std::string> DefaultNodeNames(int node_count);

}  // namespace bntrace

#endif  // BNTRACE_NETWORK_H_
