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

#include "bntrace/network.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "bntrace/random.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

// Walks parent pointers among unordered nodes until a node repeats.
std::vector<int> FindCycle(std::span<const std::vector<int>> parents,
                           const std::vector<bool>& placed) {
  const int m = static_cast<int>(parents.size());
  int start = 0;
  while (start < m && placed[start]) ++start;
  std::vector<int> position(m, -1);
  std::vector<int> path;
  int node = start;
  while (position[node] < 0) {
    position[node] = static_cast<int>(path.size());
    path.push_back(node);
    for (int p : parents[node]) {
      if (!placed[p]) {
        node = p;
        break;
      }
    }
  }
  std::vector<int> cycle(path.begin() + position[node], path.end());
  // Edges were followed child -> parent; report in edge direction.
  std::reverse(cycle.begin(), cycle.end());
  cycle.push_back(cycle.front());
  return cycle;
}

}  // namespace

absl::StatusOr<std::vector<int>> TopologicalOrder(
    std::span<const std::vector<int>> parents) {
  const int m = static_cast<int>(parents.size());
  std::vector<int> missing(m);
  std::vector<std::vector<int>> children(m);
  for (int i = 0; i < m; ++i) {
    missing[i] = static_cast<int>(parents[i].size());
    for (int p : parents[i]) {
      if (p < 0 || p >= m) {
        return absl::InvalidArgumentError(
            absl::StrCat("node ", i, " has out-of-range parent ", p));
      }
      children[p].push_back(i);
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < m; ++i) {
    if (missing[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(m);
  std::vector<bool> placed(m, false);
  while (!ready.empty()) {
    const int node = ready.top();
    ready.pop();
    order.push_back(node);
    placed[node] = true;
    for (int child : children[node]) {
      if (--missing[child] == 0) ready.push(child);
    }
  }
  if (static_cast<int>(order.size()) != m) {
    return absl::InvalidArgumentError(
        absl::StrCat("graph has a cycle: ",
                     absl::StrJoin(FindCycle(parents, placed), " -> ")));
  }
  return order;
}

absl::StatusOr<NetworkStructure> NetworkStructure::Create(
    std::vector<int> cardinalities, std::vector<std::vector<int>> parents,
    std::optional<int> eta) {
  const int m = static_cast<int>(cardinalities.size());
  if (static_cast<int>(parents.size()) != m) {
    return absl::InvalidArgumentError("one parent list per node is required");
  }
  int max_parents = 0;
  for (int i = 0; i < m; ++i) {
    if (cardinalities[i] < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("node ", i, " has cardinality below 2"));
    }
    std::vector<int> sorted = parents[i];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("node ", i, " lists a parent twice"));
    }
    if (std::binary_search(sorted.begin(), sorted.end(), i)) {
      return absl::InvalidArgumentError(absl::StrCat("node ", i, " is its own parent"));
    }
    max_parents = std::max(max_parents, static_cast<int>(parents[i].size()));
  }
  const int cap = eta.value_or(max_parents);
  if (cap < 0) return absl::InvalidArgumentError("eta must be non-negative");
  if (max_parents > cap) {
    return absl::InvalidArgumentError(absl::StrCat(
        "a node has ", max_parents, " parents, above eta = ", cap));
  }
  ASSIGN_OR_RETURN(std::vector<int> order, TopologicalOrder(parents));
  NetworkStructure structure;
  structure.cardinalities_ = std::move(cardinalities);
  structure.parents_ = std::move(parents);
  structure.order_ = std::move(order);
  structure.eta_ = cap;
  return structure;
}

absl::StatusOr<NetworkStructure> NetworkStructure::Edgeless(
    std::vector<int> cardinalities, int eta) {
  const size_t m = cardinalities.size();
  return Create(std::move(cardinalities), std::vector<std::vector<int>>(m), eta);
}

int NetworkStructure::edge_count() const {
  int edges = 0;
  for (const auto& p : parents_) edges += static_cast<int>(p.size());
  return edges;
}

int64_t NetworkStructure::ParentConfigCount(int node) const {
  int64_t count = 1;
  for (int p : parents_[node]) count *= cardinalities_[p];
  return count;
}

int64_t NetworkStructure::ParentRow(int node, std::span<const int> record) const {
  int64_t row = 0;
  for (int p : parents_[node]) row = row * cardinalities_[p] + record[p];
  return row;
}

std::vector<int> NetworkStructure::ParentValues(int node, int64_t row) const {
  const auto& pa = parents_[node];
  std::vector<int> values(pa.size());
  for (int k = static_cast<int>(pa.size()) - 1; k >= 0; --k) {
    values[k] = static_cast<int>(row % cardinalities_[pa[k]]);
    row /= cardinalities_[pa[k]];
  }
  return values;
}

bool NetworkStructure::HasEdge(int parent, int child) const {
  const auto& pa = parents_[child];
  return std::find(pa.begin(), pa.end(), parent) != pa.end();
}

bool NetworkStructure::HasPath(int from, int to) const {
  // Search backwards from `to` through parents.
  std::vector<bool> seen(node_count(), false);
  std::vector<int> stack = {to};
  seen[to] = true;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (node == from) return true;
    for (int p : parents_[node]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

bool NetworkStructure::CanAddEdge(int parent, int child) const {
  if (parent == child || parent < 0 || child < 0 || parent >= node_count() ||
      child >= node_count()) {
    return false;
  }
  if (static_cast<int>(parents_[child].size()) >= eta_) return false;
  if (HasEdge(parent, child)) return false;
  return !HasPath(child, parent);
}

absl::Status NetworkStructure::AddEdge(int parent, int child) {
  if (!CanAddEdge(parent, child)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "edge ", parent, " -> ", child,
        " would break acyclicity, the eta cap, or is already present"));
  }
  parents_[child].push_back(parent);
  // Appending an edge to a DAG keeps it acyclic, so this cannot fail.
  order_ = *TopologicalOrder(parents_);
  return absl::OkStatus();
}

int64_t Complexity(const NetworkStructure& structure) {
  int64_t total = 0;
  for (int i = 0; i < structure.node_count(); ++i) {
    total += structure.ParentConfigCount(i) * (structure.cardinality(i) - 1);
  }
  return total;
}

std::vector<std::string> DefaultNodeNames(int node_count) {
  std::vector<std::string> names;
  names.reserve(node_count);
  for (int i = 0; i < node_count; ++i) names.push_back(absl::StrCat("X", i));
  return names;
}

absl::StatusOr<BayesianNetwork> BayesianNetwork::Create(
    NetworkStructure structure, std::vector<Cpt> cpts,
    std::vector<std::string> node_names, const NetworkOptions& options) {
  const int m = structure.node_count();
  if (static_cast<int>(cpts.size()) != m) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", m, " CPTs, got ", cpts.size()));
  }
  if (node_names.empty()) node_names = DefaultNodeNames(m);
  if (static_cast<int>(node_names.size()) != m) {
    return absl::InvalidArgumentError("one name per node is required");
  }
  for (int i = 0; i < m; ++i) {
    Cpt& cpt = cpts[i];
    const int k = structure.cardinality(i);
    const int64_t rows = structure.ParentConfigCount(i);
    if (cpt.cardinality != k ||
        static_cast<int64_t>(cpt.probabilities.size()) != rows * k) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CPT of node ", node_names[i], " must have ", rows, " rows of ", k,
          " entries"));
    }
    for (int64_t r = 0; r < rows; ++r) {
      double* entries = cpt.probabilities.data() + r * k;
      double sum = 0.0;
      for (int v = 0; v < k; ++v) {
        if (!(entries[v] >= 0.0 && entries[v] <= 1.0)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CPT of node ", node_names[i], " row ", r,
              " has an entry outside [0, 1]"));
        }
        sum += entries[v];
      }
      if (std::abs(sum - 1.0) > options.sum_tolerance) {
        return absl::InvalidArgumentError(absl::StrCat(
            "CPT of node ", node_names[i], " row ", r, " sums to ", sum));
      }
      if (options.probability_floor > 0.0) {
        bool clamped = false;
        double clamped_sum = 0.0;
        for (int v = 0; v < k; ++v) {
          if (entries[v] < options.probability_floor) {
            entries[v] = options.probability_floor;
            clamped = true;
          }
          clamped_sum += entries[v];
        }
        if (clamped) {
          for (int v = 0; v < k; ++v) entries[v] /= clamped_sum;
        }
      }
    }
  }
  BayesianNetwork network(std::move(structure));
  network.log_probabilities_.resize(m);
  for (int i = 0; i < m; ++i) {
    auto& logs = network.log_probabilities_[i];
    logs.reserve(cpts[i].probabilities.size());
    for (double p : cpts[i].probabilities) logs.push_back(std::log(p));
  }
  network.cpts_ = std::move(cpts);
  network.node_names_ = std::move(node_names);
  return network;
}

absl::Status BayesianNetwork::CheckRecord(std::span<const int> record) const {
  if (static_cast<int>(record.size()) != node_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "record has ", record.size(), " values, network has ", node_count(),
        " nodes"));
  }
  for (int i = 0; i < node_count(); ++i) {
    if (record[i] < 0 || record[i] >= structure_.cardinality(i)) {
      return absl::InvalidArgumentError(
          absl::StrCat("value ", record[i], " out of range for node ",
                       node_names_[i]));
    }
  }
  return absl::OkStatus();
}

double BayesianNetwork::LogJoint(std::span<const int> record) const {
  double total = 0.0;
  for (int i = 0; i < node_count(); ++i) {
    total += log_probability(i, structure_.ParentRow(i, record), record[i]);
  }
  return total;
}

std::optional<int> BayesianNetwork::FirstZeroFactor(
    std::span<const int> record) const {
  for (int i = 0; i < node_count(); ++i) {
    if (probability(i, structure_.ParentRow(i, record), record[i]) == 0.0) {
      return i;
    }
  }
  return std::nullopt;
}

Dataset BayesianNetwork::Sample(int count, uint64_t seed) const {
  Rng rng = MakeRng(seed);
  const int m = node_count();
  std::vector<int> values(static_cast<size_t>(count) * m);
  for (int r = 0; r < count; ++r) {
    std::span<int> record(values.data() + static_cast<size_t>(r) * m, m);
    for (int node : structure_.topological_order()) {
      const int64_t row = structure_.ParentRow(node, record);
      record[node] = SampleCategorical(rng, cpts_[node].row(row));
    }
  }
  // Sampled values are in range by construction.
  return *Dataset::Create(node_names_, structure_.cardinalities(),
                          std::move(values));
}

BayesianNetwork BayesianNetwork::WithSupportCounts(
    std::vector<std::vector<int64_t>> support_counts) const {
  BayesianNetwork copy = *this;
  copy.support_counts_ = std::move(support_counts);
  return copy;
}

}  // namespace bntrace
