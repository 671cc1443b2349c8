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

#include <cmath>
#include <numeric>

#include "bntrace/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace bntrace {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

// Builds a dataset from per-row value lists.
Dataset Rows(std::vector<int> cards, const std::vector<std::vector<int>>& rows) {
  std::vector<std::string> names;
  for (size_t c = 0; c < cards.size(); ++c) names.push_back("c" + std::to_string(c));
  std::vector<int> values;
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  return *Dataset::Create(std::move(names), std::move(cards), std::move(values));
}

// Joint counts over two binary columns, repeated into a dataset.
Dataset PairCounts(int n00, int n01, int n10, int n11) {
  std::vector<std::vector<int>> rows;
  rows.insert(rows.end(), n00, {0, 0});
  rows.insert(rows.end(), n01, {0, 1});
  rows.insert(rows.end(), n10, {1, 0});
  rows.insert(rows.end(), n11, {1, 1});
  return Rows({2, 2}, rows);
}

Dataset RandomDataset(Rng& rng, int rows, int columns, int max_card) {
  std::vector<int> cards(columns);
  for (int& c : cards) c = 2 + static_cast<int>(UniformIndex(rng, max_card - 1));
  std::vector<std::vector<int>> data(rows, std::vector<int>(columns));
  for (auto& row : data) {
    for (int c = 0; c < columns; ++c) row[c] = static_cast<int>(UniformIndex(rng, cards[c]));
  }
  return Rows(cards, data);
}

TEST(EntropyCorrelationTest, DuplicatedColumnIsOne) {
  Rng rng = MakeRng(1);
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < 200; ++r) {
    const int v = static_cast<int>(UniformIndex(rng, 3));
    rows.push_back({v, v});
  }
  EXPECT_NEAR(EntropyCorrelation(Rows({3, 3}, rows), 0, 1), 1.0, 1e-12);
}

TEST(EntropyCorrelationTest, BalancedIndependentPairIsZero) {
  const Dataset dataset = PairCounts(25, 25, 25, 25);
  EXPECT_NEAR(ColumnEntropy(dataset, 0), std::log(2.0), 1e-12);
  EXPECT_NEAR(EntropyCorrelation(dataset, 0, 1), 0.0, 1e-12);
}

TEST(EntropyCorrelationTest, DiagonalJointIsOne) {
  EXPECT_NEAR(EntropyCorrelation(PairCounts(50, 0, 0, 50), 0, 1), 1.0, 1e-12);
}

TEST(EntropyCorrelationTest, ConstantColumnsAreZero) {
  EXPECT_EQ(EntropyCorrelation(PairCounts(10, 0, 0, 0), 0, 1), 0.0);
  EXPECT_NEAR(EntropyCorrelation(PairCounts(10, 10, 0, 0), 0, 1), 0.0, 1e-12);
}

TEST(EntropyCorrelationTest, SymmetricAndBoundedOnRandomData) {
  Rng rng = MakeRng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const Dataset dataset =
        RandomDataset(rng, 1 + static_cast<int>(UniformIndex(rng, 30)), 3, 4);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double forward = EntropyCorrelation(dataset, i, j);
        EXPECT_GE(forward, 0.0);
        EXPECT_LE(forward, 1.0);
        EXPECT_DOUBLE_EQ(forward, EntropyCorrelation(dataset, j, i));
      }
    }
  }
}

TEST(ParentScoreTest, Examples) {
  // Node 0 is the child; corr(0,1) = corr(0,2) = 0.5, corr(1,2) = 0.
  const CorrelationMatrix corr(3, {1.0, 0.5, 0.5,
                                   0.5, 1.0, 0.0,
                                   0.5, 0.0, 1.0});
  EXPECT_EQ(ParentScore(corr, 0, {}), 0.0);
  EXPECT_DOUBLE_EQ(ParentScore(corr, 0, std::vector<int>{1}), 0.5);
  EXPECT_NEAR(ParentScore(corr, 0, std::vector<int>{1, 2}), 0.7071, 1e-4);
  EXPECT_NEAR(ParentScore(corr, 0, std::vector<int>{1, 2}), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ParentScoreTest, PairSumConventions) {
  const CorrelationMatrix corr(3, {1.0, 0.5, 0.5,
                                   0.5, 1.0, 0.5,
                                   0.5, 0.5, 1.0});
  const std::vector<int> parents = {1, 2};
  EXPECT_DOUBLE_EQ(ParentScore(corr, 0, parents, PairSum::kOrdered),
                   1.0 / std::sqrt(2.0 + 2 * 0.5));
  EXPECT_DOUBLE_EQ(ParentScore(corr, 0, parents, PairSum::kUnordered),
                   1.0 / std::sqrt(2.0 + 0.5));
}

TEST(LearnStructureTest, ZeroEtaIsEdgeless) {
  Rng rng = MakeRng(3);
  auto structure = LearnStructure(RandomDataset(rng, 50, 4, 3), {.eta = 0});
  ASSERT_TRUE(structure.ok());
  EXPECT_EQ(structure->edge_count(), 0);
  EXPECT_EQ(Complexity(*structure), Complexity(*NetworkStructure::Edgeless(
                                        structure->cardinalities())));
}

TEST(LearnStructureTest, DuplicatedColumnGetsOneEdge) {
  // Columns 0 and 1 are copies; column 2 is constant and carries no signal.
  // Round one: node 0 proposes parent 1 and node 1 proposes parent 0. The
  // lower-indexed child is applied first, the reverse edge would close a cycle.
  Rng rng = MakeRng(4);
  std::vector<std::vector<int>> rows;
  for (int r = 0; r < 100; ++r) {
    const int v = static_cast<int>(UniformIndex(rng, 2));
    rows.push_back({v, v, 0});
  }
  auto structure = LearnStructure(Rows({2, 2, 2}, rows), {.eta = 1});
  ASSERT_TRUE(structure.ok());
  EXPECT_EQ(structure->edge_count(), 1);
  EXPECT_THAT(structure->parents(0), ElementsAre(1));
  EXPECT_THAT(structure->parents(1), IsEmpty());
  EXPECT_THAT(structure->parents(2), IsEmpty());
}

TEST(LearnStructureTest, AlwaysDagWithinCap) {
  Rng rng = MakeRng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int eta = static_cast<int>(UniformIndex(rng, 4));
    const Dataset dataset = RandomDataset(rng, 20 + static_cast<int>(UniformIndex(rng, 80)),
                                          3 + static_cast<int>(UniformIndex(rng, 5)), 3);
    auto structure = LearnStructure(dataset, {.eta = eta});
    ASSERT_TRUE(structure.ok());
    EXPECT_TRUE(TopologicalOrder(structure->all_parents()).ok());
    for (int i = 0; i < structure->node_count(); ++i) {
      EXPECT_LE(static_cast<int>(structure->parents(i).size()), eta);
    }
    auto again = LearnStructure(dataset, {.eta = eta});
    EXPECT_EQ(*again, *structure);
  }
}

TEST(LearnParametersTest, UniformPriorExample) {
  const Dataset dataset = Rows({2}, {{0}, {0}, {0}, {1}});
  auto network = LearnParameters(dataset, *NetworkStructure::Edgeless({2}), {});
  ASSERT_TRUE(network.ok());
  EXPECT_NEAR(network->probability(0, 0, 0), 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(network->probability(0, 0, 1), 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(network->probability(0, 0, 0), 0.6667, 1e-4);
}

TEST(LearnParametersTest, UnseenParentRowIsUniform) {
  // Parent never takes value 1, so the child's second row has no data.
  const Dataset dataset = Rows({2, 3}, {{0, 0}, {0, 1}, {0, 2}, {0, 2}});
  auto structure = NetworkStructure::Create({2, 3}, {{}, {0}});
  auto network = LearnParameters(dataset, *structure, {.pseudo_count = 1.0});
  ASSERT_TRUE(network.ok());
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(network->probability(1, 1, v), 1.0 / 3.0, 1e-12);
  EXPECT_THAT(network->support_counts()[1], ElementsAre(4, 0));
}

TEST(LearnParametersTest, TinyPriorRecoversMaximumLikelihood) {
  std::vector<std::vector<int>> rows(7, {0});
  rows.insert(rows.end(), 3, {1});
  auto network = LearnParameters(Rows({2}, rows), *NetworkStructure::Edgeless({2}),
                                 {.pseudo_count = 1e-9}, {.probability_floor = 0.0});
  ASSERT_TRUE(network.ok());
  EXPECT_NEAR(network->probability(0, 0, 0), 0.7, 1e-6);
  EXPECT_NEAR(network->probability(0, 0, 1), 0.3, 1e-6);
}

TEST(LearnParametersTest, ExhaustiveCountGrid) {
  for (double alpha : {1.0, 0.5}) {
    for (int k = 2; k <= 3; ++k) {
      std::vector<int> counts(k, 0);
      while (true) {
        // A leading always-zero parent column lets every count vector,
        // including all zeros, sit under parent value 1 of an empty row.
        std::vector<std::vector<int>> rows = {{0, 0}};
        for (int v = 0; v < k; ++v) rows.insert(rows.end(), counts[v], {1, v});
        auto structure = NetworkStructure::Create({2, k}, {{}, {0}});
        auto network = LearnParameters(Rows({2, k}, rows), *structure,
                                       {.pseudo_count = alpha}, {.probability_floor = 0.0});
        ASSERT_TRUE(network.ok());
        const double total = k * alpha + std::accumulate(counts.begin(), counts.end(), 0);
        for (int v = 0; v < k; ++v) {
          EXPECT_NEAR(network->probability(1, 1, v), (alpha + counts[v]) / total, 1e-12);
        }
        int d = 0;
        while (d < k && ++counts[d] > 5) counts[d++] = 0;
        if (d == k) break;
      }
    }
  }
}

TEST(LearnParametersTest, MatchesEmpiricalFrequenciesOnRandomData) {
  Rng rng = MakeRng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset dataset = RandomDataset(rng, 30, 3, 3);
    auto structure = LearnStructure(dataset, {.eta = 2});
    auto network = LearnParameters(dataset, *structure, {.pseudo_count = 1e-9},
                                   {.probability_floor = 0.0});
    ASSERT_TRUE(network.ok());
    for (int i = 0; i < 3; ++i) {
      for (int64_t row = 0; row < structure->ParentConfigCount(i); ++row) {
        std::vector<double> counts(dataset.cardinalities()[i], 0.0);
        double support = 0;
        for (int r = 0; r < dataset.row_count(); ++r) {
          if (structure->ParentRow(i, dataset.row(r)) != row) continue;
          counts[dataset.value(r, i)] += 1;
          support += 1;
        }
        EXPECT_EQ(network->support_counts()[i][row], support);
        if (support == 0) continue;
        for (size_t v = 0; v < counts.size(); ++v) {
          EXPECT_NEAR(network->probability(i, row, v), counts[v] / support, 1e-6);
        }
      }
    }
  }
}

BayesianNetwork KnownChain() {
  auto structure = NetworkStructure::Create({2, 3, 2}, {{}, {0}, {1}});
  return *BayesianNetwork::Create(
      *structure, {Cpt{2, {0.35, 0.65}},
                   Cpt{3, {0.5, 0.3, 0.2, 0.1, 0.2, 0.7}},
                   Cpt{2, {0.9, 0.1, 0.4, 0.6, 0.25, 0.75}}});
}

TEST(LearnParametersTest, RecoversGeneratorWithinThreeStandardErrors) {
  const BayesianNetwork truth = KnownChain();
  const Dataset sample = truth.Sample(200000, 77);
  auto learned = LearnParameters(sample, truth.structure(), {});
  ASSERT_TRUE(learned.ok());
  for (int i = 0; i < 3; ++i) {
    for (int64_t row = 0; row < truth.structure().ParentConfigCount(i); ++row) {
      const double support = learned->support_counts()[i][row];
      for (int v = 0; v < truth.structure().cardinality(i); ++v) {
        const double p = truth.probability(i, row, v);
        const double se = std::sqrt(p * (1 - p) / support);
        EXPECT_NEAR(learned->probability(i, row, v), p, 3 * se)
            << "node " << i << " row " << row << " value " << v;
      }
    }
  }
}

TEST(LearnParametersTest, ErrorShrinksAtRootNRate) {
  const BayesianNetwork truth = KnownChain();
  std::vector<double> log_n;
  std::vector<double> log_err;
  for (int n : {1000, 10000, 100000}) {
    double err = 0;
    int terms = 0;
    for (uint64_t rep = 0; rep < 20; ++rep) {
      auto learned = LearnParameters(truth.Sample(n, 1000 * rep + n), truth.structure(), {});
      for (int i = 0; i < 3; ++i) {
        for (int64_t row = 0; row < truth.structure().ParentConfigCount(i); ++row) {
          for (int v = 0; v < truth.structure().cardinality(i); ++v) {
            err += std::abs(learned->probability(i, row, v) - truth.probability(i, row, v));
            ++terms;
          }
        }
      }
    }
    log_n.push_back(std::log(n));
    log_err.push_back(std::log(err / terms));
  }
  const double mean_x = (log_n[0] + log_n[1] + log_n[2]) / 3;
  const double mean_y = (log_err[0] + log_err[1] + log_err[2]) / 3;
  double sxy = 0;
  double sxx = 0;
  for (int k = 0; k < 3; ++k) {
    sxy += (log_n[k] - mean_x) * (log_err[k] - mean_y);
    sxx += (log_n[k] - mean_x) * (log_n[k] - mean_x);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.15);
}

TEST(MinSupportFilterTest, Examples) {
  std::vector<std::vector<int>> rows(88, {0, 0});
  rows.insert(rows.end(), 12, {1, 1});
  const Dataset dataset = Rows({2, 2}, rows);
  auto edgeless = LearnParameters(dataset, *NetworkStructure::Edgeless({2, 2}), {});
  EXPECT_THAT(MinSupportFilter(*edgeless, 0), IsEmpty());
  EXPECT_THAT(MinSupportFilter(*edgeless, 50), IsEmpty());

  auto chain = LearnParameters(dataset, *NetworkStructure::Create({2, 2}, {{}, {0}}), {});
  EXPECT_THAT(MinSupportFilter(*chain, 50),
              ElementsAre(LowSupportRow{.node = 1, .row = 1, .support = 12}));
}

TEST(SynthesizeTest, ZeroCountKeepsSchema) {
  Rng rng = MakeRng(8);
  const Dataset source = RandomDataset(rng, 40, 3, 3);
  auto synthetic = Synthesize(source, 2, 0, 1, {});
  ASSERT_TRUE(synthetic.ok());
  EXPECT_EQ(synthetic->row_count(), 0);
  EXPECT_TRUE(synthetic->SameSchema(source));
}

TEST(SynthesizeTest, DeterministicForSeed) {
  Rng rng = MakeRng(9);
  const Dataset source = RandomDataset(rng, 200, 4, 3);
  EXPECT_EQ(ToCsv(*Synthesize(source, 2, 300, 5, {})), ToCsv(*Synthesize(source, 2, 300, 5, {})));
  EXPECT_NE(ToCsv(*Synthesize(source, 2, 300, 5, {})), ToCsv(*Synthesize(source, 2, 300, 6, {})));
}

TEST(SynthesizeTest, MarginalsMatchSourceGenerator) {
  const BayesianNetwork truth = KnownChain();
  const int n_source = 1000000;
  const int n_synthetic = 200000;
  auto synthetic = Synthesize(truth.Sample(n_source, 31), 1, n_synthetic, 32, {});
  ASSERT_TRUE(synthetic.ok());
  // Exact marginals of the generator by forward propagation along the chain.
  std::vector<std::vector<double>> marginal = {{0.35, 0.65}};
  for (int i = 1; i < 3; ++i) {
    std::vector<double> next(truth.structure().cardinality(i), 0.0);
    for (size_t u = 0; u < marginal.back().size(); ++u) {
      for (size_t v = 0; v < next.size(); ++v) {
        next[v] += marginal.back()[u] * truth.probability(i, u, v);
      }
    }
    marginal.push_back(next);
  }
  for (int i = 0; i < 3; ++i) {
    for (size_t v = 0; v < marginal[i].size(); ++v) {
      double hits = 0;
      for (int r = 0; r < synthetic->row_count(); ++r) hits += synthetic->value(r, i) == static_cast<int>(v);
      const double p = marginal[i][v];
      // Source sampling, the posterior draw and synthetic sampling all add noise.
      const double se = std::sqrt(p * (1 - p) * (2.0 / n_source + 1.0 / n_synthetic));
      EXPECT_NEAR(hits / n_synthetic, p, 3 * se) << "node " << i << " value " << v;
    }
  }
}

}  // namespace
}  // namespace bntrace
