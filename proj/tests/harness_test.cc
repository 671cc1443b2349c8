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

#include <cmath>
#include <memory>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace bntrace {
namespace {

using ::testing::HasSubstr;

std::shared_ptr<const BayesianNetwork> IndependentBinaryGenerator(int m, uint64_t seed) {
  return std::make_shared<const BayesianNetwork>(
      *RandomNetwork(*NetworkStructure::Edgeless(std::vector<int>(m, 2)), seed));
}

std::shared_ptr<const BayesianNetwork> SmallDependentGenerator(uint64_t seed) {
  auto structure = RandomStructure(std::vector<int>(12, 2), 2, 14, seed);
  return std::make_shared<const BayesianNetwork>(*RandomNetwork(*structure, seed));
}

TEST(RandomStructureTest, ZeroEdgesIsEdgeless) {
  auto structure = RandomStructure({2, 3, 2}, 2, 0, 1);
  ASSERT_TRUE(structure.ok());
  EXPECT_EQ(structure->edge_count(), 0);
}

TEST(RandomStructureTest, ThreeBinaryNodesTwoEdges) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto structure = RandomStructure({2, 2, 2}, 1, 2, seed);
    ASSERT_TRUE(structure.ok());
    EXPECT_EQ(structure->edge_count(), 2);
    for (int i = 0; i < 3; ++i) EXPECT_LE(structure->parents(i).size(), 1u);
    EXPECT_TRUE(TopologicalOrder(structure->all_parents()).ok());
    // Two edges on three nodes with one parent each: complexity 1 + 2 + 2.
    EXPECT_EQ(Complexity(*structure), 5);
  }
}

TEST(RandomStructureTest, DeterministicForSeed) {
  const std::vector<int> cards(15, 2);
  EXPECT_EQ(*RandomStructure(cards, 3, 25, 7), *RandomStructure(cards, 3, 25, 7));
  EXPECT_NE(*RandomStructure(cards, 3, 25, 7), *RandomStructure(cards, 3, 25, 8));
}

TEST(RandomStructureTest, UnreachableEdgeCountReportsProgress) {
  // With at most one parent each, three nodes hold at most two edges.
  auto structure = RandomStructure({2, 2, 2}, 1, 3, 1, 10000);
  ASSERT_FALSE(structure.ok());
  EXPECT_THAT(std::string(structure.status().message()), HasSubstr("2"));
}

TEST(RandomNetworkTest, RowsAreDistributions) {
  auto structure = RandomStructure({2, 3, 4, 2}, 2, 4, 3);
  auto network = RandomNetwork(*structure, 3);
  ASSERT_TRUE(network.ok());
  for (int i = 0; i < network->node_count(); ++i) {
    const Cpt& cpt = network->cpt(i);
    for (int64_t r = 0; r < cpt.row_count(); ++r) {
      double sum = 0;
      for (double p : cpt.row(r)) {
        EXPECT_GT(p, 0.0);
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(BiasedSampleFromGeneratorTest, BiasLowersFrequencyOfOnes) {
  const auto generator = IndependentBinaryGenerator(5, 2);
  auto plain = BiasedSampleFromGenerator(*generator, 4000, {.bias = 0.0}, 4);
  auto biased = BiasedSampleFromGenerator(*generator, 4000, {.bias = 0.5}, 4);
  ASSERT_TRUE(plain.ok());
  ASSERT_TRUE(biased.ok());
  EXPECT_EQ(biased->row_count(), 4000);
  for (int c = 0; c < 5; ++c) {
    double plain_ones = 0;
    double biased_ones = 0;
    for (int r = 0; r < 4000; ++r) {
      plain_ones += plain->value(r, c);
      biased_ones += biased->value(r, c);
    }
    EXPECT_LT(biased_ones, plain_ones);
  }
}

ExperimentConfig GeneratorConfig(std::shared_ptr<const BayesianNetwork> generator) {
  ExperimentConfig config;
  config.label = "test";
  config.generator = std::move(generator);
  config.pool_size = 200;
  config.reference_size = 1000;
  config.nonmember_count = 500;
  config.eta_released = 1;
  config.splits = 3;
  config.seed = 11;
  return config;
}

TEST(RunExperimentTest, ReportInvariants) {
  auto report = RunExperiment(GeneratorConfig(SmallDependentGenerator(5)));
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_EQ(report->splits.size(), 3u);
  double sum = 0;
  for (const SplitResult& split : report->splits) {
    sum += split.auc;
    EXPECT_EQ(split.seed, 11u + split.index);
    EXPECT_EQ(split.member_count, 200);
    EXPECT_EQ(split.nonmember_count, 500);
    EXPECT_EQ(split.power.size(), report->alpha_grid.size());
  }
  EXPECT_NEAR(report->mean_auc, sum / 3, 1e-12);
  for (size_t k = 1; k < report->alpha_grid.size(); ++k) {
    EXPECT_GT(report->alpha_grid[k], report->alpha_grid[k - 1]);
    EXPECT_GE(report->mean_power[k], report->mean_power[k - 1]);
  }
  EXPECT_NEAR(report->bound.auc, *BoundAuc(report->mean_complexity, 200), 1e-12);
}

TEST(RunExperimentTest, SameConfigGivesIdenticalReport) {
  const ExperimentConfig config = GeneratorConfig(SmallDependentGenerator(6));
  auto first = RunExperiment(config);
  auto second = RunExperiment(config);
  ASSERT_TRUE(first.ok());
  EXPECT_EQ(FormatReport(*first), FormatReport(*second));
  EXPECT_EQ(FormatMeanRoc(*first), FormatMeanRoc(*second));
  ExperimentConfig other = config;
  other.seed = 12;
  EXPECT_NE(FormatReport(*first), FormatReport(*RunExperiment(other)));
}

TEST(RunExperimentTest, SplitsDoNotDependOnSplitCount) {
  ExperimentConfig config = GeneratorConfig(SmallDependentGenerator(7));
  auto three = RunExperiment(config);
  config.splits = 1;
  auto one = RunExperiment(config);
  EXPECT_EQ(one->splits[0].auc, three->splits[0].auc);
}

TEST(RunExperimentTest, ControlIsChance) {
  ExperimentConfig config = GeneratorConfig(SmallDependentGenerator(8));
  config.control = true;
  config.splits = 1;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok());
  // Binomial 3 sigma for a 200 x 500 AUC is about 0.07.
  EXPECT_NEAR(report->mean_auc, 0.5, 0.07);
  EXPECT_TRUE(report->control);
}

TEST(RunExperimentTest, IndependentBinaryMatchesBound) {
  ExperimentConfig config;
  config.generator = IndependentBinaryGenerator(50, 21);
  config.pool_size = 500;
  config.reference_size = 10000;
  config.nonmember_count = 2000;
  config.eta_released = 0;
  config.splits = 4;
  config.seed = 3;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->mean_complexity, 50);
  EXPECT_NEAR(NormalCdf(std::sqrt(50.0 / 1000.0)), 0.5885, 1e-4);
  EXPECT_NEAR(report->mean_auc, NormalCdf(std::sqrt(50.0 / 1000.0)), 0.03);
}

TEST(RunExperimentTest, ModelMismatchIsFlagged) {
  ExperimentConfig config = GeneratorConfig(SmallDependentGenerator(9));
  config.eta_released = 0;
  config.eta_population_model = 2;
  config.splits = 1;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->model_mismatch);
  EXPECT_THAT(FormatReport(*report), HasSubstr("model_mismatch: yes"));
}

TEST(RunExperimentTest, DatasetSourceSplitsWithoutOverlap) {
  const auto generator = SmallDependentGenerator(10);
  ExperimentConfig config;
  config.dataset = std::make_shared<const Dataset>(generator->Sample(3000, 1));
  config.pool_size = 300;
  config.reference_size = 1500;
  config.eta_released = 2;
  config.splits = 2;
  config.seed = 5;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  for (const SplitResult& split : report->splits) {
    EXPECT_EQ(split.member_count, 300);
    EXPECT_EQ(split.nonmember_count, 1200);
  }
  config.nonmembers_include_pool = true;
  report = RunExperiment(config);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->splits[0].nonmember_count, 3000);
}

TEST(RunExperimentTest, RandomStructureRelease) {
  ExperimentConfig config = GeneratorConfig(SmallDependentGenerator(11));
  config.eta_released = 3;
  config.random_edges = 10;
  config.splits = 2;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  for (const SplitResult& split : report->splits) EXPECT_EQ(split.edge_count, 10);
}

TEST(RunExperimentTest, BiasedPoolRuns) {
  ExperimentConfig config = GeneratorConfig(IndependentBinaryGenerator(8, 12));
  config.bias = 0.2;
  config.splits = 1;
  auto report = RunExperiment(config);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_THAT(FormatReport(*report), HasSubstr("bias: 0.2"));
}

TEST(ValidateConfigTest, RejectsBadConfigs) {
  const auto generator = SmallDependentGenerator(13);
  ExperimentConfig config = GeneratorConfig(generator);
  EXPECT_TRUE(ValidateConfig(config).ok());

  ExperimentConfig no_source = config;
  no_source.generator = nullptr;
  EXPECT_FALSE(ValidateConfig(no_source).ok());

  ExperimentConfig both = config;
  both.dataset = std::make_shared<const Dataset>(generator->Sample(10, 1));
  EXPECT_FALSE(ValidateConfig(both).ok());

  ExperimentConfig zero_splits = config;
  zero_splits.splits = 0;
  EXPECT_FALSE(ValidateConfig(zero_splits).ok());

  ExperimentConfig too_big;
  too_big.dataset = std::make_shared<const Dataset>(generator->Sample(100, 1));
  too_big.pool_size = 60;
  too_big.reference_size = 60;
  EXPECT_FALSE(ValidateConfig(too_big).ok());
  auto failed = RunExperiment(too_big);
  EXPECT_FALSE(failed.ok());

  ExperimentConfig bad_bias = config;
  bad_bias.bias = 1.5;
  EXPECT_FALSE(ValidateConfig(bad_bias).ok());
}

ExperimentReport TableReport(std::string label, int eta, double complexity, int n,
                             double auc) {
  ExperimentReport report;
  report.label = std::move(label);
  report.eta_released = eta;
  report.pool_size = n;
  report.mean_complexity = complexity;
  report.mean_auc = auc;
  report.bound = *ComputeBoundCurve(complexity, n, LogAlphaGrid());
  return report;
}

TEST(CompareTableTest, TheoreticalColumnAndOrder) {
  const std::vector<ExperimentReport> reports = {
      TableReport("eta2", 2, 1222, 3000, 0.6655),
      TableReport("eta0", 0, 446, 3000, 0.5928),
      TableReport("control", 0, 0, 3000, 0.5),
  };
  auto table = CompareTable(reports);
  ASSERT_TRUE(table.ok());
  EXPECT_THAT(table->text, HasSubstr("0.6074"));
  EXPECT_THAT(table->text, HasSubstr("0.6741"));
  const size_t control = table->text.find("control");
  const size_t eta0 = table->text.find("eta0");
  const size_t eta2 = table->text.find("eta2");
  EXPECT_LT(control, eta0);
  EXPECT_LT(eta0, eta2);
  EXPECT_THAT(table->csv, HasSubstr("label,eta,edges,complexity,empirical_auc,theoretical_auc\n"
                                    "control,0,0,0,0.500000,0.500000\n"));
  EXPECT_FALSE(CompareTable({}).ok());
}

}  // namespace
}  // namespace bntrace
