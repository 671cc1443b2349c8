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

#include "bntrace/model_io.h"

#include <filesystem>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace bntrace {
namespace {

using ::testing::HasSubstr;

BayesianNetwork ChainModel() {
  auto structure = NetworkStructure::Create({2, 3}, {{}, {0}});
  return *BayesianNetwork::Create(
      *structure, {Cpt{2, {0.7, 0.3}}, Cpt{3, {0.2, 0.3, 0.5, 0.6, 0.3, 0.1}}},
      {"age", "income"});
}

TEST(ModelIoTest, JsonRoundTripPreservesModel) {
  const BayesianNetwork model = ChainModel();
  const std::string json = ModelToJson(model);
  auto loaded = ModelFromJson(json);
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(loaded->structure(), model.structure());
  EXPECT_EQ(loaded->node_names(), model.node_names());
  EXPECT_EQ(ModelToJson(*loaded), json);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 3; ++b) {
      const std::vector<int> record = {a, b};
      EXPECT_DOUBLE_EQ(loaded->LogJoint(record), model.LogJoint(record));
    }
  }
}

TEST(ModelIoTest, LayoutNamesParents) {
  const auto parsed = nlohmann::json::parse(ModelToJson(ChainModel()));
  ASSERT_EQ(parsed["nodes"].size(), 2u);
  EXPECT_EQ(parsed["nodes"][1]["name"], "income");
  EXPECT_EQ(parsed["nodes"][1]["cardinality"], 3);
  EXPECT_EQ(parsed["nodes"][1]["parents"][0], "age");
  EXPECT_EQ(parsed["nodes"][1]["cpt"].size(), 2u);
}

TEST(ModelIoTest, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "bntrace_model_io_test.json";
  ASSERT_TRUE(SaveModel(ChainModel(), path).ok());
  auto loaded = LoadModel(path);
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  EXPECT_EQ(ModelToJson(*loaded), ModelToJson(ChainModel()));
  std::filesystem::remove(path);
  EXPECT_FALSE(LoadModel(path).ok());
}

TEST(ModelIoTest, RejectsMalformedDocuments) {
  EXPECT_FALSE(ModelFromJson("not json").ok());
  EXPECT_FALSE(ModelFromJson("{}").ok());
  // Unknown parent name.
  auto status = ModelFromJson(R"({"nodes":[
      {"name":"a","cardinality":2,"parents":["zz"],"cpt":[[0.5,0.5]]}]})")
                    .status();
  EXPECT_FALSE(status.ok());
  EXPECT_THAT(std::string(status.message()), HasSubstr("zz"));
  // Wrong number of CPT rows.
  EXPECT_FALSE(ModelFromJson(R"({"nodes":[
      {"name":"a","cardinality":2,"parents":[],"cpt":[[0.5,0.5]]},
      {"name":"b","cardinality":2,"parents":["a"],"cpt":[[0.5,0.5]]}]})")
                   .ok());
  // Row does not sum to one.
  EXPECT_FALSE(ModelFromJson(R"({"nodes":[
      {"name":"a","cardinality":2,"parents":[],"cpt":[[0.5,0.6]]}]})")
                   .ok());
  // Duplicate names.
  EXPECT_FALSE(ModelFromJson(R"({"nodes":[
      {"name":"a","cardinality":2,"parents":[],"cpt":[[0.5,0.5]]},
      {"name":"a","cardinality":2,"parents":[],"cpt":[[0.5,0.5]]}]})")
                   .ok());
  // Cycle.
  EXPECT_FALSE(ModelFromJson(R"({"nodes":[
      {"name":"a","cardinality":2,"parents":["b"],"cpt":[[0.5,0.5],[0.5,0.5]]},
      {"name":"b","cardinality":2,"parents":["a"],"cpt":[[0.5,0.5],[0.5,0.5]]}]})")
                   .ok());
}

}  // namespace
}  // namespace bntrace
