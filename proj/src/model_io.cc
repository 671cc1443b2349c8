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

#include <fstream>
#include <map>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "bntrace/status_macros.h"
#include "json.hpp"

namespace bntrace {

using nlohmann::json;

std::string ModelToJson(const BayesianNetwork& network) {
  const NetworkStructure& structure = network.structure();
  json nodes = json::array();
  for (int i = 0; i < network.node_count(); ++i) {
    json parents = json::array();
    for (int p : structure.parents(i)) parents.push_back(network.node_names()[p]);
    json rows = json::array();
    const Cpt& cpt = network.cpt(i);
    for (int64_t r = 0; r < cpt.row_count(); ++r) {
      auto row = cpt.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    nodes.push_back({{"name", network.node_names()[i]},
                     {"cardinality", structure.cardinality(i)},
                     {"parents", std::move(parents)},
                     {"cpt", std::move(rows)}});
  }
  return json{{"nodes", std::move(nodes)}}.dump(1) + "\n";
}

absl::StatusOr<BayesianNetwork> ModelFromJson(std::string_view text,
                                              const NetworkOptions& options) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return absl::InvalidArgumentError("model is not valid JSON");
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    return absl::InvalidArgumentError("model must be an object with a 'nodes' array");
  }
  const json& nodes = doc["nodes"];
  const int m = static_cast<int>(nodes.size());
  std::vector<std::string> names;
  std::vector<int> cardinalities;
  std::map<std::string, int> index;
  for (int i = 0; i < m; ++i) {
    const json& node = nodes[i];
    if (!node.is_object() || !node.contains("name") || !node["name"].is_string() ||
        !node.contains("cardinality") || !node["cardinality"].is_number_integer() ||
        !node.contains("parents") || !node["parents"].is_array() ||
        !node.contains("cpt") || !node["cpt"].is_array()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "node ", i, " needs name, cardinality, parents and cpt fields"));
    }
    names.push_back(node["name"].get<std::string>());
    cardinalities.push_back(node["cardinality"].get<int>());
    if (!index.emplace(names.back(), i).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate node name ", names.back()));
    }
  }
  std::vector<std::vector<int>> parents(m);
  for (int i = 0; i < m; ++i) {
    for (const json& parent : nodes[i]["parents"]) {
      if (!parent.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("node ", names[i], " has a non-string parent"));
      }
      if (!index.contains(parent.get<std::string>())) {
        return absl::InvalidArgumentError(absl::StrCat(
            "node ", names[i], " has unknown parent ", parent.get<std::string>()));
      }
      parents[i].push_back(index.at(parent.get<std::string>()));
    }
  }
  ASSIGN_OR_RETURN(NetworkStructure structure,
                   NetworkStructure::Create(cardinalities, std::move(parents)));
  std::vector<Cpt> cpts(m);
  for (int i = 0; i < m; ++i) {
    cpts[i].cardinality = cardinalities[i];
    const json& rows = nodes[i]["cpt"];
    if (static_cast<int64_t>(rows.size()) != structure.ParentConfigCount(i)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "node ", names[i], " needs ", structure.ParentConfigCount(i),
          " CPT rows, got ", rows.size()));
    }
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != cardinalities[i]) {
        return absl::InvalidArgumentError(absl::StrCat(
            "node ", names[i], " has a CPT row of the wrong length"));
      }
      for (const json& p : row) {
        if (!p.is_number()) {
          return absl::InvalidArgumentError(
              absl::StrCat("node ", names[i], " has a non-numeric probability"));
        }
        cpts[i].probabilities.push_back(p.get<double>());
      }
    }
  }
  return BayesianNetwork::Create(std::move(structure), std::move(cpts),
                                 std::move(names), options);
}

absl::Status SaveModel(const BayesianNetwork& network,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path.string()));
  }
  out << ModelToJson(network);
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path.string()));
}

absl::StatusOr<BayesianNetwork> LoadModel(const std::filesystem::path& path,
                                          const NetworkOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ModelFromJson(buffer.str(), options);
}

}  // namespace bntrace
