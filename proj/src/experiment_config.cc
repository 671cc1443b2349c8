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

#include "bntrace/experiment_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "bntrace/model_io.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

const std::set<std::string>& KnownKeys() {
  static const auto* keys = new std::set<std::string>{
      "label",          "dataset",
      "schema",         "generator",
      "pool_size",      "reference_size",
      "nonmember_count", "nonmembers_include_pool",
      "eta_released",   "eta_population_model",
      "release_generator_structure", "random_edges",
      "bias",           "bias_attribute",
      "bias_max_attempts", "control",
      "splits",         "seed",
      "prior",          "min_support",
      "alpha_points"};
  return *keys;
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& values)
      : values_(values) {}

  bool Has(const std::string& key) const { return values_.contains(key); }

  template <typename T>
  absl::Status Int(const std::string& key, T& out) const {
    if (!Has(key)) return absl::OkStatus();
    int64_t parsed = 0;
    if (!absl::SimpleAtoi(values_.at(key), &parsed)) {
      return Bad(key, "an integer");
    }
    out = static_cast<T>(parsed);
    return absl::OkStatus();
  }

  absl::Status Unsigned(const std::string& key, uint64_t& out) const {
    if (!Has(key)) return absl::OkStatus();
    if (!absl::SimpleAtoi(values_.at(key), &out)) {
      return Bad(key, "a non-negative integer");
    }
    return absl::OkStatus();
  }

  absl::Status Real(const std::string& key, double& out) const {
    if (!Has(key)) return absl::OkStatus();
    if (!absl::SimpleAtod(values_.at(key), &out)) return Bad(key, "a number");
    return absl::OkStatus();
  }

  absl::Status Bool(const std::string& key, bool& out) const {
    if (!Has(key)) return absl::OkStatus();
    if (!absl::SimpleAtob(values_.at(key), &out)) return Bad(key, "true or false");
    return absl::OkStatus();
  }

  template <typename T>
  absl::Status OptionalInt(const std::string& key, std::optional<T>& out) const {
    if (!Has(key)) return absl::OkStatus();
    T value{};
    RETURN_IF_ERROR(Int(key, value));
    out = value;
    return absl::OkStatus();
  }

  absl::Status OptionalReal(const std::string& key, std::optional<double>& out) const {
    if (!Has(key)) return absl::OkStatus();
    double value = 0.0;
    RETURN_IF_ERROR(Real(key, value));
    out = value;
    return absl::OkStatus();
  }

 private:
  absl::Status Bad(const std::string& key, const char* expected) const {
    return absl::InvalidArgumentError(absl::StrCat(
        "config key '", key, "' must be ", expected, ", got '", values_.at(key), "'"));
  }

  const std::map<std::string, std::string>& values_;
};

}  // namespace

absl::StatusOr<std::map<std::string, std::string>> ParseKeyValues(
    std::string_view text) {
  std::map<std::string, std::string> values;
  int line_number = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    // Strip comments outside quotes.
    bool quoted = false;
    for (size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') quoted = !quoted;
      if (line[k] == '#' && !quoted) {
        line = line.substr(0, k);
        break;
      }
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": expected key = value"));
    }
    std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!KnownKeys().contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": unknown key '", key, "'"));
    }
    if (!values.emplace(key, std::string(value)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": duplicate key '", key, "'"));
    }
  }
  return values;
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    std::string_view text, const std::filesystem::path& base_dir) {
  ASSIGN_OR_RETURN(auto values, ParseKeyValues(text));
  const Reader reader(values);
  ExperimentConfig config;
  if (!reader.Has("seed")) {
    return absl::InvalidArgumentError("config must set an explicit seed");
  }
  if (reader.Has("dataset") == reader.Has("generator")) {
    return absl::InvalidArgumentError(
        "config must name exactly one of 'dataset' or 'generator'");
  }
  auto resolve = [&](const std::string& key) {
    std::filesystem::path path(values.at(key));
    return path.is_absolute() ? path : base_dir / path;
  };
  if (reader.Has("dataset")) {
    std::optional<std::filesystem::path> schema;
    if (reader.Has("schema")) schema = resolve("schema");
    ASSIGN_OR_RETURN(Dataset dataset, LoadCsv(resolve("dataset"), schema));
    config.dataset = std::make_shared<const Dataset>(std::move(dataset));
  } else {
    if (reader.Has("schema")) {
      return absl::InvalidArgumentError("'schema' only applies to a dataset source");
    }
    ASSIGN_OR_RETURN(BayesianNetwork generator, LoadModel(resolve("generator")));
    config.generator = std::make_shared<const BayesianNetwork>(std::move(generator));
  }
  if (reader.Has("label")) config.label = values.at("label");
  RETURN_IF_ERROR(reader.Int("pool_size", config.pool_size));
  RETURN_IF_ERROR(reader.Int("reference_size", config.reference_size));
  RETURN_IF_ERROR(reader.Int("nonmember_count", config.nonmember_count));
  RETURN_IF_ERROR(reader.Bool("nonmembers_include_pool", config.nonmembers_include_pool));
  RETURN_IF_ERROR(reader.Int("eta_released", config.eta_released));
  RETURN_IF_ERROR(reader.OptionalInt("eta_population_model", config.eta_population_model));
  RETURN_IF_ERROR(reader.Bool("release_generator_structure",
                              config.release_generator_structure));
  RETURN_IF_ERROR(reader.OptionalInt("random_edges", config.random_edges));
  RETURN_IF_ERROR(reader.OptionalReal("bias", config.bias));
  RETURN_IF_ERROR(reader.OptionalInt("bias_attribute", config.bias_attribute));
  RETURN_IF_ERROR(reader.Int("bias_max_attempts", config.bias_max_attempts));
  RETURN_IF_ERROR(reader.Bool("control", config.control));
  RETURN_IF_ERROR(reader.Int("splits", config.splits));
  RETURN_IF_ERROR(reader.Unsigned("seed", config.seed));
  RETURN_IF_ERROR(reader.Real("prior", config.prior.pseudo_count));
  RETURN_IF_ERROR(reader.Int("min_support", config.min_support));
  int alpha_points = 200;
  RETURN_IF_ERROR(reader.Int("alpha_points", alpha_points));
  if (alpha_points < 2) return absl::InvalidArgumentError("alpha_points must be >= 2");
  config.alpha_grid = LogAlphaGrid(alpha_points);
  RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str(), path.parent_path());
}

}  // namespace bntrace
