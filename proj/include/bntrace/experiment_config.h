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

// Experiment config files: flat "key = value" lines, '#' comments, optional
// double quotes around values. Relative paths resolve against the config
// file's directory.
//
//   generator = "population.json"     # or: dataset = "population.csv"
//   pool_size = 1000
//   reference_size = 5000
//   eta_released = 2
//   splits = 50
//   seed = 7

#ifndef BNTRACE_EXPERIMENT_CONFIG_H_
#define BNTRACE_EXPERIMENT_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "bntrace/harness.h"

namespace bntrace {

absl::StatusOr<std::map<std::string, std::string>> ParseKeyValues(
    std::string_view text);

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    std::string_view text, const std::filesystem::path& base_dir);

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::filesystem::path& path);

}  // namespace bntrace

#endif  // BNTRACE_EXPERIMENT_CONFIG_H_
