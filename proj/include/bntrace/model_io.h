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

// JSON model files:
//
//   {"nodes": [{"name": "A", "cardinality": 2, "parents": ["B", ...],
//               "cpt": [[p0, p1], ...]}, ...]}
//
// CPT rows follow the mixed-radix parent order of NetworkStructure::ParentRow.

#ifndef BNTRACE_MODEL_IO_H_
#define BNTRACE_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bntrace/network.h"

namespace bntrace {

std::string ModelToJson(const BayesianNetwork& network);

absl::StatusOr<BayesianNetwork> ModelFromJson(std::string_view json,
                                              const NetworkOptions& options = {});

absl::Status SaveModel(const BayesianNetwork& network,
                       const std::filesystem::path& path);

absl::StatusOr<BayesianNetwork> LoadModel(const std::filesystem::path& path,
                                          const NetworkOptions& options = {});

}  // namespace bntrace

#endif  // BNTRACE_MODEL_IO_H_
