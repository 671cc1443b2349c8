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

#ifndef BNTRACE_DATASET_H_
#define BNTRACE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace bntrace {

// An immutable n x m table of integer-coded categorical values. Attribute i
// takes values in [0, cardinality(i)), and every cardinality is at least 2.
class Dataset {
 public:
  // Validates shape and value ranges. `values` is row-major.
  static absl::StatusOr<Dataset> Create(std::vector<std::string> attribute_names,
                                        std::vector<int> cardinalities,
                                        std::vector<int> values);

  // An empty dataset with the given schema.
  static absl::StatusOr<Dataset> Empty(std::vector<std::string> attribute_names,
                                       std::vector<int> cardinalities);

  int row_count() const { return row_count_; }
  int attribute_count() const { return static_cast<int>(cardinalities_.size()); }
  const std::vector<std::string>& attribute_names() const {
    return attribute_names_;
  }
  const std::vector<int>& cardinalities() const { return cardinalities_; }

  std::span<const int> row(int r) const {
    return {values_.data() + static_cast<size_t>(r) * attribute_count(),
            static_cast<size_t>(attribute_count())};
  }
  int value(int r, int c) const {
    return values_[static_cast<size_t>(r) * attribute_count() + c];
  }

  // Rows in the given order. Indices must be valid; duplicates are allowed.
  Dataset Subset(std::span<const int> rows) const;

  bool SameSchema(const Dataset& other) const {
    return cardinalities_ == other.cardinalities_;
  }

 private:
  Dataset() = default;

  std::vector<std::string> attribute_names_;
  std::vector<int> cardinalities_;
  std::vector<int> values_;
  int row_count_ = 0;
};

// Parses CSV text: a header row of attribute names followed by integer rows.
// Cardinalities are max observed value + 1 per column, raised to at least 2,
// unless `schema_cardinalities` is given.
absl::StatusOr<Dataset> ParseCsv(
    std::string_view text,
    std::optional<std::vector<int>> schema_cardinalities = std::nullopt);

absl::StatusOr<Dataset> LoadCsv(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& schema_path = std::nullopt);

std::string ToCsv(const Dataset& dataset);
absl::Status WriteCsv(const Dataset& dataset, const std::filesystem::path& path);

// Schema sidecar: one "name cardinality" line per attribute, in column order.
absl::StatusOr<std::vector<std::pair<std::string, int>>> ParseSchema(
    std::string_view text);
absl::StatusOr<std::vector<std::pair<std::string, int>>> LoadSchema(
    const std::filesystem::path& path);

struct SplitSpec {
  int pool_size = 0;
  int reference_size = 0;
  uint64_t seed = 0;
};

// Disjoint uniformly random index sets, each sorted ascending.
struct SplitIndices {
  std::vector<int> pool;
  std::vector<int> reference;
};

absl::StatusOr<SplitIndices> DrawSplitIndices(int row_count,
                                              const SplitSpec& spec);

absl::StatusOr<std::pair<Dataset, Dataset>> Split(const Dataset& dataset,
                                                  const SplitSpec& spec);

// Sampling that discriminates against value 1. An attribute equal to 1 is
// kept with probability 1 - bias, an attribute equal to 0 always. With
// `attribute` unset the per-attribute probabilities multiply over all
// attributes; otherwise only that attribute is considered.
struct BiasSpec {
  double bias = 0.0;
  std::optional<int> attribute;
  int64_t max_attempts = 100'000'000;
};

absl::Status ValidateBiasSpec(const BiasSpec& spec,
                              std::span<const int> cardinalities);

double SelectionProbability(std::span<const int> record, const BiasSpec& spec);

// Rejection sampling without replacement: candidates are drawn uniformly from
// the rows not yet accepted. Returned indices are in acceptance order.
absl::StatusOr<std::vector<int>> BiasedSampleIndices(const Dataset& dataset,
                                                     int pool_size,
                                                     const BiasSpec& spec,
                                                     uint64_t seed);

absl::StatusOr<Dataset> BiasedSample(const Dataset& dataset, int pool_size,
                                     const BiasSpec& spec, uint64_t seed);

}  // namespace bntrace

#endif  // BNTRACE_DATASET_H_
