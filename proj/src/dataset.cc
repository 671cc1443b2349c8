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

#include "bntrace/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "bntrace/random.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<absl::string_view> SplitLines(std::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n');
  for (auto& line : lines) line = absl::StripSuffix(line, "\r");
  // A trailing newline yields one empty final element.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

absl::StatusOr<Dataset> Dataset::Create(std::vector<std::string> attribute_names,
                                        std::vector<int> cardinalities,
                                        std::vector<int> values) {
  const size_t m = cardinalities.size();
  if (m == 0) return absl::InvalidArgumentError("dataset has no attributes");
  if (attribute_names.size() != m) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", m, " attribute names, got ",
                     attribute_names.size()));
  }
  for (size_t c = 0; c < m; ++c) {
    if (cardinalities[c] < 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute ", attribute_names[c], " has cardinality ",
          cardinalities[c], "; at least 2 is required"));
    }
  }
  if (values.size() % m != 0) {
    return absl::InvalidArgumentError("value count is not a multiple of m");
  }
  for (size_t k = 0; k < values.size(); ++k) {
    const size_t c = k % m;
    if (values[k] < 0 || values[k] >= cardinalities[c]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "value ", values[k], " out of range [0, ", cardinalities[c],
          ") at row ", k / m + 1, ", column ", c + 1));
    }
  }
  Dataset dataset;
  dataset.row_count_ = static_cast<int>(values.size() / m);
  dataset.attribute_names_ = std::move(attribute_names);
  dataset.cardinalities_ = std::move(cardinalities);
  dataset.values_ = std::move(values);
  return dataset;
}

absl::StatusOr<Dataset> Dataset::Empty(std::vector<std::string> attribute_names,
                                       std::vector<int> cardinalities) {
  return Create(std::move(attribute_names), std::move(cardinalities), {});
}

Dataset Dataset::Subset(std::span<const int> rows) const {
  Dataset out;
  out.attribute_names_ = attribute_names_;
  out.cardinalities_ = cardinalities_;
  out.row_count_ = static_cast<int>(rows.size());
  out.values_.reserve(rows.size() * cardinalities_.size());
  for (int r : rows) {
    auto src = row(r);
    out.values_.insert(out.values_.end(), src.begin(), src.end());
  }
  return out;
}

absl::StatusOr<Dataset> ParseCsv(
    std::string_view text, std::optional<std::vector<int>> schema_cardinalities) {
  const std::vector<absl::string_view> lines = SplitLines(text);
  if (lines.empty()) return absl::InvalidArgumentError("empty file");

  std::vector<std::string> names;
  for (absl::string_view name : absl::StrSplit(lines[0], ',')) {
    names.emplace_back(absl::StripAsciiWhitespace(name));
  }
  const size_t m = names.size();
  for (size_t c = 0; c < m; ++c) {
    if (names[c].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty attribute name in header, column ", c + 1));
    }
  }

  std::vector<int> values;
  values.reserve((lines.size() - 1) * m);
  std::vector<int> max_seen(m, 0);
  for (size_t r = 1; r < lines.size(); ++r) {
    std::vector<absl::string_view> cells = absl::StrSplit(lines[r], ',');
    if (cells.size() != m) {
      return absl::InvalidArgumentError(
          absl::StrCat("ragged row at row ", r, ": expected ", m,
                       " cells, got ", cells.size()));
    }
    for (size_t c = 0; c < m; ++c) {
      absl::string_view cell = absl::StripAsciiWhitespace(cells[c]);
      if (cell.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("missing value at row ", r, ", column ", c + 1));
      }
      int value = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || value < 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "non-integer value '", cell, "' at row ", r, ", column ", c + 1));
      }
      max_seen[c] = std::max(max_seen[c], value);
      values.push_back(value);
    }
  }

  std::vector<int> cardinalities(m);
  if (schema_cardinalities.has_value()) {
    if (schema_cardinalities->size() != m) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema lists ", schema_cardinalities->size(),
                       " attributes but the file has ", m));
    }
    cardinalities = *std::move(schema_cardinalities);
  } else {
    for (size_t c = 0; c < m; ++c) cardinalities[c] = std::max(2, max_seen[c] + 1);
  }
  return Dataset::Create(std::move(names), std::move(cardinalities),
                         std::move(values));
}

absl::StatusOr<std::vector<std::pair<std::string, int>>> ParseSchema(
    std::string_view text) {
  std::vector<std::pair<std::string, int>> schema;
  int line_number = 0;
  for (absl::string_view line : SplitLines(text)) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> parts =
        absl::StrSplit(line, ' ', absl::SkipEmpty());
    int cardinality = 0;
    if (parts.size() != 2 ||
        std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(),
                        cardinality)
                .ec != std::errc()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "schema line ", line_number, ": expected 'name cardinality'"));
    }
    schema.emplace_back(std::string(parts[0]), cardinality);
  }
  return schema;
}

absl::StatusOr<std::vector<std::pair<std::string, int>>> LoadSchema(
    const std::filesystem::path& path) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseSchema(text);
}

absl::StatusOr<Dataset> LoadCsv(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& schema_path) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  std::optional<std::vector<int>> cardinalities;
  if (schema_path.has_value()) {
    ASSIGN_OR_RETURN(auto schema, LoadSchema(*schema_path));
    cardinalities.emplace();
    for (const auto& [name, cardinality] : schema) {
      cardinalities->push_back(cardinality);
    }
  }
  auto dataset = ParseCsv(text, std::move(cardinalities));
  if (!dataset.ok()) {
    return absl::Status(dataset.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     dataset.status().message()));
  }
  return dataset;
}

std::string ToCsv(const Dataset& dataset) {
  std::string out = absl::StrJoin(dataset.attribute_names(), ",");
  out += '\n';
  for (int r = 0; r < dataset.row_count(); ++r) {
    absl::StrAppend(&out, absl::StrJoin(dataset.row(r), ","), "\n");
  }
  return out;
}

absl::Status WriteCsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  out << ToCsv(dataset);
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path.string()));
}

absl::StatusOr<SplitIndices> DrawSplitIndices(int row_count,
                                              const SplitSpec& spec) {
  if (spec.pool_size <= 0 || spec.reference_size <= 0) {
    return absl::InvalidArgumentError("pool and reference sizes must be positive");
  }
  if (static_cast<int64_t>(spec.pool_size) + spec.reference_size > row_count) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pool (", spec.pool_size, ") + reference (", spec.reference_size,
        ") exceeds population size ", row_count));
  }
  Rng rng = MakeRng(spec.seed);
  std::vector<int> order = RandomPermutation(rng, row_count);
  SplitIndices split;
  split.pool.assign(order.begin(), order.begin() + spec.pool_size);
  split.reference.assign(order.begin() + spec.pool_size,
                         order.begin() + spec.pool_size + spec.reference_size);
  std::sort(split.pool.begin(), split.pool.end());
  std::sort(split.reference.begin(), split.reference.end());
  return split;
}

absl::StatusOr<std::pair<Dataset, Dataset>> Split(const Dataset& dataset,
                                                  const SplitSpec& spec) {
  ASSIGN_OR_RETURN(SplitIndices split, DrawSplitIndices(dataset.row_count(), spec));
  return std::make_pair(dataset.Subset(split.pool),
                        dataset.Subset(split.reference));
}

absl::Status ValidateBiasSpec(const BiasSpec& spec,
                              std::span<const int> cardinalities) {
  if (!(spec.bias >= 0.0 && spec.bias <= 1.0)) {
    return absl::InvalidArgumentError("bias must lie in [0, 1]");
  }
  if (spec.max_attempts <= 0) {
    return absl::InvalidArgumentError("attempt budget must be positive");
  }
  const int m = static_cast<int>(cardinalities.size());
  if (spec.attribute.has_value()) {
    if (*spec.attribute < 0 || *spec.attribute >= m) {
      return absl::InvalidArgumentError("bias attribute out of range");
    }
    if (cardinalities[*spec.attribute] != 2) {
      return absl::InvalidArgumentError("bias attribute must be binary");
    }
    return absl::OkStatus();
  }
  for (int c = 0; c < m; ++c) {
    if (cardinalities[c] != 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "biased sampling over all attributes needs binary data; attribute ",
          c, " has cardinality ", cardinalities[c]));
    }
  }
  return absl::OkStatus();
}

double SelectionProbability(std::span<const int> record, const BiasSpec& spec) {
  const double keep_one = 1.0 - spec.bias;
  if (spec.attribute.has_value()) {
    return record[*spec.attribute] == 1 ? keep_one : 1.0;
  }
  double probability = 1.0;
  for (int value : record) {
    if (value == 1) probability *= keep_one;
  }
  return probability;
}

absl::StatusOr<std::vector<int>> BiasedSampleIndices(const Dataset& dataset,
                                                     int pool_size,
                                                     const BiasSpec& spec,
                                                     uint64_t seed) {
  RETURN_IF_ERROR(ValidateBiasSpec(spec, dataset.cardinalities()));
  if (pool_size < 0 || pool_size > dataset.row_count()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pool size ", pool_size, " exceeds population size ",
        dataset.row_count()));
  }
  Rng rng = MakeRng(seed);
  std::vector<int> remaining(dataset.row_count());
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> accepted;
  accepted.reserve(pool_size);
  int64_t attempts = 0;
  while (static_cast<int>(accepted.size()) < pool_size) {
    if (attempts++ >= spec.max_attempts) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "biased sampling accepted ", accepted.size(), " of ", pool_size,
          " records within ", spec.max_attempts, " attempts"));
    }
    const int64_t slot = UniformIndex(rng, static_cast<int64_t>(remaining.size()));
    const int candidate = remaining[slot];
    if (Uniform01(rng) < SelectionProbability(dataset.row(candidate), spec)) {
      accepted.push_back(candidate);
      remaining[slot] = remaining.back();
      remaining.pop_back();
    }
  }
  return accepted;
}

absl::StatusOr<Dataset> BiasedSample(const Dataset& dataset, int pool_size,
                                     const BiasSpec& spec, uint64_t seed) {
  ASSIGN_OR_RETURN(std::vector<int> rows,
                   BiasedSampleIndices(dataset, pool_size, spec, seed));
  return dataset.Subset(rows);
}

}  // namespace bntrace
