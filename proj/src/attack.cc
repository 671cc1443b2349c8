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

#include "bntrace/attack.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

absl::Status CheckComparable(const BayesianNetwork& a, const BayesianNetwork& b) {
  if (a.structure().cardinalities() != b.structure().cardinalities()) {
    return absl::InvalidArgumentError(
        "population and released models disagree on node cardinalities");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<LrDecomposition> LrStatistic(const BayesianNetwork& population_model,
                                            const BayesianNetwork& released_model,
                                            std::span<const int> record) {
  RETURN_IF_ERROR(CheckComparable(population_model, released_model));
  RETURN_IF_ERROR(population_model.CheckRecord(record));
  LrDecomposition result;
  if (population_model.structure() == released_model.structure()) {
    const NetworkStructure& structure = released_model.structure();
    const int m = structure.node_count();
    result.per_attribute.resize(m);
    result.active_rows.resize(m);
    for (int i = 0; i < m; ++i) {
      const int64_t row = structure.ParentRow(i, record);
      result.active_rows[i] = row;
      result.per_attribute[i] = population_model.log_probability(i, row, record[i]) -
                                released_model.log_probability(i, row, record[i]);
      result.total += result.per_attribute[i];
    }
  } else {
    result.total = population_model.LogJoint(record) - released_model.LogJoint(record);
  }
  if (std::isnan(result.total)) {
    return absl::FailedPreconditionError(
        "both models assign zero probability to the record");
  }
  return result;
}

absl::StatusOr<std::vector<double>> LrStatistics(
    const BayesianNetwork& population_model, const BayesianNetwork& released_model,
    const Dataset& records) {
  RETURN_IF_ERROR(CheckComparable(population_model, released_model));
  if (records.cardinalities() != released_model.structure().cardinalities()) {
    return absl::InvalidArgumentError("records do not match the model schema");
  }
  std::vector<double> statistics(records.row_count());
  for (int r = 0; r < records.row_count(); ++r) {
    auto record = records.row(r);
    statistics[r] = population_model.LogJoint(record) - released_model.LogJoint(record);
    if (std::isnan(statistics[r])) {
      return absl::FailedPreconditionError(absl::StrCat(
          "both models assign zero probability to record ", r));
    }
  }
  return statistics;
}

absl::StatusOr<BayesianNetwork> FitPopulationModel(
    const Dataset& reference, const NetworkStructure& released_structure,
    const PriorSpec& prior) {
  return LearnParameters(reference, released_structure, prior);
}

absl::StatusOr<double> CalibrateThreshold(std::span<const double> reference_statistics,
                                          double alpha) {
  if (reference_statistics.empty()) {
    return absl::InvalidArgumentError("no reference statistics to calibrate on");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in [0, 1]");
  }
  std::vector<double> sorted(reference_statistics.begin(), reference_statistics.end());
  std::sort(sorted.begin(), sorted.end());
  const int64_t n = static_cast<int64_t>(sorted.size());
  // Largest number of reference points allowed at or below the cutoff.
  const int64_t allowed =
      std::min<int64_t>(n, static_cast<int64_t>(std::floor(alpha * n + 1e-9)));
  // Walk back over ties: sorted[k-1] is admissible iff it differs from sorted[k].
  int64_t k = allowed;
  while (k > 0 && k < n && sorted[k - 1] == sorted[k]) --k;
  if (k == 0) {
    return std::nextafter(sorted.front(), -std::numeric_limits<double>::infinity());
  }
  return sorted[k - 1];
}

AttackDecision Decide(double statistic, double threshold) {
  return {statistic, threshold,
          statistic <= threshold ? Verdict::kIn : Verdict::kOut};
}

absl::StatusOr<RocCurve> EmpiricalRoc(std::span<const double> pool_statistics,
                                      std::span<const double> population_statistics) {
  if (pool_statistics.empty() || population_statistics.empty()) {
    return absl::InvalidArgumentError("ROC needs member and non-member statistics");
  }
  auto has_nan = [](std::span<const double> values) {
    return std::any_of(values.begin(), values.end(),
                       [](double v) { return std::isnan(v); });
  };
  if (has_nan(pool_statistics) || has_nan(population_statistics)) {
    return absl::InvalidArgumentError("statistics contain NaN");
  }
  std::vector<double> pool(pool_statistics.begin(), pool_statistics.end());
  std::vector<double> population(population_statistics.begin(),
                                 population_statistics.end());
  std::sort(pool.begin(), pool.end());
  std::sort(population.begin(), population.end());
  const double n_pool = static_cast<double>(pool.size());
  const double n_pop = static_cast<double>(population.size());

  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  roc.thresholds.push_back(-std::numeric_limits<double>::infinity());
  size_t i = 0;
  size_t j = 0;
  while (i < pool.size() || j < population.size()) {
    double t;
    if (j == population.size() || (i < pool.size() && pool[i] <= population[j])) {
      t = pool[i];
    } else {
      t = population[j];
    }
    while (i < pool.size() && pool[i] == t) ++i;
    while (j < population.size() && population[j] == t) ++j;
    roc.points.push_back({static_cast<double>(j) / n_pop,
                          static_cast<double>(i) / n_pool});
    roc.thresholds.push_back(t);
  }
  double area = 0.0;
  for (size_t k = 1; k < roc.points.size(); ++k) {
    const RocPoint& a = roc.points[k - 1];
    const RocPoint& b = roc.points[k];
    area += (b.alpha - a.alpha) * (a.power + b.power) * 0.5;
  }
  roc.auc = area;
  return roc;
}

double RankAuc(std::span<const double> pool_statistics,
               std::span<const double> population_statistics) {
  std::vector<double> population(population_statistics.begin(),
                                 population_statistics.end());
  std::sort(population.begin(), population.end());
  double wins = 0.0;
  for (double x : pool_statistics) {
    auto lower = std::lower_bound(population.begin(), population.end(), x);
    auto upper = std::upper_bound(lower, population.end(), x);
    wins += static_cast<double>(population.end() - upper) +
            0.5 * static_cast<double>(upper - lower);
  }
  return wins / (static_cast<double>(pool_statistics.size()) *
                 static_cast<double>(population.size()));
}

double PowerAtError(const RocCurve& roc, double alpha) {
  const auto& points = roc.points;
  // Last point with error <= alpha; points are sorted by (alpha, power).
  auto after = std::upper_bound(
      points.begin(), points.end(), alpha,
      [](double a, const RocPoint& p) { return a < p.alpha; });
  if (after == points.begin()) return 0.0;
  const RocPoint& left = *(after - 1);
  if (after == points.end() || left.alpha == alpha) return left.power;
  const RocPoint& right = *after;
  const double weight = (alpha - left.alpha) / (right.alpha - left.alpha);
  return left.power + weight * (right.power - left.power);
}

std::string FormatCurve(std::span<const RocPoint> points,
                        std::span<const std::string> comments) {
  std::string out;
  for (const std::string& comment : comments) absl::StrAppend(&out, "# ", comment, "\n");
  for (const RocPoint& p : points) {
    absl::StrAppend(&out, absl::StrFormat("%.6f %.6f\n", p.alpha, p.power));
  }
  return out;
}

absl::Status WriteText(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path));
}

}  // namespace bntrace
