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

#ifndef BNTRACE_ATTACK_H_
#define BNTRACE_ATTACK_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "bntrace/dataset.h"
#include "bntrace/learn.h"
#include "bntrace/network.h"

namespace bntrace {

// L(x) = ln Pr[x; population] - ln Pr[x; released]. Small values point to
// membership.
struct LrDecomposition {
  double total = 0.0;
  // Per-attribute contributions and the parent row each record selects.
  // Empty when the two models have different structures.
  std::vector<double> per_attribute;
  std::vector<int64_t> active_rows;

  bool decomposed() const { return !per_attribute.empty(); }
};

absl::StatusOr<LrDecomposition> LrStatistic(const BayesianNetwork& population_model,
                                            const BayesianNetwork& released_model,
                                            std::span<const int> record);

// Totals only, one per row of `records`. No per-record validation beyond the
// schema check.
absl::StatusOr<std::vector<double>> LrStatistics(
    const BayesianNetwork& population_model, const BayesianNetwork& released_model,
    const Dataset& records);

// The attacker's null model: the released structure with parameters learned
// on the reference population.
absl::StatusOr<BayesianNetwork> FitPopulationModel(
    const Dataset& reference, const NetworkStructure& released_structure,
    const PriorSpec& prior);

// Lower empirical alpha-quantile: the largest cutoff t such that the fraction
// of statistics <= t does not exceed alpha. Cutoffs are observed values, or
// the next double below the minimum when no observed value qualifies.
absl::StatusOr<double> CalibrateThreshold(std::span<const double> reference_statistics,
                                          double alpha);

enum class Verdict { kIn, kOut };

struct AttackDecision {
  double statistic = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::kOut;
};

// IN iff statistic <= threshold.
AttackDecision Decide(double statistic, double threshold);

struct RocPoint {
  double alpha = 0.0;
  double power = 0.0;
};

// Empirical ROC of the LR test. points[0] is (0, 0) at threshold -inf; every
// later point sits at a distinct observed statistic, ending at (1, 1).
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<double> thresholds;
  double auc = 0.0;
};

// `pool_statistics` come from members, `population_statistics` from
// non-members.
absl::StatusOr<RocCurve> EmpiricalRoc(std::span<const double> pool_statistics,
                                      std::span<const double> population_statistics);

// Mann-Whitney form of the AUC: Pr[L_member < L_nonmember] + 0.5 Pr[tie].
double RankAuc(std::span<const double> pool_statistics,
               std::span<const double> population_statistics);

// Power at error `alpha` by linear interpolation along the ROC polyline. At a
// vertical segment the upper end is returned.
double PowerAtError(const RocCurve& roc, double alpha);

// Two-column "alpha power" text with '#' comment lines, 6 decimals.
std::string FormatCurve(std::span<const RocPoint> points,
                        std::span<const std::string> comments = {});

absl::Status WriteText(const std::string& text, const std::string& path);

}  // namespace bntrace

#endif  // BNTRACE_ATTACK_H_
