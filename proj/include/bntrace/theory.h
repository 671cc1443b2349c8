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

// Closed-form leakage analysis of the likelihood-ratio tracing attack.
//
// Under both hypotheses L is modelled as Gaussian with variance C/n and means
// +C/(2n) (non-members) and -C/(2n) (members), where C is the number of
// independent parameters of the released network and n the pool size. This
// gives the power/error relation
//
//   z_alpha + z_{1-beta} = sqrt(C / n),
//
// with z_s the standard normal quantile at level 1 - s.

#ifndef BNTRACE_THEORY_H_
#define BNTRACE_THEORY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "bntrace/attack.h"

namespace bntrace {

// Standard normal CDF, via std::erfc.
double NormalCdf(double x);

// log Phi(x), accurate far into the lower tail where Phi underflows.
double LogNormalCdf(double x);

// Inverse of NormalCdf for p in (0, 1): a rational initial approximation
// polished by Halley steps on NormalCdf.
absl::StatusOr<double> NormalQuantile(double p);

struct TheoryProfile {
  double complexity = 0.0;
  int64_t pool_size = 0;
  double mu0 = 0.0;   // non-member mean
  double var0 = 0.0;  // non-member variance
  double mu1 = 0.0;   // member mean
  double var1 = 0.0;  // member variance
  std::optional<double> gdp_mu;
};

absl::StatusOr<TheoryProfile> LrMoments(double complexity, int64_t pool_size);

// beta = Phi(sqrt(C/n) - z_alpha).
absl::StatusOr<double> BoundPower(double complexity, int64_t pool_size, double alpha);

// Phi(sqrt(C/(2n))): the AUC of the two Gaussians above.
absl::StatusOr<double> BoundAuc(double complexity, int64_t pool_size);

// Exact leading variance of L for a Naive Bayes network over m binary
// attributes (C = 2m - 1) with class marginal p1:
//   C/n + m^2/(4n^2) * (1/(p1(1-p1)) - 4).
absl::StatusOr<double> NaiveBayesVariance(int64_t attribute_count,
                                          int64_t pool_size, double class_marginal);

// Power cap for a mu-GDP training mechanism: Phi(mu - z_alpha).
absl::StatusOr<double> GdpPowerCap(double mu, double alpha);

// delta(epsilon) for which mu-GDP implies (epsilon, delta)-DP:
//   Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
absl::StatusOr<double> GdpDelta(double epsilon, double mu);

// `points` log-spaced values from `lo` to `hi` inclusive.
std::vector<double> LogAlphaGrid(int points = 200, double lo = 1e-3, double hi = 1.0);

struct BoundCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;  // closed-form bound AUC (ignores any GDP cap)
};

// The bound evaluated on `alpha_grid` (values in (0, 1]; alpha = 1 maps to
// power 1). With `gdp_mu`, power is min(bound, GDP cap).
absl::StatusOr<BoundCurve> ComputeBoundCurve(double complexity, int64_t pool_size,
                                             std::span<const double> alpha_grid,
                                             std::optional<double> gdp_mu = std::nullopt);

// Trapezoidal area under power(alpha) on [0, 1] using `points` uniformly
// spaced grid intervals; used for GDP-capped curves, which have no closed form.
absl::StatusOr<double> CappedAuc(double complexity, int64_t pool_size,
                                 std::optional<double> gdp_mu, int points = 10000);

}  // namespace bntrace

#endif  // BNTRACE_THEORY_H_
