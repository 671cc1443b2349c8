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

#include "bntrace/theory.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "bntrace/status_macros.h"

namespace bntrace {
namespace {

absl::Status CheckSizes(double complexity, int64_t pool_size) {
  if (!(complexity >= 0.0) || !std::isfinite(complexity)) {
    return absl::InvalidArgumentError("complexity must be finite and non-negative");
  }
  if (pool_size < 1) return absl::InvalidArgumentError("pool size must be at least 1");
  return absl::OkStatus();
}

absl::Status CheckOpenUnit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(name, " must lie in (0, 1)"));
  }
  return absl::OkStatus();
}

// Acklam's rational approximation, relative error below 1.2e-9.
double QuantileInitialGuess(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double LogNormalCdf(double x) {
  if (x > -30.0) return std::log(NormalCdf(x));
  // Asymptotic expansion of the Mills ratio.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

absl::StatusOr<double> NormalQuantile(double p) {
  RETURN_IF_ERROR(CheckOpenUnit(p, "probability"));
  if (p > 0.5) {
    // Solve in the lower tail where NormalCdf has full relative accuracy.
    ASSIGN_OR_RETURN(double lower, NormalQuantile(1.0 - p));
    return -lower;
  }
  double x = QuantileInitialGuess(p);
  for (int step = 0; step < 2; ++step) {
    const double error = NormalCdf(x) - p;
    const double u = error * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

absl::StatusOr<TheoryProfile> LrMoments(double complexity, int64_t pool_size) {
  RETURN_IF_ERROR(CheckSizes(complexity, pool_size));
  const double n = static_cast<double>(pool_size);
  TheoryProfile profile;
  profile.complexity = complexity;
  profile.pool_size = pool_size;
  profile.mu0 = complexity / (2.0 * n);
  profile.mu1 = -profile.mu0;
  profile.var0 = complexity / n;
  profile.var1 = profile.var0;
  return profile;
}

absl::StatusOr<double> BoundPower(double complexity, int64_t pool_size, double alpha) {
  RETURN_IF_ERROR(CheckSizes(complexity, pool_size));
  RETURN_IF_ERROR(CheckOpenUnit(alpha, "alpha"));
  ASSIGN_OR_RETURN(double z_alpha, NormalQuantile(1.0 - alpha));
  return NormalCdf(std::sqrt(complexity / static_cast<double>(pool_size)) - z_alpha);
}

absl::StatusOr<double> BoundAuc(double complexity, int64_t pool_size) {
  RETURN_IF_ERROR(CheckSizes(complexity, pool_size));
  return NormalCdf(std::sqrt(complexity / (2.0 * static_cast<double>(pool_size))));
}

absl::StatusOr<double> NaiveBayesVariance(int64_t attribute_count,
                                          int64_t pool_size, double class_marginal) {
  if (attribute_count < 1) return absl::InvalidArgumentError("need at least one attribute");
  if (pool_size < 1) return absl::InvalidArgumentError("pool size must be at least 1");
  RETURN_IF_ERROR(CheckOpenUnit(class_marginal, "class marginal"));
  const double m = static_cast<double>(attribute_count);
  const double n = static_cast<double>(pool_size);
  const double complexity = 2.0 * m - 1.0;
  const double correction =
      m * m / (4.0 * n * n) *
      (1.0 / (class_marginal * (1.0 - class_marginal)) - 4.0);
  return complexity / n + correction;
}

absl::StatusOr<double> GdpPowerCap(double mu, double alpha) {
  if (!(mu >= 0.0)) return absl::InvalidArgumentError("mu must be non-negative");
  RETURN_IF_ERROR(CheckOpenUnit(alpha, "alpha"));
  ASSIGN_OR_RETURN(double z_alpha, NormalQuantile(1.0 - alpha));
  return NormalCdf(mu - z_alpha);
}

absl::StatusOr<double> GdpDelta(double epsilon, double mu) {
  if (!(mu > 0.0)) return absl::InvalidArgumentError("mu must be positive");
  if (!(epsilon >= 0.0)) return absl::InvalidArgumentError("epsilon must be non-negative");
  const double first = NormalCdf(-epsilon / mu + mu / 2.0);
  const double second = std::exp(epsilon + LogNormalCdf(-epsilon / mu - mu / 2.0));
  return std::clamp(first - second, 0.0, 1.0);
}

std::vector<double> LogAlphaGrid(int points, double lo, double hi) {
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = hi;
    return grid;
  }
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (points - 1);
  for (int k = 0; k < points; ++k) grid[k] = std::exp(log_lo + step * k);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

namespace {

absl::StatusOr<double> CappedPower(double complexity, int64_t pool_size, double alpha,
                                   std::optional<double> gdp_mu) {
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  ASSIGN_OR_RETURN(double power, BoundPower(complexity, pool_size, alpha));
  if (gdp_mu.has_value()) {
    ASSIGN_OR_RETURN(double cap, GdpPowerCap(*gdp_mu, alpha));
    power = std::min(power, cap);
  }
  return power;
}

}  // namespace

absl::StatusOr<BoundCurve> ComputeBoundCurve(double complexity, int64_t pool_size,
                                             std::span<const double> alpha_grid,
                                             std::optional<double> gdp_mu) {
  BoundCurve curve;
  ASSIGN_OR_RETURN(curve.auc, BoundAuc(complexity, pool_size));
  curve.points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    ASSIGN_OR_RETURN(double power, CappedPower(complexity, pool_size, alpha, gdp_mu));
    curve.points.push_back({alpha, power});
  }
  return curve;
}

absl::StatusOr<double> CappedAuc(double complexity, int64_t pool_size,
                                 std::optional<double> gdp_mu, int points) {
  RETURN_IF_ERROR(CheckSizes(complexity, pool_size));
  if (points < 1) return absl::InvalidArgumentError("need at least one interval");
  double area = 0.0;
  double previous = 0.0;
  for (int k = 1; k <= points; ++k) {
    const double alpha = static_cast<double>(k) / points;
    ASSIGN_OR_RETURN(double power, CappedPower(complexity, pool_size, alpha, gdp_mu));
    area += 0.5 * (previous + power) / points;
    previous = power;
  }
  return area;
}

}  // namespace bntrace
