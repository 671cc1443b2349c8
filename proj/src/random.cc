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

#include "bntrace/random.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace bntrace {

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng MakeRng(uint64_t seed, uint64_t stream) {
  return Rng(MixSeed(seed, stream));
}

double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int64_t UniformIndex(Rng& rng, int64_t n) {
  // Rejection keeps the draw unbiased for any n.
  const uint64_t range = static_cast<uint64_t>(n);
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % range;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int64_t>(x % range);
}

int SampleCategorical(Rng& rng, std::span<const double> probabilities) {
  const double u = Uniform01(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (int k = 0; k < static_cast<int>(probabilities.size()); ++k) {
    if (probabilities[k] <= 0.0) continue;
    last_positive = k;
    cumulative += probabilities[k];
    if (u < cumulative) return k;
  }
  return last_positive;
}

std::vector<int> RandomPermutation(Rng& rng, int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(UniformIndex(rng, i + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

std::vector<double> SampleDirichlet(Rng& rng, std::span<const double> alphas) {
  std::vector<double> draw(alphas.size());
  double total = 0.0;
  for (size_t k = 0; k < alphas.size(); ++k) {
    std::gamma_distribution<double> gamma(alphas[k], 1.0);
    draw[k] = gamma(rng);
    total += draw[k];
  }
  if (total <= 0.0) {
    // Every shape was tiny enough to underflow; fall back to the mean.
    const double alpha_sum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
    for (size_t k = 0; k < alphas.size(); ++k) draw[k] = alphas[k] / alpha_sum;
    return draw;
  }
  for (double& x : draw) x /= total;
  return draw;
}

}  // namespace bntrace
