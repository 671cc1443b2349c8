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

// Deterministic random helpers. Everything randomized in bntrace takes an
// explicit 64-bit seed and draws from std::mt19937_64; the conversions below
// avoid the implementation-defined std distributions where that matters for
// cross-platform reproducibility.

#ifndef BNTRACE_RANDOM_H_
#define BNTRACE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bntrace {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// (seed, stream) pair.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

Rng MakeRng(uint64_t seed, uint64_t stream = 0);

// Uniform double in [0, 1) with 53 random bits.
double Uniform01(Rng& rng);

// Uniform integer in [0, n). Requires n > 0.
int64_t UniformIndex(Rng& rng, int64_t n);

// Draws an index from a probability vector by inversion. The vector must
// sum to 1 up to rounding; the last positive entry absorbs any remainder.
int SampleCategorical(Rng& rng, std::span<const double> probabilities);

// Fisher-Yates shuffle of [0, n).
std::vector<int> RandomPermutation(Rng& rng, int n);

// One draw from Dirichlet(alphas) via normalized Gamma variates.
std::vector<double> SampleDirichlet(Rng& rng, std::span<const double> alphas);

}  // namespace bntrace

#endif  // BNTRACE_RANDOM_H_
