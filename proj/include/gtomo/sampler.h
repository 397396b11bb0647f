// Copyright 2026 The gtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GTOMO_SAMPLER_H
#define GTOMO_SAMPLER_H

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gtomo/gaussian.h"

namespace gtomo {

using Occupations = std::vector<uint8_t>;

/// Conditional probabilities within this distance of [0, 1] are clamped;
/// anything further out raises NumericalError.
inline constexpr double kProbabilityTolerance = 1e-8;

/// One snapshot from the exact occupation distribution of the Gaussian state
/// with kernel c, drawn site by site with Schur-complement conditioning.
Occupations sample_occupations(const ComplexMatrix &c, std::mt19937_64 &rng);
Occupations sample_occupations(const CorrelationMatrix &c, std::mt19937_64 &rng);

/// Probability of one full pattern, as the product of the sampler's conditionals.
double pattern_probability(const ComplexMatrix &c, std::span<const uint8_t> pattern);

/// Probabilities of all 2^N patterns; pattern bit i is site i. Requires N <= 20.
std::vector<double> pattern_distribution(const ComplexMatrix &c);

/// P(n_j = 0 for all j in sites) = det(I - C_A).
double void_probability(const ComplexMatrix &c, std::span<const int> sites);

}  // namespace gtomo

#endif
