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

#ifndef GTOMO_RANDOM_H
#define GTOMO_RANDOM_H

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gtomo {

// std::mt19937_64 is bit-specified by the standard; the distributions in
// <random> are not. Everything that feeds persisted data goes through the
// helpers below so that outputs are identical across standard libraries.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of an independent stream `stream` derived from a master seed.
inline uint64_t stream_seed(uint64_t seed, uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

inline std::mt19937_64 make_stream(uint64_t seed, uint64_t stream) {
    return std::mt19937_64(stream_seed(seed, stream));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal deviate (Box-Muller, one value per call).
inline double standard_normal(std::mt19937_64 &rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform integer in [0, n).
inline uint64_t uniform_index(std::mt19937_64 &rng, uint64_t n) {
    return static_cast<uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace gtomo

#endif
