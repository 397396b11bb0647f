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

#include "gtomo/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

#include "gtomo/errors.h"
#include "gtomo/random.h"
#include "support/fock.h"
#include "support/void_oracle.h"

using namespace gtomo;

using oracle::inclusion_exclusion;
using oracle::total_variation;

TEST(sampler, deterministic_kernel) {
    ComplexMatrix c = ComplexMatrix::Zero(2, 2);
    c(0, 0) = 1.0;
    std::mt19937_64 rng = make_stream(1, 0);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(sample_occupations(c, rng), (Occupations{1, 0}));
    }
}

TEST(sampler, half_filling_is_independent_bernoulli) {
    auto dist = pattern_distribution(ComplexMatrix::Identity(4, 4) * 0.5);
    for (double p : dist) {
        EXPECT_NEAR(p, 1.0 / 16, 1e-15);
    }
    std::mt19937_64 rng = make_stream(2, 0);
    const int r = 40000;
    RealVector mean = RealVector::Zero(3);
    double cross = 0.0;
    for (int i = 0; i < r; ++i) {
        Occupations n = sample_occupations(ComplexMatrix::Identity(3, 3) * 0.5, rng);
        for (int j = 0; j < 3; ++j) {
            mean[j] += n[static_cast<std::size_t>(j)];
        }
        cross += n[0] * n[1];
    }
    mean /= r;
    for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(mean[j], 0.5, 4 * 0.5 / std::sqrt(r));
    }
    EXPECT_NEAR(cross / r - mean[0] * mean[1], 0.0, 4 * 0.25 / std::sqrt(r));
}

TEST(sampler, chain_matches_void_oracle) {
    for (Index n : {2, 3, 4}) {
        for (uint64_t seed = 0; seed < 20; ++seed) {
            ComplexMatrix c = random_gaussian_state(n, 0.2 + 0.03 * static_cast<double>(seed), seed).matrix();
            auto chain = pattern_distribution(c);
            EXPECT_LT(total_variation(chain, inclusion_exclusion(c)), 1e-10);
            EXPECT_NEAR(std::accumulate(chain.begin(), chain.end(), 0.0), 1.0, 1e-12);
        }
    }
}

TEST(sampler, chain_matches_fock_space) {
    oracle::FockSpace fock(4);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        ComplexMatrix c = random_gaussian_state(4, 0.45, seed + 10).matrix();
        ComplexMatrix rho = fock.gaussian_state(c);
        ASSERT_LT((fock.two_point(rho) - c).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(total_variation(pattern_distribution(c), fock.pattern_distribution(rho)), 1e-10);
    }
}

TEST(sampler, void_probability_examples) {
    ComplexMatrix c = random_gaussian_state(4, 0.5, 3).matrix();
    EXPECT_EQ(void_probability(c, std::vector<int>{}), 1.0);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = 0.6;
    EXPECT_NEAR(void_probability(d, std::vector<int>{0, 1}), 0.7 * 0.4, 1e-15);
    auto dist = pattern_distribution(c);
    EXPECT_NEAR(void_probability(c, std::vector<int>{0, 1, 2, 3}), dist[0], 1e-12);
    double p02 = 0.0;
    for (uint32_t pat = 0; pat < 16; ++pat) {
        if ((pat & 0b0101u) == 0) {
            p02 += dist[pat];
        }
    }
    EXPECT_NEAR(void_probability(c, std::vector<int>{0, 2}), p02, 1e-12);
}

TEST(sampler, order_invariance) {
    ComplexMatrix c = random_gaussian_state(4, 0.4, 7).matrix();
    std::vector<int> perm{2, 0, 3, 1};
    ComplexMatrix pc(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            pc(i, j) = c(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
    }
    auto a = pattern_distribution(c);
    auto b = pattern_distribution(pc);
    for (uint32_t pat = 0; pat < 16; ++pat) {
        uint32_t mapped = 0;
        for (int i = 0; i < 4; ++i) {
            if ((pat >> i) & 1u) {
                mapped |= 1u << perm[static_cast<std::size_t>(i)];
            }
        }
        EXPECT_NEAR(b[pat], a[mapped], 1e-13);
    }
}

TEST(sampler, empirical_frequencies) {
    ComplexMatrix c = random_gaussian_state(3, 0.5, 12).matrix();
    auto dist = pattern_distribution(c);
    std::vector<int> counts(8, 0);
    std::mt19937_64 rng = make_stream(4, 0);
    const int r = 50000;
    for (int i = 0; i < r; ++i) {
        Occupations n = sample_occupations(c, rng);
        counts[static_cast<std::size_t>(n[0] | (n[1] << 1) | (n[2] << 2))]++;
    }
    double chi2 = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
        double expect = dist[k] * r;
        if (expect > 0) {
            chi2 += (counts[k] - expect) * (counts[k] - expect) / expect;
        }
    }
    EXPECT_LT(chi2, 24.3);  // 7 degrees of freedom, p ~ 0.001
}

TEST(sampler, pattern_probability_matches_distribution) {
    ComplexMatrix c = random_gaussian_state(3, 0.5, 1).matrix();
    auto dist = pattern_distribution(c);
    for (uint32_t pat = 0; pat < 8; ++pat) {
        std::vector<uint8_t> n{uint8_t(pat & 1u), uint8_t((pat >> 1) & 1u), uint8_t((pat >> 2) & 1u)};
        EXPECT_NEAR(pattern_probability(c, n), dist[pat], 1e-14);
    }
}

TEST(sampler, invalid_kernel) {
    ComplexMatrix c = ComplexMatrix::Identity(2, 2) * 1.2;
    std::mt19937_64 rng = make_stream(0, 0);
    EXPECT_THROW(sample_occupations(c, rng), NumericalError);
    ComplexMatrix tiny = ComplexMatrix::Identity(2, 2) * (1.0 + 1e-12);
    EXPECT_EQ(sample_occupations(tiny, rng), (Occupations{1, 1}));
}
