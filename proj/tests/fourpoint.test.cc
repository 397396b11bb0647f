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

#include "gtomo/fourpoint.h"

#include "gtest/gtest.h"

#include "gtomo/errors.h"
#include "gtomo/pipeline.h"
#include "support/fock.h"

using namespace gtomo;

namespace {

double max_abs(const ComplexMatrix &m) {
    return m.cwiseAbs().maxCoeff();
}

QuenchEnsemble chain_ensemble(int n, std::size_t s, uint64_t seed) {
    return sample_local_ensemble(build_lattice(LatticeKind::Chain, n), s, 5.0, 6.0, 2.0 / 3.0, 30, seed);
}

double fock_expectation(const oracle::FockSpace &fock, const ComplexMatrix &rho, const ComplexMatrix &op) {
    return (rho * op).trace().real();
}

}  // namespace

TEST(fourpoint_indexing, dimensions) {
    EXPECT_EQ(pair_count(4), 6);
    EXPECT_EQ(full_dimension(3), 9 + 81);
    EXPECT_EQ(reduced_dimension(4), 16 + 36);
    EXPECT_EQ(full_index(2, 1, 0, 1, 1), 4 + 11);
}

TEST(quartic_vector, examples) {
    EXPECT_EQ(quartic_measurement_vector(std::vector<uint8_t>{1, 1}), (RealVector(3) << 1, 1, 1).finished());
    EXPECT_EQ(quartic_measurement_vector(std::vector<uint8_t>{0, 0, 0, 0}), RealVector::Zero(10));
    RealVector q = quartic_measurement_vector(std::vector<uint8_t>{1, 0, 1});
    EXPECT_EQ(q, (RealVector(6) << 1, 0, 1, 0, 1, 0).finished());
    for (int n = 1; n <= 6; ++n) {
        EXPECT_EQ(quartic_measurement_vector(Occupations(static_cast<std::size_t>(n), 1)).size(), n + n * (n - 1) / 2);
    }
}

TEST(u4_map, identity_and_group_property) {
    ComplexMatrix m = u4_map(ComplexMatrix::Identity(3, 3));
    EXPECT_LT(max_abs(m - ComplexMatrix::Identity(m.rows(), m.cols())), 1e-15);
    ComplexMatrix u1 = haar_unitary(3, 1), u2 = haar_unitary(3, 2);
    EXPECT_LT(max_abs(u4_map(u1 * u2) - u4_map(u1) * u4_map(u2)), 1e-9);
    EXPECT_THROW(u4_map(haar_unitary(9, 0)), ResourceError);
}

TEST(u4_map, block_triangular) {
    ComplexMatrix m = u4_map(haar_unitary(3, 4));
    EXPECT_EQ(m.topRightCorner(9, 81).cwiseAbs().maxCoeff(), 0.0);
}

TEST(fock_oracle, rotation_matches_correlation_evolution) {
    oracle::FockSpace fock(3);
    for (uint64_t seed = 0; seed < 3; ++seed) {
        ComplexMatrix rho = fock.random_pure_state(seed);
        ComplexMatrix u = haar_unitary(3, seed + 20);
        ComplexMatrix c = fock.two_point(rho);
        ComplexMatrix cs = fock.two_point(fock.evolve(rho, u));
        EXPECT_LT(max_abs(cs - evolve_correlations(CorrelationMatrix(c), u).matrix()), 1e-10);
    }
}

TEST(u4_map, transports_fock_correlators) {
    for (int n : {3, 4}) {
        oracle::FockSpace fock(n);
        for (uint64_t seed = 0; seed < 5; ++seed) {
            ComplexMatrix rho = fock.random_pure_state(100 + seed);
            ComplexMatrix u = haar_unitary(n, 200 + seed);
            ComplexVector before = fock.full_correlators(rho);
            ComplexVector after = fock.full_correlators(fock.evolve(rho, u));
            EXPECT_LT((u4_map(u) * before - after).cwiseAbs().maxCoeff(), 1e-9);
            RealVector red = reduce_fourpoint(before);
            EXPECT_LT((transport_reduced(u, red) - reduce_fourpoint(after)).cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(reduction, round_trip_on_physical_states) {
    oracle::FockSpace fock(4);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        ComplexVector full = fock.full_correlators(fock.random_pure_state(seed));
        RealVector red = reduce_fourpoint(full);
        EXPECT_EQ(red.size(), reduced_dimension(4));
        EXPECT_LT((expand_fourpoint(red) - full).cwiseAbs().maxCoeff(), 1e-12);
        // Hermiticity: D'_ijkl = conj(D'_lkji).
        for (Index i = 0; i < 4; ++i) {
            for (Index j = 0; j < 4; ++j) {
                for (Index k = 0; k < 4; ++k) {
                    for (Index l = 0; l < 4; ++l) {
                        EXPECT_LT(std::abs(full[full_index(4, i, j, k, l)] - std::conj(full[full_index(4, l, k, j, i)])),
                                  1e-12);
                    }
                }
            }
        }
    }
}

TEST(wick, gaussian_fourpoint_matches_fock) {
    oracle::FockSpace fock(3);
    ComplexMatrix c = random_gaussian_state(3, 0.5, 4).matrix();
    ComplexVector expect = fock.full_correlators(fock.gaussian_state(c));
    EXPECT_LT((gaussian_fourpoint(c) - expect).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(b_map, occupation_moments) {
    oracle::FockSpace fock(4);
    ComplexMatrix rho = fock.random_pure_state(9);
    RealVector moments = (b_map(4) * fock.full_correlators(rho)).real();
    int row = 0;
    for (int j = 0; j < 4; ++j, ++row) {
        EXPECT_NEAR(moments[row], fock_expectation(fock, rho, fock.cdag(j) * fock.c(j)), 1e-12);
    }
    for (int i = 0; i < 4; ++i) {
        for (int k = i + 1; k < 4; ++k, ++row) {
            ComplexMatrix op = fock.cdag(i) * fock.c(i) * fock.cdag(k) * fock.c(k);
            EXPECT_NEAR(moments[row], fock_expectation(fock, rho, op), 1e-12);
        }
    }
}

TEST(forward_block_4, expectations_match_direct) {
    oracle::FockSpace fock(4);
    for (uint64_t seed = 0; seed < 3; ++seed) {
        ComplexMatrix rho = fock.random_pure_state(30 + seed);
        ComplexMatrix u = haar_unitary(4, 40 + seed);
        RealVector pred = forward_block_4(u) * reduce_fourpoint(fock.full_correlators(rho));
        RealVector direct = (b_map(4) * fock.full_correlators(fock.evolve(rho, u))).real();
        EXPECT_LT((pred - direct).cwiseAbs().maxCoeff(), 1e-10);
    }
    ComplexMatrix c = random_gaussian_state(4, 0.5, 1).matrix();
    ComplexMatrix u = haar_unitary(4, 2);
    RealVector pred = forward_block_4(u) * reduce_fourpoint(gaussian_fourpoint(c));
    ComplexMatrix cs = evolve_correlations(CorrelationMatrix(c), u).matrix();
    int row = 4;
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(pred[i], cs(i, i).real(), 1e-10);
        for (int k = i + 1; k < 4; ++k, ++row) {
            EXPECT_NEAR(pred[row], cs(i, i).real() * cs(k, k).real() - std::norm(cs(i, k)), 1e-10);
        }
    }
}

TEST(forward_map_4, noiseless_round_trip) {
    QuenchEnsemble e = chain_ensemble(4, 200, 1);
    FourPointBundle b = forward_map_4(e, 1e-3);
    EXPECT_EQ(b.inverse.rank(), reduced_dimension(4));
    oracle::FockSpace fock(4);
    ComplexMatrix rho = fock.random_pure_state(3);
    RealVector truth = reduce_fourpoint(fock.full_correlators(rho));
    auto us = member_propagators(e);
    std::vector<RealVector> expected;
    for (const auto &u : us) {
        expected.push_back(forward_block_4(u) * truth);
    }
    EXPECT_LT((reconstruct_fourpoint(b, expected) - truth).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(forward_map_4, rejects_bad_inputs) {
    EXPECT_THROW(forward_map_4(chain_ensemble(4, 3, 1), 1e-3), RankDeficientError);
    EXPECT_THROW(forward_map_4(global_scheme_ensemble(2), 1e-3), std::invalid_argument);
    EXPECT_THROW(forward_map_4(chain_ensemble(9, 400, 1), 1e-3), ResourceError);
}

TEST(functionals, evaluate_fock_values) {
    oracle::FockSpace fock(3);
    ComplexMatrix rho = fock.random_pure_state(5);
    ComplexVector full = fock.full_correlators(rho);
    RealVector red = reduce_fourpoint(full);
    auto eval = [&](const ObservableFunctional &f) { return std::complex<double>(f.re.dot(red), f.im.dot(red)); };
    EXPECT_LT(std::abs(eval(two_point_functional(3, 0, 2)) - full[0 * 3 + 2]), 1e-12);
    for (auto [i, j, k, l] : {std::array<Index, 4>{0, 1, 2, 0}, {1, 1, 2, 2}, {2, 0, 0, 1}, {0, 2, 2, 1}}) {
        EXPECT_LT(std::abs(eval(fourpoint_element_functional(3, i, j, k, l)) - full[full_index(3, i, j, k, l)]), 1e-12);
    }
    double nn = fock_expectation(fock, rho, fock.cdag(0) * fock.c(0) * fock.cdag(2) * fock.c(2));
    EXPECT_NEAR(eval(density_density_functional(3, 0, 2)).real(), nn, 1e-12);
    double n1 = fock_expectation(fock, rho, fock.cdag(1) * fock.c(1));
    EXPECT_NEAR(eval(density_density_functional(3, 1, 1)).real(), n1, 1e-12);
}

TEST(estimate_fourpoint, gaussian_density_density) {
    QuenchEnsemble e = chain_ensemble(3, 60, 2);
    FourPointBundle b = forward_map_4(e, 1e-3);
    CorrelationMatrix c0 = random_gaussian_state(3, 0.5, 3);
    ShotDataset d = run_experiment(c0, empty_ancillas(e), e, 20000, 4);
    const ComplexMatrix &c = c0.matrix();
    EstimateResult nn = estimate_fourpoint(d, b, density_density_functional(3, 0, 1));
    double truth = c(0, 0).real() * c(1, 1).real() - std::norm(c(0, 1));
    EXPECT_LT(std::abs(nn.value.real() - truth), 4 * nn.standard_error());
    EstimateResult two = estimate_fourpoint(d, b, two_point_functional(3, 0, 1));
    EXPECT_LT(std::abs(two.value - c(0, 1)), 4 * two.standard_error());
    auto p = build_pipeline(e, {.method = InverseMethod::Pseudo, .delta = 1e-3});
    EstimateResult ref = estimate_observable(d, p.bundle, matrix_element_functional(3, 0, 1));
    EXPECT_LT(std::abs(two.value - ref.value), 4 * std::hypot(two.standard_error(), ref.standard_error()));
}
