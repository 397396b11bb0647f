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

#include "gtomo/measurement_map.h"

#include <numeric>

#include "gtest/gtest.h"

#include "gtomo/errors.h"
#include "gtomo/schemes.h"

using namespace gtomo;
using cd = std::complex<double>;

namespace {

std::vector<int> iota_sites(int n, int start = 0) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), start);
    return v;
}

QuenchEnsemble chain_ensemble(int n, std::size_t s, double h_max, uint64_t seed, double t_max = 5.0) {
    return sample_local_ensemble(build_lattice(LatticeKind::Chain, n), s, t_max, h_max, 2.0 / 3.0, 30, seed);
}

}  // namespace

TEST(forward_map, identity_selects_diagonal) {
    auto sites = iota_sites(4);
    RealMatrix f = forward_map_single(ComplexMatrix::Identity(4, 4), sites).system;
    ASSERT_EQ(f.rows(), 4);
    ASSERT_EQ(f.cols(), 16);
    EXPECT_EQ(f.leftCols(4), RealMatrix::Identity(4, 4));
    EXPECT_EQ(f.rightCols(12).cwiseAbs().maxCoeff(), 0.0);
}

TEST(forward_map, matches_direct_evolution) {
    std::vector<int> sys{0, 2, 5}, anc{1, 3, 4, 6};
    for (uint64_t seed = 0; seed < 10; ++seed) {
        ComplexMatrix u = haar_unitary(7, seed);
        CorrelationMatrix c0 = random_gaussian_state(3, 0.5, seed + 1);
        CorrelationMatrix ca = random_gaussian_state(4, 0.3, seed + 2);
        ComplexMatrix cs = evolve_correlations(embed_correlations(c0, sys, ca, anc, 7), u).matrix();
        ForwardBlocks fb = forward_map_single(u, sys, anc);
        RealVector z = fb.system * hermitian_to_vec(c0.matrix()) + fb.ancilla * hermitian_to_vec(ca.matrix());
        RealVector off = ancilla_offset(u, anc, ca);
        RealVector zsys = fb.system * hermitian_to_vec(c0.matrix());
        for (Index j = 0; j < 7; ++j) {
            EXPECT_NEAR(z[j], cs(j, j).real(), 1e-10);
            EXPECT_NEAR(zsys[j] + off[j], cs(j, j).real(), 1e-10);
        }
        EXPECT_LT((system_forward_block(u, sys) - fb.system).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(forward_map, mixed_plugin_consistency) {
    std::vector<int> sys{1, 2}, anc{0, 3};
    ComplexMatrix u = haar_unitary(4, 7);
    CorrelationMatrix ca = random_gaussian_state(2, 0.4, 3);
    ForwardBlocks fb = forward_map_single(u, sys, anc);
    CorrelationMatrix half(ComplexMatrix::Identity(2, 2) * 0.5);
    RealVector z = fb.system * hermitian_to_vec(half.matrix()) + ancilla_offset(u, anc, ca);
    ComplexMatrix cbar = evolve_correlations(embed_correlations(half, sys, ca, anc, 4), u).matrix();
    for (Index j = 0; j < 4; ++j) {
        EXPECT_NEAR(z[j], cbar(j, j).real(), 1e-12);
    }
}

TEST(stack_forward, weighted_blocks) {
    auto e = chain_ensemble(4, 5, 6.0, 1);
    auto map = stack_forward(e, empty_ancillas(e));
    EXPECT_EQ(map.rows(), 20);
    EXPECT_EQ(map.cols(), 16);
    EXPECT_EQ(map.stacked_offset(), RealVector::Zero(20));
    RealMatrix f = map.stacked();
    auto us = member_propagators(e);
    for (std::size_t s = 0; s < 5; ++s) {
        RealMatrix expect = 0.2 * forward_map_single(us[s], e.system_sites).system;
        EXPECT_LT((f.middleRows(static_cast<Index>(4 * s), 4) - expect).cwiseAbs().maxCoeff(), 1e-12);
    }
    RealVector x = hermitian_to_vec(random_gaussian_state(4, 0.5, 2).matrix());
    EXPECT_LT((map.apply(x) - f * x).cwiseAbs().maxCoeff(), 1e-13);
    auto info = map.row_info(13);
    EXPECT_EQ(info.member, 3u);
    EXPECT_EQ(info.site, 1);
}

TEST(stack_forward, global_expectation_identity) {
    auto e = global_scheme_ensemble(3);
    CorrelationMatrix c_anc = empty_ancillas(e);
    auto map = stack_forward(e, c_anc);
    EXPECT_EQ(map.rows(), static_cast<Index>(e.n_total()));
    EXPECT_EQ(map.cols(), 9);
    EXPECT_EQ(map.stacked_offset().cwiseAbs().maxCoeff(), 0.0);
    CorrelationMatrix c0 = random_gaussian_state(3, 0.5, 5);
    auto anc = e.ancilla_sites();
    ComplexMatrix cs = evolve_correlations(embed_correlations(c0, e.system_sites, c_anc, anc,
                                                              static_cast<Index>(e.n_total())),
                                           member_propagators(e)[0])
                           .matrix();
    RealVector z = map.apply(hermitian_to_vec(c0.matrix()));
    for (Index r = 0; r < z.size(); ++r) {
        EXPECT_NEAR(z[r], cs(map.row_sites[static_cast<std::size_t>(r)], map.row_sites[static_cast<std::size_t>(r)]).real(),
                    1e-10);
    }
}

TEST(stack_forward, memory_cap) {
    auto e = chain_ensemble(6, 50, 6.0, 1);
    MapOptions tiny;
    tiny.memory_cap_bytes = 1000;
    EXPECT_GT(map_memory_estimate(e), 1000u);
    EXPECT_THROW(stack_forward(e, empty_ancillas(e), tiny), ResourceError);
}

TEST(rank, examples) {
    auto e1 = chain_ensemble(4, 1, 6.0, 1);
    e1.members[0].params.t = 1e-300;  // U = I to working precision
    auto map1 = stack_forward(e1, empty_ancillas(e1));
    EXPECT_EQ(rank_check(map1).rank, 4);

    auto e = chain_ensemble(6, 100, 6.0, 1);
    RankReport full = rank_check(stack_forward(e, empty_ancillas(e)));
    EXPECT_EQ(full.rank, 36);
    EXPECT_TRUE(full.full_rank());

    auto few = chain_ensemble(6, 5, 6.0, 1);
    RankReport r = rank_check(stack_forward(few, empty_ancillas(few)));
    EXPECT_LT(r.rank, 36);
    EXPECT_EQ(r.deficiency(), 36 - r.rank);
}

TEST(rank, sublattice_obstruction_at_zero_potential) {
    for (Lattice lat : {build_lattice(LatticeKind::Chain, 5), build_lattice(LatticeKind::Grid, 3, 2)}) {
        auto e = sample_local_ensemble(lat, 40, 5.0, 6.0, 2.0 / 3.0, 30, 3);
        for (auto &m : e.members) {
            m.params.h = 0.0;
        }
        auto map = stack_forward(e, empty_ancillas(e));
        RealMatrix f = map.stacked();
        Index n = static_cast<Index>(lat.size());
        EXPECT_LT(rank_check(f).rank, n * n);
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                bool same = sublattice_sign(lat, a) == sublattice_sign(lat, b);
                Index slot = same ? imag_slot(n, a, b) : real_slot(n, a, b);
                EXPECT_LT(f.col(slot).norm(), 1e-10) << a << "," << b;
            }
        }
    }
}

TEST(rank, unrecoverable_observables) {
    auto e = chain_ensemble(4, 30, 6.0, 2);
    for (auto &m : e.members) {
        m.params.h = 0.0;
    }
    auto map = stack_forward(e, empty_ancillas(e));
    std::vector<ObservableFunctional> obs;
    obs.push_back(matrix_element_functional(4, 0, 0));
    ObservableFunctional imag_same;
    imag_same.re = RealVector::Unit(16, imag_slot(4, 0, 2));
    obs.push_back(imag_same);
    RankReport r = rank_check(map, 1e-10, obs);
    ASSERT_EQ(r.unrecoverable.size(), 2u);
    EXPECT_LT(r.unrecoverable[0], 1e-8);
    EXPECT_NEAR(r.unrecoverable[1], 1.0, 1e-8);
}

TEST(noise, identity_gives_quarter) {
    auto e = chain_ensemble(3, 1, 6.0, 1);
    e.members[0].params.t = 1e-300;
    NoiseMatrix w = noise_matrix(e, empty_ancillas(e));
    ASSERT_EQ(w.blocks.size(), 1u);
    EXPECT_LT((w.blocks[0] - 0.25 * RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(noise, wick_blocks_and_psd) {
    auto e = chain_ensemble(5, 6, 6.0, 4);
    NoiseMatrix w = noise_matrix(e, empty_ancillas(e));
    auto us = member_propagators(e);
    for (std::size_t s = 0; s < e.size(); ++s) {
        ComplexMatrix cbar = evolve_correlations(CorrelationMatrix(ComplexMatrix::Identity(5, 5) * 0.5), us[s]).matrix();
        RealMatrix expect(5, 5);
        for (Index j = 0; j < 5; ++j) {
            for (Index k = 0; k < 5; ++k) {
                expect(j, k) = (j == k ? cbar(j, j).real() : 0.0) - std::norm(cbar(j, k));
            }
        }
        expect *= e.members[s].probability;
        EXPECT_LT((w.blocks[s] - expect).cwiseAbs().maxCoeff(), 1e-13);
        for (Index j = 0; j < 5; ++j) {
            EXPECT_GE(w.blocks[s](j, j), -1e-15);
            EXPECT_LE(w.blocks[s](j, j), 0.25 * e.members[s].probability + 1e-15);
        }
    }
    RealMatrix dense = w.dense();
    EXPECT_EQ(dense.rows(), 30);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(dense);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(noise, global_with_ancillas) {
    auto e = global_scheme_ensemble(3);
    CorrelationMatrix c_anc = empty_ancillas(e);
    NoiseMatrix w = noise_matrix(e, c_anc);
    ComplexMatrix cbar = evolve_correlations(embed_correlations(CorrelationMatrix(ComplexMatrix::Identity(3, 3) * 0.5),
                                                                e.system_sites, c_anc, e.ancilla_sites(),
                                                                static_cast<Index>(e.n_total())),
                                             member_propagators(e)[0])
                             .matrix();
    auto rows = iota_sites(static_cast<int>(e.n_total()));
    EXPECT_LT((w.blocks[0] - occupation_covariance(cbar, rows)).cwiseAbs().maxCoeff(), 1e-13);
}
