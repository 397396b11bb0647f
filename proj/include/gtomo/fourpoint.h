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

#ifndef GTOMO_FOURPOINT_H
#define GTOMO_FOURPOINT_H

#include <span>
#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/experiment.h"
#include "gtomo/gaussian.h"
#include "gtomo/inverse.h"

namespace gtomo {

// Full coordinates |D) = |C) (+) |D'): N^2 entries C_ij at i*N + j, then N^4
// entries D'_ijkl = <c^dag_i c_j c^dag_k c_l> at N^2 + ((i*N + j)*N + k)*N + l.
//
// Reduced coordinates: hermitian_to_vec(C) followed by hermitian_to_vec(Gamma),
// Gamma_{(i,k),(j,l)} = <c^dag_k c^dag_i c_j c_l> over ordered pairs i < k, j < l.

inline constexpr int kFourPointMaxSites = 8;

Index pair_count(Index n);
Index full_dimension(Index n);
Index reduced_dimension(Index n);
Index full_index(Index n, Index i, Index j, Index k, Index l);

/// Action of a single-particle unitary on the full coordinates. Throws ResourceError above the site cap.
ComplexMatrix u4_map(const ComplexMatrix &u, int max_sites = kFourPointMaxSites);

/// U2[(j,l),(b,d)] = U_jb U_ld - U_jd U_lb on ordered pairs.
ComplexMatrix pair_unitary(const ComplexMatrix &u);

RealVector reduce_fourpoint(const ComplexVector &full);
ComplexVector expand_fourpoint(const RealVector &reduced);

/// Transport of reduced coordinates under U.
RealVector transport_reduced(const ComplexMatrix &u, const RealVector &reduced);

/// Full coordinates of a Gaussian state from its correlation matrix (Wick).
ComplexVector gaussian_fourpoint(const ComplexMatrix &c);

/// (n_0..n_{N-1}, n_i n_k for i < k).
RealVector quartic_measurement_vector(std::span<const uint8_t> n);

/// Real selection B with E[n4] = Re(B D) on full coordinates.
RealMatrix b_map(Index n);

/// Measurement block on reduced coordinates: blockdiag(F(U), F(U2)).
RealMatrix forward_block_4(const ComplexMatrix &u);

struct FourPointBundle {
    std::vector<RealMatrix> blocks;
    std::vector<double> probabilities;
    InverseBundle inverse;
    Index sites = 0;
};

/// Stacked four-point map for an ancilla-free ensemble, inverted with truncation delta.
FourPointBundle forward_map_4(const QuenchEnsemble &ensemble, double delta, int max_sites = kFourPointMaxSites);

/// Reduced-coordinate functionals.
ObservableFunctional two_point_functional(Index n, Index i, Index j);
ObservableFunctional fourpoint_element_functional(Index n, Index i, Index j, Index k, Index l);
ObservableFunctional density_density_functional(Index n, Index j, Index jp);

EstimateResult estimate_fourpoint(const ShotDataset &dataset,
                                  const FourPointBundle &bundle,
                                  const ObservableFunctional &o);

/// G (E[z4]) for exact per-member quartic expectations.
RealVector reconstruct_fourpoint(const FourPointBundle &bundle, std::span<const RealVector> expected);

}  // namespace gtomo

#endif
