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

#ifndef GTOMO_MEASUREMENT_MAP_H
#define GTOMO_MEASUREMENT_MAP_H

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/gaussian.h"

namespace gtomo {

/// Occupation expectations of one quench as a linear function of the
/// initial correlations. Rows follow the rows of U; `system` has columns in
/// the Hermitian basis over `system_sites`, `ancilla` over `ancilla_sites`.
struct ForwardBlocks {
    RealMatrix system;
    RealMatrix ancilla;
};

/// `u` may be a row subset of a propagator; its columns index lattice sites.
ForwardBlocks forward_map_single(const ComplexMatrix &u,
                                 std::span<const int> system_sites,
                                 std::span<const int> ancilla_sites = {});

/// Rows of forward_map_single(u, system_sites).system without the ancilla block.
RealMatrix system_forward_block(const ComplexMatrix &u, std::span<const int> system_sites);

/// Ancilla contribution diag(U_anc^* C_anc U_anc^T) restricted to the rows of u.
RealVector ancilla_offset(const ComplexMatrix &u, std::span<const int> ancilla_sites, const CorrelationMatrix &c_anc);

/// Stacked map F = (p_1 F_1; ...; p_S F_S), kept as unweighted blocks.
struct MeasurementMap {
    std::vector<double> probabilities;
    std::vector<RealMatrix> blocks;
    /// Per-member ancilla offsets F_s^anc vec(C_anc), unweighted.
    std::vector<RealVector> offsets;
    /// Lattice site measured by each row of a block.
    std::vector<int> row_sites;
    /// Sites spanning the column basis.
    std::vector<int> column_sites;
    std::string ensemble_hash;

    std::size_t members() const {
        return blocks.size();
    }
    Index rows() const;
    Index cols() const;
    RealMatrix stacked() const;
    /// d_anc.
    RealVector stacked_offset() const;
    /// F x.
    RealVector apply(const RealVector &x) const;

    struct RowInfo {
        std::size_t member = 0;
        int site = 0;
    };
    RowInfo row_info(Index row) const;
};

struct MapOptions {
    std::size_t memory_cap_bytes = std::size_t{2} << 30;
};

/// Bytes needed to hold the dense blocks of the stacked map.
std::size_t map_memory_estimate(const QuenchEnsemble &ensemble);

/// Throws ResourceError when the estimate exceeds the cap.
MeasurementMap stack_forward(const QuenchEnsemble &ensemble,
                             const CorrelationMatrix &c_anc,
                             const MapOptions &options = {});

/// Same, with precomputed full propagators (one per member).
MeasurementMap stack_forward(const QuenchEnsemble &ensemble,
                             std::span<const ComplexMatrix> propagators,
                             const CorrelationMatrix &c_anc,
                             const MapOptions &options = {});

/// Vacuum ancillas.
CorrelationMatrix empty_ancillas(const QuenchEnsemble &ensemble);

struct RankReport {
    Index rank = 0;
    Index required = 0;
    RealVector singular_values;
    /// Norm of each queried observable's component outside the row space of F.
    std::vector<double> unrecoverable;

    Index deficiency() const {
        return required - rank;
    }
    bool full_rank() const {
        return rank >= required;
    }
};

/// Numerical rank at relative singular-value threshold.
RankReport rank_check(const RealMatrix &f,
                      double threshold = 1e-10,
                      std::span<const ObservableFunctional> observables = {});
RankReport rank_check(const MeasurementMap &map,
                      double threshold = 1e-10,
                      std::span<const ObservableFunctional> observables = {});

/// Block-diagonal noise W = (+)_s p_s W_s; blocks share the row layout of the map.
struct NoiseMatrix {
    std::vector<RealMatrix> blocks;

    RealMatrix dense() const;
};

/// Occupation covariance of the Gaussian state c: delta_jk c_jj - |c_jk|^2 over `rows`.
RealMatrix occupation_covariance(const ComplexMatrix &c, std::span<const int> rows);

/// Plug-in noise with the system maximally mixed.
NoiseMatrix noise_matrix(const QuenchEnsemble &ensemble, const CorrelationMatrix &c_anc);
NoiseMatrix noise_matrix(const QuenchEnsemble &ensemble,
                         std::span<const ComplexMatrix> propagators,
                         const CorrelationMatrix &c_anc);

}  // namespace gtomo

#endif
