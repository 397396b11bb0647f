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

#ifndef GTOMO_INVERSE_H
#define GTOMO_INVERSE_H

#include <span>
#include <string>
#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/measurement_map.h"

namespace gtomo {

enum class InverseMethod { Optimal, Pseudo };

std::string to_string(InverseMethod method);

/// A left inverse G of a stacked measurement map, split into column blocks
/// G_s so that G z = sum_s G_s z_s.
struct InverseBundle {
    InverseMethod method = InverseMethod::Optimal;
    double delta = 0.0;
    double w_floor = 0.0;
    /// L = F^T W~^-1 F (optimal) or F^T F (pseudo).
    RealMatrix gram;
    /// L^-1, or the truncated pseudo-inverse of L.
    RealMatrix gram_inverse;
    /// Per-shot covariance G W G^T of the coordinate estimate.
    RealMatrix covariance;
    /// Orthonormal basis of the retained subspace (columns).
    RealMatrix retained_basis;
    std::vector<RealMatrix> g_blocks;
    /// G d_anc.
    RealVector offset_image;
    std::vector<int> row_sites;
    std::vector<int> column_sites;
    std::string ensemble_hash;

    Index dimension() const {
        return gram.rows();
    }
    Index rank() const {
        return retained_basis.cols();
    }
    RealMatrix left_inverse() const;
    RealMatrix retained_projector() const;
    /// G z for a stacked measurement vector.
    RealVector apply(const RealVector &z) const;
};

struct InverseOptions {
    double w_floor = 1e-8;
    /// Skip storing G_s when only the variance analytics are needed.
    bool keep_blocks = true;
};

/// G = L^-1 F^T W~^-1 with W~ = W + w_floor I. Throws RankDeficientError when L is singular.
InverseBundle optimal_inverse(const MeasurementMap &map, const NoiseMatrix &noise, const InverseOptions &options = {});
InverseBundle optimal_inverse(const RealMatrix &f, const RealMatrix &w, double w_floor = 0.0);

/// Truncated Moore-Penrose inverse keeping singular values >= delta * sigma_max.
/// `noise`, when given, is used only for the covariance.
InverseBundle pseudo_inverse(const MeasurementMap &map,
                             double delta,
                             const NoiseMatrix *noise = nullptr,
                             const InverseOptions &options = {});
InverseBundle pseudo_inverse(const RealMatrix &f, double delta, const RealMatrix *w = nullptr);

/// General form over unweighted blocks F_s with weights p_s; `noise` holds p_s W_s.
InverseBundle block_inverse(std::span<const RealMatrix> blocks,
                            std::span<const double> weights,
                            InverseMethod method,
                            double delta,
                            const std::vector<RealMatrix> *noise = nullptr,
                            const InverseOptions &options = {});

/// Inverse restricted to a patch around `target`: rows on the ell_out patch,
/// columns on correlations inside the ell_in patch. Requires an ensemble without ancillas.
struct LocalizedInverse {
    InverseBundle bundle;
    std::vector<int> inner_sites;
    std::vector<int> outer_sites;
};

LocalizedInverse truncated_local_map(const QuenchEnsemble &ensemble, int target, int ell_in, int ell_out, double delta);

}  // namespace gtomo

#endif
