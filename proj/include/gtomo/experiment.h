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

#ifndef GTOMO_EXPERIMENT_H
#define GTOMO_EXPERIMENT_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/inverse.h"
#include "gtomo/sampler.h"

namespace gtomo {

struct ShotRecord {
    /// Zero-based ensemble member.
    std::size_t member = 0;
    Occupations n;
};

struct ShotDataset {
    std::vector<ShotRecord> records;
    std::string ensemble_hash;
    uint64_t seed = 0;
    std::size_t n_total = 0;

    std::size_t size() const {
        return records.size();
    }
};

/// R shots: member s ~ p_s, then a snapshot of U_s^* (C0 (+) C_anc) U_s^T.
/// Record r uses its own RNG stream, so output does not depend on thread count.
ShotDataset run_experiment(const CorrelationMatrix &c0,
                           const CorrelationMatrix &c_anc,
                           const QuenchEnsemble &ensemble,
                           std::size_t r,
                           uint64_t seed);
ShotDataset run_experiment(const CorrelationMatrix &c0,
                           const CorrelationMatrix &c_anc,
                           const QuenchEnsemble &ensemble,
                           std::span<const ComplexMatrix> propagators,
                           std::size_t r,
                           uint64_t seed);

/// Member index drawn from a uniform variate by inverse CDF.
std::size_t draw_member(const QuenchEnsemble &ensemble, double u);

struct EstimateResult {
    std::complex<double> value;
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::size_t r_used = 0;
    bool is_complex = false;

    /// Combined standard error; for complex values sqrt(se_re^2 + se_im^2).
    double standard_error() const;
};

/// Mean over shots of (o|G z_r) - (o|G d_anc), with its standard error.
/// Throws std::invalid_argument when the dataset and bundle come from different ensembles.
EstimateResult estimate_observable(const ShotDataset &dataset,
                                   const InverseBundle &bundle,
                                   const ObservableFunctional &o);

struct CorrelationEstimate {
    RealVector coordinates;
    ComplexMatrix matrix;
    std::size_t r_used = 0;
};

CorrelationEstimate estimate_correlation_matrix(const ShotDataset &dataset, const InverseBundle &bundle);

/// G (z - d_anc) for a stacked measurement vector z, e.g. exact expectations.
RealVector reconstruct_coordinates(const InverseBundle &bundle, const RealVector &z);

/// Exact E[z] = F vec(C0) + d_anc.
RealVector expected_measurements(const MeasurementMap &map, const CorrelationMatrix &c0);

}  // namespace gtomo

#endif
