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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gtomo/errors.h"
#include "gtomo/parallel.h"

namespace gtomo {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

std::vector<int> all_rows(const QuenchEnsemble &ensemble) {
    std::vector<int> out(ensemble.n_total());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<int>(i);
    }
    return out;
}

void check_ancilla_state(const QuenchEnsemble &ensemble, const CorrelationMatrix &c_anc) {
    auto n_anc = static_cast<Index>(ensemble.n_total() - ensemble.n_system());
    if (c_anc.size() != n_anc) {
        throw std::invalid_argument("ancilla correlation matrix does not match the ancilla count");
    }
}

}  // namespace

RealMatrix system_forward_block(const ComplexMatrix &u, std::span<const int> system_sites) {
    auto n = static_cast<Index>(system_sites.size());
    RealMatrix f(u.rows(), n * n);
    for (Index j = 0; j < u.rows(); ++j) {
        for (Index a = 0; a < n; ++a) {
            f(j, a) = std::norm(u(j, system_sites[a]));
        }
        Index slot = n;
        for (Index a = 0; a < n; ++a) {
            std::complex<double> ua = std::conj(u(j, system_sites[a]));
            for (Index b = a + 1; b < n; ++b) {
                std::complex<double> z = ua * u(j, system_sites[b]);
                f(j, slot++) = kSqrt2 * z.real();
                f(j, slot++) = -kSqrt2 * z.imag();
            }
        }
    }
    return f;
}

ForwardBlocks forward_map_single(const ComplexMatrix &u,
                                 std::span<const int> system_sites,
                                 std::span<const int> ancilla_sites) {
    return {system_forward_block(u, system_sites), system_forward_block(u, ancilla_sites)};
}

RealVector ancilla_offset(const ComplexMatrix &u, std::span<const int> ancilla_sites, const CorrelationMatrix &c_anc) {
    RealVector out = RealVector::Zero(u.rows());
    if (ancilla_sites.empty() || c_anc.matrix().isZero(0.0)) {
        return out;
    }
    ComplexMatrix ua(u.rows(), static_cast<Index>(ancilla_sites.size()));
    for (std::size_t a = 0; a < ancilla_sites.size(); ++a) {
        ua.col(static_cast<Index>(a)) = u.col(ancilla_sites[a]);
    }
    ComplexMatrix left = ua.conjugate() * c_anc.matrix();
    for (Index j = 0; j < u.rows(); ++j) {
        out[j] = (left.row(j).transpose().cwiseProduct(ua.row(j).transpose())).sum().real();
    }
    return out;
}

Index MeasurementMap::rows() const {
    return static_cast<Index>(blocks.size() * row_sites.size());
}

Index MeasurementMap::cols() const {
    auto n = static_cast<Index>(column_sites.size());
    return n * n;
}

RealMatrix MeasurementMap::stacked() const {
    RealMatrix out(rows(), cols());
    auto r = static_cast<Index>(row_sites.size());
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        out.middleRows(static_cast<Index>(s) * r, r) = probabilities[s] * blocks[s];
    }
    return out;
}

RealVector MeasurementMap::stacked_offset() const {
    RealVector out(rows());
    auto r = static_cast<Index>(row_sites.size());
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        out.segment(static_cast<Index>(s) * r, r) = probabilities[s] * offsets[s];
    }
    return out;
}

RealVector MeasurementMap::apply(const RealVector &x) const {
    if (x.size() != cols()) {
        throw std::invalid_argument("MeasurementMap::apply: dimension mismatch");
    }
    RealVector out(rows());
    auto r = static_cast<Index>(row_sites.size());
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        out.segment(static_cast<Index>(s) * r, r) = probabilities[s] * (blocks[s] * x);
    }
    return out;
}

MeasurementMap::RowInfo MeasurementMap::row_info(Index row) const {
    if (row < 0 || row >= rows()) {
        throw std::out_of_range("row index outside map");
    }
    auto r = static_cast<Index>(row_sites.size());
    return {static_cast<std::size_t>(row / r), row_sites[row % r]};
}

std::size_t map_memory_estimate(const QuenchEnsemble &ensemble) {
    std::size_t n = ensemble.n_system();
    return ensemble.size() * ensemble.n_total() * n * n * sizeof(double);
}

CorrelationMatrix empty_ancillas(const QuenchEnsemble &ensemble) {
    return CorrelationMatrix::zeros(static_cast<Index>(ensemble.n_total() - ensemble.n_system()));
}

MeasurementMap stack_forward(const QuenchEnsemble &ensemble, const CorrelationMatrix &c_anc, const MapOptions &options) {
    ensemble.validate();
    check_ancilla_state(ensemble, c_anc);
    std::size_t need = map_memory_estimate(ensemble);
    if (need > options.memory_cap_bytes) {
        throw ResourceError("measurement map needs " + std::to_string(need) +
                            " bytes, above the configured cap; use the truncated local map instead");
    }
    auto props = member_propagators(ensemble);
    return stack_forward(ensemble, props, c_anc, options);
}

MeasurementMap stack_forward(const QuenchEnsemble &ensemble,
                             std::span<const ComplexMatrix> propagators,
                             const CorrelationMatrix &c_anc,
                             const MapOptions &options) {
    ensemble.validate();
    check_ancilla_state(ensemble, c_anc);
    if (propagators.size() != ensemble.size()) {
        throw std::invalid_argument("one propagator per ensemble member required");
    }
    std::size_t need = map_memory_estimate(ensemble);
    if (need > options.memory_cap_bytes) {
        throw ResourceError("measurement map needs " + std::to_string(need) +
                            " bytes, above the configured cap; use the truncated local map instead");
    }
    MeasurementMap map;
    map.row_sites = all_rows(ensemble);
    map.column_sites = ensemble.system_sites;
    map.ensemble_hash = ensemble_hash(ensemble);
    std::vector<int> ancillas = ensemble.ancilla_sites();
    map.probabilities.resize(ensemble.size());
    map.blocks.resize(ensemble.size());
    map.offsets.resize(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        map.probabilities[s] = ensemble.members[s].probability;
        map.blocks[s] = system_forward_block(propagators[s], ensemble.system_sites);
        map.offsets[s] = ancilla_offset(propagators[s], ancillas, c_anc);
    });
    return map;
}

RankReport rank_check(const RealMatrix &f, double threshold, std::span<const ObservableFunctional> observables) {
    RankReport report;
    report.required = f.cols();
    if (f.cols() == 0) {
        return report;
    }
    // Reduce tall maps to their triangular factor; singular values are unchanged.
    RealMatrix core;
    if (f.rows() > f.cols()) {
        Eigen::HouseholderQR<RealMatrix> qr(f);
        core = qr.matrixQR().topRows(f.cols()).triangularView<Eigen::Upper>();
    } else {
        core = f;
    }
    Eigen::BDCSVD<RealMatrix> svd(core, observables.empty() ? 0 : Eigen::ComputeFullV);
    report.singular_values = svd.singularValues();
    double smax = report.singular_values.size() > 0 ? report.singular_values[0] : 0.0;
    for (Index k = 0; k < report.singular_values.size(); ++k) {
        if (smax > 0 && report.singular_values[k] >= threshold * smax) {
            ++report.rank;
        }
    }
    if (!observables.empty()) {
        RealMatrix null_basis = svd.matrixV().rightCols(f.cols() - report.rank);
        for (const auto &o : observables) {
            double sq = (null_basis.transpose() * o.re).squaredNorm();
            if (o.im.size() == o.re.size()) {
                sq += (null_basis.transpose() * o.im).squaredNorm();
            }
            report.unrecoverable.push_back(std::sqrt(sq));
        }
    }
    return report;
}

RankReport rank_check(const MeasurementMap &map, double threshold, std::span<const ObservableFunctional> observables) {
    return rank_check(map.stacked(), threshold, observables);
}

RealMatrix NoiseMatrix::dense() const {
    Index total = 0;
    for (const auto &b : blocks) {
        total += b.rows();
    }
    RealMatrix out = RealMatrix::Zero(total, total);
    Index at = 0;
    for (const auto &b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

RealMatrix occupation_covariance(const ComplexMatrix &c, std::span<const int> rows) {
    auto r = static_cast<Index>(rows.size());
    RealMatrix w(r, r);
    for (Index a = 0; a < r; ++a) {
        for (Index b = 0; b < r; ++b) {
            double v = -std::norm(c(rows[a], rows[b]));
            if (a == b) {
                v += c(rows[a], rows[a]).real();
            }
            w(a, b) = v;
        }
    }
    return w;
}

NoiseMatrix noise_matrix(const QuenchEnsemble &ensemble, const CorrelationMatrix &c_anc) {
    auto props = member_propagators(ensemble);
    return noise_matrix(ensemble, props, c_anc);
}

NoiseMatrix noise_matrix(const QuenchEnsemble &ensemble,
                         std::span<const ComplexMatrix> propagators,
                         const CorrelationMatrix &c_anc) {
    ensemble.validate();
    check_ancilla_state(ensemble, c_anc);
    auto n = static_cast<Index>(ensemble.n_system());
    std::vector<int> ancillas = ensemble.ancilla_sites();
    CorrelationMatrix mixed(ComplexMatrix::Identity(n, n) * 0.5);
    CorrelationMatrix initial =
        embed_correlations(mixed, ensemble.system_sites, c_anc, ancillas, static_cast<Index>(ensemble.n_total()));
    std::vector<int> rows = all_rows(ensemble);
    NoiseMatrix out;
    out.blocks.resize(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        CorrelationMatrix cs = evolve_correlations(initial, propagators[s]);
        out.blocks[s] = ensemble.members[s].probability * occupation_covariance(cs.matrix(), rows);
    });
    return out;
}

}  // namespace gtomo
