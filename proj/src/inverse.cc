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

#include "gtomo/inverse.h"

#include <stdexcept>

#include "gtomo/errors.h"
#include "gtomo/parallel.h"

namespace gtomo {

namespace {

// rcond of L below which the optimal inverse is treated as singular.
constexpr double kSingularRcond = 1e-13;

struct BlockProblem {
    std::span<const RealMatrix> blocks;
    std::span<const double> weights;
    const std::vector<RealMatrix> *noise = nullptr;
    const std::vector<RealVector> *offsets = nullptr;
};

RealMatrix symmetric_from_lower(const RealMatrix &lower) {
    RealMatrix full = lower.selfadjointView<Eigen::Lower>();
    return full;
}

InverseBundle solve_blocks(const BlockProblem &problem,
                           InverseMethod method,
                           double delta,
                           double w_floor,
                           bool keep_blocks) {
    const std::size_t count = problem.blocks.size();
    if (count == 0) {
        throw std::invalid_argument("inverse needs at least one block");
    }
    if (method == InverseMethod::Optimal && problem.noise == nullptr) {
        throw std::invalid_argument("optimal inverse needs a noise matrix");
    }
    if (problem.noise != nullptr && problem.noise->size() != count) {
        throw std::invalid_argument("noise blocks do not match map blocks");
    }
    const Index dim = problem.blocks[0].cols();
    for (const auto &b : problem.blocks) {
        if (b.cols() != dim) {
            throw std::invalid_argument("map blocks disagree on column count");
        }
    }

    // A_s = W~_s^-1 (p_s F_s) for the optimal inverse, p_s F_s otherwise.
    // `half` holds the Cholesky-whitened block whose Gram gives L.
    std::vector<RealMatrix> a(count);
    std::vector<RealMatrix> half(count);
    parallel_for(count, [&](std::size_t s) {
        RealMatrix b = problem.weights[s] * problem.blocks[s];
        if (method == InverseMethod::Optimal) {
            RealMatrix wt = (*problem.noise)[s];
            wt.diagonal().array() += w_floor;
            Eigen::LLT<RealMatrix> llt(wt);
            if (llt.info() != Eigen::Success) {
                throw NumericalError("noise block is not positive definite; raise w_floor");
            }
            half[s] = llt.matrixL().solve(b);
            a[s] = llt.matrixU().solve(half[s]);
        } else {
            a[s] = std::move(b);
        }
    });

    InverseBundle out;
    out.method = method;
    out.delta = method == InverseMethod::Pseudo ? delta : 0.0;
    out.w_floor = method == InverseMethod::Optimal ? w_floor : 0.0;

    RealMatrix gram = RealMatrix::Zero(dim, dim);
    for (std::size_t s = 0; s < count; ++s) {
        const RealMatrix &h = method == InverseMethod::Optimal ? half[s] : a[s];
        gram.selfadjointView<Eigen::Lower>().rankUpdate(h.transpose());
        half[s].resize(0, 0);
    }
    out.gram = symmetric_from_lower(gram);

    if (method == InverseMethod::Optimal) {
        Eigen::LLT<RealMatrix> llt(out.gram);
        if (llt.info() != Eigen::Success || llt.rcond() < kSingularRcond) {
            Eigen::SelfAdjointEigenSolver<RealMatrix> es(out.gram, Eigen::EigenvaluesOnly);
            const RealVector &ev = es.eigenvalues();
            double top = ev.size() > 0 ? ev.maxCoeff() : 0.0;
            Index rank = 0;
            for (Index k = 0; k < ev.size(); ++k) {
                rank += ev[k] > kSingularRcond * top ? 1 : 0;
            }
            throw RankDeficientError("Gram matrix of the measurement map is singular", rank, dim);
        }
        out.gram_inverse = llt.solve(RealMatrix::Identity(dim, dim));
        out.gram_inverse = 0.5 * (out.gram_inverse + out.gram_inverse.transpose()).eval();
        out.retained_basis = RealMatrix::Identity(dim, dim);
    } else {
        if (!(delta > 0.0 && delta <= 1.0)) {
            throw std::invalid_argument("truncation threshold delta must lie in (0, 1]");
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(out.gram);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eigensolver failed on Gram matrix");
        }
        const RealVector &ev = es.eigenvalues();
        double cut = delta * delta * ev.maxCoeff();
        std::vector<Index> keep;
        for (Index k = 0; k < ev.size(); ++k) {
            if (ev[k] > 0.0 && ev[k] >= cut) {
                keep.push_back(k);
            }
        }
        auto r = static_cast<Index>(keep.size());
        out.retained_basis.resize(dim, r);
        RealMatrix scaled(dim, r);
        for (Index k = 0; k < r; ++k) {
            out.retained_basis.col(k) = es.eigenvectors().col(keep[k]);
            scaled.col(k) = out.retained_basis.col(k) / ev[keep[k]];
        }
        out.gram_inverse = scaled * out.retained_basis.transpose();
    }

    if (problem.noise != nullptr) {
        RealMatrix nq = RealMatrix::Zero(dim, dim);
        for (std::size_t s = 0; s < count; ++s) {
            Eigen::SelfAdjointEigenSolver<RealMatrix> es((*problem.noise)[s]);
            RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            RealMatrix ra = root.asDiagonal() * (es.eigenvectors().transpose() * a[s]);
            nq.selfadjointView<Eigen::Lower>().rankUpdate(ra.transpose());
        }
        nq = symmetric_from_lower(nq);
        out.covariance = out.gram_inverse * nq * out.gram_inverse;
        out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    }

    RealVector pulled = RealVector::Zero(dim);
    if (problem.offsets != nullptr) {
        for (std::size_t s = 0; s < count; ++s) {
            pulled += a[s].transpose() * (problem.weights[s] * (*problem.offsets)[s]);
        }
    }
    out.offset_image = out.gram_inverse * pulled;

    if (keep_blocks) {
        out.g_blocks.resize(count);
        parallel_for(count, [&](std::size_t s) { out.g_blocks[s] = out.gram_inverse * a[s].transpose(); });
    }
    return out;
}

InverseBundle solve_map(const MeasurementMap &map,
                        InverseMethod method,
                        double delta,
                        const NoiseMatrix *noise,
                        const InverseOptions &options) {
    BlockProblem problem{map.blocks, map.probabilities, noise ? &noise->blocks : nullptr, &map.offsets};
    InverseBundle out = solve_blocks(problem, method, delta, options.w_floor, options.keep_blocks);
    out.row_sites = map.row_sites;
    out.column_sites = map.column_sites;
    out.ensemble_hash = map.ensemble_hash;
    return out;
}

}  // namespace

std::string to_string(InverseMethod method) {
    return method == InverseMethod::Optimal ? "optimal" : "pseudo";
}

RealMatrix InverseBundle::left_inverse() const {
    if (g_blocks.empty()) {
        throw std::logic_error("inverse blocks were not stored");
    }
    Index total = 0;
    for (const auto &g : g_blocks) {
        total += g.cols();
    }
    RealMatrix out(dimension(), total);
    Index at = 0;
    for (const auto &g : g_blocks) {
        out.middleCols(at, g.cols()) = g;
        at += g.cols();
    }
    return out;
}

RealMatrix InverseBundle::retained_projector() const {
    return retained_basis * retained_basis.transpose();
}

RealVector InverseBundle::apply(const RealVector &z) const {
    if (g_blocks.empty()) {
        throw std::logic_error("inverse blocks were not stored");
    }
    RealVector out = RealVector::Zero(dimension());
    Index at = 0;
    for (const auto &g : g_blocks) {
        if (at + g.cols() > z.size()) {
            throw std::invalid_argument("measurement vector too short for inverse");
        }
        out += g * z.segment(at, g.cols());
        at += g.cols();
    }
    if (at != z.size()) {
        throw std::invalid_argument("measurement vector length does not match inverse");
    }
    return out;
}

InverseBundle optimal_inverse(const MeasurementMap &map, const NoiseMatrix &noise, const InverseOptions &options) {
    return solve_map(map, InverseMethod::Optimal, 0.0, &noise, options);
}

InverseBundle optimal_inverse(const RealMatrix &f, const RealMatrix &w, double w_floor) {
    std::vector<RealMatrix> blocks{f};
    std::vector<double> weights{1.0};
    std::vector<RealMatrix> noise{w};
    return solve_blocks({blocks, weights, &noise, nullptr}, InverseMethod::Optimal, 0.0, w_floor, true);
}

InverseBundle pseudo_inverse(const MeasurementMap &map,
                             double delta,
                             const NoiseMatrix *noise,
                             const InverseOptions &options) {
    return solve_map(map, InverseMethod::Pseudo, delta, noise, options);
}

InverseBundle pseudo_inverse(const RealMatrix &f, double delta, const RealMatrix *w) {
    std::vector<RealMatrix> blocks{f};
    std::vector<double> weights{1.0};
    std::vector<RealMatrix> noise;
    if (w != nullptr) {
        noise.push_back(*w);
    }
    return solve_blocks(
        {blocks, weights, w ? &noise : nullptr, nullptr}, InverseMethod::Pseudo, delta, 0.0, true);
}

InverseBundle block_inverse(std::span<const RealMatrix> blocks,
                            std::span<const double> weights,
                            InverseMethod method,
                            double delta,
                            const std::vector<RealMatrix> *noise,
                            const InverseOptions &options) {
    if (weights.size() != blocks.size()) {
        throw std::invalid_argument("one weight per block required");
    }
    return solve_blocks({blocks, weights, noise, nullptr}, method, delta, options.w_floor, options.keep_blocks);
}

LocalizedInverse truncated_local_map(const QuenchEnsemble &ensemble, int target, int ell_in, int ell_out, double delta) {
    ensemble.validate();
    if (ensemble.n_system() != ensemble.n_total()) {
        throw std::invalid_argument("truncated local map does not support ancilla sites");
    }
    if (!ensemble.lattice.contains(target) || ell_in < 0 || ell_out < 0) {
        throw std::invalid_argument("truncated local map needs a lattice target and non-negative radii");
    }
    LocalizedInverse out;
    out.inner_sites = chebyshev_patch(ensemble.lattice, target, ell_in);
    out.outer_sites = chebyshev_patch(ensemble.lattice, target, ell_out);
    auto inner = static_cast<Index>(out.inner_sites.size());
    auto rows = static_cast<Index>(out.outer_sites.size() * ensemble.size());
    if (rows < inner * inner) {
        throw RankDeficientError("localized map has fewer rows than inner-patch slots", rows, inner * inner);
    }
    auto props = member_propagator_rows(ensemble, out.outer_sites);
    MeasurementMap map;
    map.row_sites = out.outer_sites;
    map.column_sites = out.inner_sites;
    map.ensemble_hash = ensemble_hash(ensemble);
    map.probabilities.resize(ensemble.size());
    map.blocks.resize(ensemble.size());
    map.offsets.assign(ensemble.size(), RealVector::Zero(static_cast<Index>(out.outer_sites.size())));
    NoiseMatrix noise;
    noise.blocks.resize(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        double p = ensemble.members[s].probability;
        map.probabilities[s] = p;
        map.blocks[s] = system_forward_block(props[s], out.inner_sites);
        // Maximally mixed system without ancillas stays maximally mixed.
        noise.blocks[s] = RealMatrix::Identity(props[s].rows(), props[s].rows()) * (0.25 * p);
    });
    out.bundle = pseudo_inverse(map, delta, &noise);
    return out;
}

}  // namespace gtomo
