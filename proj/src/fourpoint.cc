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

#include <cmath>
#include <stdexcept>

#include "gtomo/errors.h"
#include "gtomo/measurement_map.h"
#include "gtomo/parallel.h"

namespace gtomo {

namespace {

Index sites_from_full(Index dim) {
    Index n = 0;
    while (full_dimension(n) < dim) {
        ++n;
    }
    if (full_dimension(n) != dim) {
        throw std::invalid_argument("vector length is not N^2 + N^4");
    }
    return n;
}

Index sites_from_reduced(Index dim) {
    Index n = 0;
    while (reduced_dimension(n) < dim) {
        ++n;
    }
    if (reduced_dimension(n) != dim) {
        throw std::invalid_argument("vector length is not a reduced four-point dimension");
    }
    return n;
}

// <c^dag_i c^dag_k c_j c_l> = sign * Gamma_{alpha beta} with alpha = {i, k}, beta = {j, l}.
struct GammaRef {
    Index alpha = 0;
    Index beta = 0;
    double sign = 0.0;
};

GammaRef gamma_ref(Index n, Index i, Index j, Index k, Index l) {
    if (i == k || j == l) {
        return {0, 0, 0.0};
    }
    double sign = (i < k ? -1.0 : 1.0) * (j < l ? 1.0 : -1.0);
    return {pair_index(n, std::min(i, k), std::max(i, k)), pair_index(n, std::min(j, l), std::max(j, l)), sign};
}

ObservableFunctional concat(const ObservableFunctional &a, const ObservableFunctional &b) {
    ObservableFunctional out;
    out.re.resize(a.re.size() + b.re.size());
    out.im.resize(a.re.size() + b.re.size());
    out.re << a.re, b.re;
    out.im << a.im, b.im;
    return out;
}

}  // namespace

Index pair_count(Index n) {
    return n * (n - 1) / 2;
}

Index full_dimension(Index n) {
    return n * n + n * n * n * n;
}

Index reduced_dimension(Index n) {
    Index m = pair_count(n);
    return n * n + m * m;
}

Index full_index(Index n, Index i, Index j, Index k, Index l) {
    return n * n + ((i * n + j) * n + k) * n + l;
}

ComplexMatrix u4_map(const ComplexMatrix &u, int max_sites) {
    Index n = u.rows();
    if (u.cols() != n) {
        throw std::invalid_argument("u4_map needs a square unitary");
    }
    if (n > max_sites) {
        throw ResourceError("four-point map limited to " + std::to_string(max_sites) + " sites");
    }
    Index n2 = n * n;
    ComplexMatrix k2(n2, n2);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index a = 0; a < n; ++a) {
                for (Index b = 0; b < n; ++b) {
                    k2(i * n + j, a * n + b) = std::conj(u(i, a)) * u(j, b);
                }
            }
        }
    }
    // Two-point and four-point blocks transform separately.
    ComplexMatrix out = ComplexMatrix::Zero(n2 + n2 * n2, n2 + n2 * n2);
    out.topLeftCorner(n2, n2) = k2;
    for (Index r1 = 0; r1 < n2; ++r1) {
        for (Index c1 = 0; c1 < n2; ++c1) {
            std::complex<double> w = k2(r1, c1);
            if (w == 0.0) {
                continue;
            }
            out.block(n2 + r1 * n2, n2 + c1 * n2, n2, n2) = w * k2;
        }
    }
    return out;
}

ComplexMatrix pair_unitary(const ComplexMatrix &u) {
    Index n = u.rows();
    Index m = pair_count(n);
    ComplexMatrix out(m, m);
    for (Index j = 0; j < n; ++j) {
        for (Index l = j + 1; l < n; ++l) {
            Index row = pair_index(n, j, l);
            for (Index b = 0; b < n; ++b) {
                for (Index d = b + 1; d < n; ++d) {
                    out(row, pair_index(n, b, d)) = u(j, b) * u(l, d) - u(j, d) * u(l, b);
                }
            }
        }
    }
    return out;
}

RealVector reduce_fourpoint(const ComplexVector &full) {
    Index n = sites_from_full(full.size());
    Index m = pair_count(n);
    ComplexMatrix c(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            c(i, j) = full[i * n + j];
        }
    }
    // Gamma_{(I,K),(J,L)} = <c^dag_K c^dag_I c_J c_L> = delta_JI C_KL - D'_KJIL.
    ComplexMatrix gamma(m, m);
    for (Index ii = 0; ii < n; ++ii) {
        for (Index kk = ii + 1; kk < n; ++kk) {
            for (Index jj = 0; jj < n; ++jj) {
                for (Index ll = jj + 1; ll < n; ++ll) {
                    std::complex<double> v = -full[full_index(n, kk, jj, ii, ll)];
                    if (jj == ii) {
                        v += c(kk, ll);
                    }
                    gamma(pair_index(n, ii, kk), pair_index(n, jj, ll)) = v;
                }
            }
        }
    }
    RealVector out(reduced_dimension(n));
    out << hermitian_to_vec(c, 1e-8), hermitian_to_vec(gamma, 1e-8);
    return out;
}

ComplexVector expand_fourpoint(const RealVector &reduced) {
    Index n = sites_from_reduced(reduced.size());
    Index m = pair_count(n);
    ComplexMatrix c = vec_to_hermitian(reduced.head(n * n));
    ComplexMatrix gamma = vec_to_hermitian(reduced.tail(m * m));
    ComplexVector out(full_dimension(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out[i * n + j] = c(i, j);
        }
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = 0; k < n; ++k) {
                for (Index l = 0; l < n; ++l) {
                    std::complex<double> v = j == k ? c(i, l) : 0.0;
                    GammaRef g = gamma_ref(n, i, j, k, l);
                    if (g.sign != 0.0) {
                        v -= g.sign * gamma(g.alpha, g.beta);
                    }
                    out[full_index(n, i, j, k, l)] = v;
                }
            }
        }
    }
    return out;
}

RealVector transport_reduced(const ComplexMatrix &u, const RealVector &reduced) {
    Index n = u.rows();
    Index m = pair_count(n);
    if (reduced.size() != reduced_dimension(n)) {
        throw std::invalid_argument("reduced vector does not match unitary size");
    }
    ComplexMatrix c = vec_to_hermitian(reduced.head(n * n));
    ComplexMatrix gamma = vec_to_hermitian(reduced.tail(m * m));
    ComplexMatrix u2 = pair_unitary(u);
    RealVector out(reduced.size());
    out << hermitian_to_vec(evolve_correlations(CorrelationMatrix(c), u).matrix()),
        hermitian_to_vec(evolve_correlations(CorrelationMatrix(gamma), u2).matrix());
    return out;
}

ComplexVector gaussian_fourpoint(const ComplexMatrix &c) {
    Index n = c.rows();
    ComplexVector out(full_dimension(n));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out[i * n + j] = c(i, j);
            for (Index k = 0; k < n; ++k) {
                for (Index l = 0; l < n; ++l) {
                    std::complex<double> v = c(i, j) * c(k, l) - c(i, l) * c(k, j);
                    if (j == k) {
                        v += c(i, l);
                    }
                    out[full_index(n, i, j, k, l)] = v;
                }
            }
        }
    }
    return out;
}

RealVector quartic_measurement_vector(std::span<const uint8_t> n) {
    auto sites = static_cast<Index>(n.size());
    RealVector out(sites + pair_count(sites));
    for (Index i = 0; i < sites; ++i) {
        out[i] = n[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    Index at = sites;
    for (Index i = 0; i < sites; ++i) {
        for (Index k = i + 1; k < sites; ++k) {
            out[at++] = (n[static_cast<std::size_t>(i)] && n[static_cast<std::size_t>(k)]) ? 1.0 : 0.0;
        }
    }
    return out;
}

RealMatrix b_map(Index n) {
    RealMatrix b = RealMatrix::Zero(n + pair_count(n), full_dimension(n));
    for (Index j = 0; j < n; ++j) {
        b(j, j * n + j) = 1.0;
    }
    Index row = n;
    for (Index j = 0; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
            b(row++, full_index(n, j, j, k, k)) = 1.0;
        }
    }
    return b;
}

RealMatrix forward_block_4(const ComplexMatrix &u) {
    Index n = u.rows();
    Index m = pair_count(n);
    std::vector<int> sites(static_cast<std::size_t>(n));
    std::vector<int> pairs(static_cast<std::size_t>(m));
    for (Index i = 0; i < n; ++i) {
        sites[static_cast<std::size_t>(i)] = static_cast<int>(i);
    }
    for (Index p = 0; p < m; ++p) {
        pairs[static_cast<std::size_t>(p)] = static_cast<int>(p);
    }
    RealMatrix out = RealMatrix::Zero(n + m, reduced_dimension(n));
    out.topLeftCorner(n, n * n) = system_forward_block(u, sites);
    if (m > 0) {
        out.bottomRightCorner(m, m * m) = system_forward_block(pair_unitary(u), pairs);
    }
    return out;
}

FourPointBundle forward_map_4(const QuenchEnsemble &ensemble, double delta, int max_sites) {
    ensemble.validate();
    if (ensemble.n_system() != ensemble.n_total()) {
        throw std::invalid_argument("four-point estimation does not support ancilla sites");
    }
    auto n = static_cast<Index>(ensemble.n_total());
    if (n > max_sites) {
        throw ResourceError("four-point map limited to " + std::to_string(max_sites) + " sites");
    }
    Index rows = static_cast<Index>(ensemble.size()) * (n + pair_count(n));
    if (rows < reduced_dimension(n)) {
        throw RankDeficientError("four-point map has fewer rows than unknowns", rows, reduced_dimension(n));
    }
    auto props = member_propagators(ensemble);
    FourPointBundle out;
    out.sites = n;
    out.blocks.resize(ensemble.size());
    out.probabilities.resize(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        out.blocks[s] = forward_block_4(props[s]);
        out.probabilities[s] = ensemble.members[s].probability;
    });
    out.inverse = block_inverse(out.blocks, out.probabilities, InverseMethod::Pseudo, delta);
    out.inverse.ensemble_hash = ensemble_hash(ensemble);
    out.inverse.offset_image = RealVector::Zero(reduced_dimension(n));
    return out;
}

ObservableFunctional two_point_functional(Index n, Index i, Index j) {
    Index m = pair_count(n);
    ObservableFunctional zero{RealVector::Zero(m * m), RealVector::Zero(m * m)};
    return concat(matrix_element_functional(n, i, j), zero);
}

ObservableFunctional fourpoint_element_functional(Index n, Index i, Index j, Index k, Index l) {
    Index m = pair_count(n);
    ObservableFunctional two{RealVector::Zero(n * n), RealVector::Zero(n * n)};
    if (j == k) {
        two = matrix_element_functional(n, i, l);
    }
    ObservableFunctional four{RealVector::Zero(m * m), RealVector::Zero(m * m)};
    GammaRef g = gamma_ref(n, i, j, k, l);
    if (g.sign != 0.0) {
        ObservableFunctional e = matrix_element_functional(m, g.alpha, g.beta);
        four.re = -g.sign * e.re;
        four.im = -g.sign * e.im;
    }
    return concat(two, four);
}

ObservableFunctional density_density_functional(Index n, Index j, Index jp) {
    return fourpoint_element_functional(n, j, j, jp, jp);
}

EstimateResult estimate_fourpoint(const ShotDataset &dataset,
                                  const FourPointBundle &bundle,
                                  const ObservableFunctional &o) {
    if (dataset.ensemble_hash != bundle.inverse.ensemble_hash) {
        throw std::invalid_argument("dataset ensemble hash does not match four-point bundle");
    }
    if (dataset.n_total != static_cast<std::size_t>(bundle.sites)) {
        throw std::invalid_argument("dataset size does not match four-point bundle");
    }
    if (o.re.size() != bundle.inverse.dimension()) {
        throw std::invalid_argument("observable dimension does not match four-point bundle");
    }
    // Quartic vectors form a dataset whose rows are the quartic entries.
    ShotDataset quartic;
    quartic.ensemble_hash = dataset.ensemble_hash;
    quartic.seed = dataset.seed;
    Index rows = bundle.sites + pair_count(bundle.sites);
    quartic.n_total = static_cast<std::size_t>(rows);
    quartic.records.reserve(dataset.size());
    for (const ShotRecord &rec : dataset.records) {
        RealVector q = quartic_measurement_vector(rec.n);
        Occupations packed(static_cast<std::size_t>(rows));
        for (Index i = 0; i < rows; ++i) {
            packed[static_cast<std::size_t>(i)] = q[i] != 0.0 ? 1 : 0;
        }
        quartic.records.push_back({rec.member, std::move(packed)});
    }
    InverseBundle view = bundle.inverse;
    view.row_sites.resize(static_cast<std::size_t>(rows));
    for (Index i = 0; i < rows; ++i) {
        view.row_sites[static_cast<std::size_t>(i)] = static_cast<int>(i);
    }
    return estimate_observable(quartic, view, o);
}

RealVector reconstruct_fourpoint(const FourPointBundle &bundle, std::span<const RealVector> expected) {
    if (expected.size() != bundle.blocks.size()) {
        throw std::invalid_argument("one expectation vector per member required");
    }
    RealVector out = RealVector::Zero(bundle.inverse.dimension());
    for (std::size_t s = 0; s < expected.size(); ++s) {
        out += bundle.inverse.g_blocks[s] * (bundle.probabilities[s] * expected[s]);
    }
    return out;
}

}  // namespace gtomo
