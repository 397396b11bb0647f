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

#include "gtomo/experiment.h"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "gtomo/parallel.h"
#include "gtomo/random.h"

namespace gtomo {

namespace {

void check_compatible(const ShotDataset &dataset, const InverseBundle &bundle) {
    if (dataset.ensemble_hash != bundle.ensemble_hash) {
        throw std::invalid_argument("dataset ensemble hash " + dataset.ensemble_hash +
                                    " does not match inverse bundle " + bundle.ensemble_hash);
    }
    if (bundle.g_blocks.empty()) {
        throw std::invalid_argument("inverse bundle carries no G blocks");
    }
    for (int site : bundle.row_sites) {
        if (site < 0 || static_cast<std::size_t>(site) >= dataset.n_total) {
            throw std::invalid_argument("inverse rows reference sites outside the dataset");
        }
    }
}

struct Moments {
    double mean = 0.0;
    double stderr_ = 0.0;
};

Moments moments(const std::vector<double> &values) {
    Moments m;
    auto r = static_cast<double>(values.size());
    if (values.empty()) {
        return m;
    }
    for (double v : values) {
        m.mean += v;
    }
    m.mean /= r;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - m.mean) * (v - m.mean);
        }
        m.stderr_ = std::sqrt(ss / (r - 1.0) / r);
    }
    return m;
}

}  // namespace

std::size_t draw_member(const QuenchEnsemble &ensemble, double u) {
    double acc = 0.0;
    for (std::size_t s = 0; s < ensemble.size(); ++s) {
        acc += ensemble.members[s].probability;
        if (u < acc) {
            return s;
        }
    }
    return ensemble.size() - 1;
}

ShotDataset run_experiment(const CorrelationMatrix &c0,
                           const CorrelationMatrix &c_anc,
                           const QuenchEnsemble &ensemble,
                           std::size_t r,
                           uint64_t seed) {
    auto props = member_propagators(ensemble);
    return run_experiment(c0, c_anc, ensemble, props, r, seed);
}

ShotDataset run_experiment(const CorrelationMatrix &c0,
                           const CorrelationMatrix &c_anc,
                           const QuenchEnsemble &ensemble,
                           std::span<const ComplexMatrix> propagators,
                           std::size_t r,
                           uint64_t seed) {
    ensemble.validate();
    if (r < 1) {
        throw std::invalid_argument("experiment needs R >= 1");
    }
    if (c0.size() != static_cast<Index>(ensemble.n_system())) {
        throw std::invalid_argument("initial state does not match the system size");
    }
    if (propagators.size() != ensemble.size()) {
        throw std::invalid_argument("one propagator per ensemble member required");
    }
    std::vector<int> ancillas = ensemble.ancilla_sites();
    CorrelationMatrix initial =
        embed_correlations(c0, ensemble.system_sites, c_anc, ancillas, static_cast<Index>(ensemble.n_total()));

    ShotDataset out;
    out.ensemble_hash = ensemble_hash(ensemble);
    out.seed = seed;
    out.n_total = ensemble.n_total();
    out.records.resize(r);
    std::vector<uint8_t> used(ensemble.size(), 0);
    for (std::size_t k = 0; k < r; ++k) {
        std::mt19937_64 rng = make_stream(seed, k);
        out.records[k].member = draw_member(ensemble, uniform01(rng));
        used[out.records[k].member] = 1;
    }
    std::vector<std::optional<ComplexMatrix>> kernels(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        if (used[s]) {
            kernels[s] = evolve_correlations(initial, propagators[s]).matrix();
        }
    });
    parallel_for(r, [&](std::size_t k) {
        std::mt19937_64 rng = make_stream(seed, k);
        (void)uniform01(rng);
        out.records[k].n = sample_occupations(*kernels[out.records[k].member], rng);
    });
    return out;
}

double EstimateResult::standard_error() const {
    return std::hypot(stderr_re, stderr_im);
}

EstimateResult estimate_observable(const ShotDataset &dataset,
                                   const InverseBundle &bundle,
                                   const ObservableFunctional &o) {
    check_compatible(dataset, bundle);
    if (o.re.size() != bundle.dimension()) {
        throw std::invalid_argument("observable dimension does not match inverse bundle");
    }
    const bool cplx = !o.is_real();
    std::vector<RealVector> pull_re(bundle.g_blocks.size());
    std::vector<RealVector> pull_im(bundle.g_blocks.size());
    for (std::size_t s = 0; s < bundle.g_blocks.size(); ++s) {
        pull_re[s] = bundle.g_blocks[s].transpose() * o.re;
        if (cplx) {
            pull_im[s] = bundle.g_blocks[s].transpose() * o.im;
        }
    }
    double mu_re = o.re.dot(bundle.offset_image);
    double mu_im = cplx ? o.im.dot(bundle.offset_image) : 0.0;

    std::vector<double> re(dataset.size());
    std::vector<double> im(cplx ? dataset.size() : 0);
    for (std::size_t k = 0; k < dataset.size(); ++k) {
        const ShotRecord &rec = dataset.records[k];
        if (rec.member >= bundle.g_blocks.size()) {
            throw std::invalid_argument("dataset member index outside inverse bundle");
        }
        double vr = -mu_re;
        double vi = -mu_im;
        for (std::size_t j = 0; j < bundle.row_sites.size(); ++j) {
            if (rec.n[static_cast<std::size_t>(bundle.row_sites[j])]) {
                vr += pull_re[rec.member][static_cast<Index>(j)];
                if (cplx) {
                    vi += pull_im[rec.member][static_cast<Index>(j)];
                }
            }
        }
        re[k] = vr;
        if (cplx) {
            im[k] = vi;
        }
    }
    Moments mr = moments(re);
    Moments mi = moments(im);
    EstimateResult out;
    out.value = {mr.mean, cplx ? mi.mean : 0.0};
    out.stderr_re = mr.stderr_;
    out.stderr_im = cplx ? mi.stderr_ : 0.0;
    out.r_used = dataset.size();
    out.is_complex = cplx;
    return out;
}

CorrelationEstimate estimate_correlation_matrix(const ShotDataset &dataset, const InverseBundle &bundle) {
    check_compatible(dataset, bundle);
    if (dataset.size() == 0) {
        throw std::invalid_argument("empty dataset");
    }
    auto rows = static_cast<Index>(bundle.row_sites.size());
    std::vector<RealVector> sums(bundle.g_blocks.size(), RealVector::Zero(rows));
    for (const ShotRecord &rec : dataset.records) {
        if (rec.member >= bundle.g_blocks.size()) {
            throw std::invalid_argument("dataset member index outside inverse bundle");
        }
        for (Index j = 0; j < rows; ++j) {
            sums[rec.member][j] += rec.n[static_cast<std::size_t>(bundle.row_sites[j])];
        }
    }
    RealVector acc = RealVector::Zero(bundle.dimension());
    for (std::size_t s = 0; s < sums.size(); ++s) {
        acc += bundle.g_blocks[s] * sums[s];
    }
    CorrelationEstimate out;
    out.coordinates = acc / static_cast<double>(dataset.size()) - bundle.offset_image;
    out.matrix = vec_to_hermitian(out.coordinates);
    out.r_used = dataset.size();
    return out;
}

RealVector reconstruct_coordinates(const InverseBundle &bundle, const RealVector &z) {
    return bundle.apply(z) - bundle.offset_image;
}

RealVector expected_measurements(const MeasurementMap &map, const CorrelationMatrix &c0) {
    return map.apply(hermitian_to_vec(c0.matrix())) + map.stacked_offset();
}

}  // namespace gtomo
