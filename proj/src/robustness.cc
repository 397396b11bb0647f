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

#include "gtomo/robustness.h"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "gtomo/errors.h"
#include "gtomo/inverse.h"
#include "gtomo/measurement_map.h"
#include "gtomo/parallel.h"
#include "gtomo/random.h"

namespace gtomo {

namespace {

double largest_singular_value(const RealMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    // The smaller Gram side keeps the eigenproblem small.
    RealMatrix gram = m.rows() <= m.cols() ? RealMatrix(m * m.transpose()) : RealMatrix(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

uint64_t trial_stream(std::size_t size_index, std::size_t nu_index, int trial) {
    return (static_cast<uint64_t>(size_index) << 40) | (static_cast<uint64_t>(nu_index) << 24) |
           static_cast<uint64_t>(trial);
}

struct ComboResult {
    double h = 0.0;
    double phi = 0.0;
    // Indexed by nu.
    std::vector<double> max_metric;
    std::vector<double> mean_metric;
};

void check_config(const RobustnessConfig &config) {
    if (config.trials < 1) {
        throw std::invalid_argument("robustness sweep needs trials >= 1");
    }
    if (config.sizes.empty() || config.nus.empty()) {
        throw std::invalid_argument("robustness sweep needs sizes and disorder strengths");
    }
    for (double nu : config.nus) {
        if (!(nu >= 0.0)) {
            throw std::invalid_argument("disorder variance must be non-negative");
        }
    }
}

RealVector trial_disorder(const RobustnessConfig &config, std::size_t size_index, std::size_t nu_index, int trial,
                          std::size_t sites) {
    std::mt19937_64 rng = make_stream(config.seed, trial_stream(size_index, nu_index, trial));
    return draw_disorder(sites, config.nus[nu_index], rng);
}

ComboResult sweep_local(const RobustnessConfig &config, std::size_t size_index, std::vector<RobustnessRow> &rows) {
    int n = config.sizes[size_index];
    Lattice lattice = config.local_lattice == LatticeKind::Chain ? build_lattice(LatticeKind::Chain, n, 1)
                                                                  : build_lattice(LatticeKind::Grid, n, n);
    QuenchEnsemble ensemble = local_scheme_ensemble(lattice, config.local);
    auto props = member_propagators(ensemble);
    MeasurementMap map = stack_forward(ensemble, props, empty_ancillas(ensemble));
    InverseOptions opts;
    opts.keep_blocks = false;
    InverseBundle bundle = pseudo_inverse(map, config.local.delta, nullptr, opts);

    // Slots touched by any patch, and each patch's positions within that list.
    auto nsites = static_cast<Index>(lattice.size());
    std::set<Index> union_slots;
    std::vector<std::vector<Index>> patch_slots;
    for (Index c = 0; c < nsites; ++c) {
        std::vector<int> patch = chebyshev_patch(lattice, static_cast<int>(c), config.patch_radius);
        patch_slots.push_back(slots_supported_on(nsites, patch));
        union_slots.insert(patch_slots.back().begin(), patch_slots.back().end());
    }
    std::vector<Index> slot_rows(union_slots.begin(), union_slots.end());
    std::map<Index, Index> position;
    for (std::size_t i = 0; i < slot_rows.size(); ++i) {
        position[slot_rows[i]] = static_cast<Index>(i);
    }
    auto k = static_cast<Index>(slot_rows.size());
    RealMatrix k_rows(k, bundle.dimension());
    for (Index i = 0; i < k; ++i) {
        k_rows.row(i) = bundle.gram_inverse.row(slot_rows[static_cast<std::size_t>(i)]);
    }
    std::vector<RealMatrix> h_blocks(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        double p = map.probabilities[s];
        h_blocks[s] = (p * p) * (k_rows * map.blocks[s].transpose());
    });
    map.blocks.clear();

    ComboResult out;
    for (std::size_t v = 0; v < config.nus.size(); ++v) {
        double worst = 0.0;
        double total = 0.0;
        for (int trial = 0; trial < config.trials; ++trial) {
            RealVector xi = trial_disorder(config, size_index, v, trial, ensemble.n_total());
            auto err_props = member_propagators(ensemble, std::span<const double>(xi.data(), xi.size()));
            RealMatrix acc = RealMatrix::Zero(k, bundle.dimension());
            for (std::size_t s = 0; s < ensemble.size(); ++s) {
                acc.noalias() += h_blocks[s] * system_forward_block(err_props[s], ensemble.system_sites);
            }
            for (Index i = 0; i < k; ++i) {
                acc(i, slot_rows[static_cast<std::size_t>(i)]) -= 1.0;
            }
            RealMatrix dv = acc * bundle.retained_basis;
            double metric = 0.0;
            for (const auto &slots : patch_slots) {
                RealMatrix sub(static_cast<Index>(slots.size()), dv.cols());
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    sub.row(static_cast<Index>(i)) = dv.row(position[slots[i]]);
                }
                metric = std::max(metric, largest_singular_value(sub));
            }
            double radius = std::numeric_limits<double>::quiet_NaN();
            rows.push_back({n, config.nus[v], trial, 0.0, 0.0, metric, radius});
            worst = std::max(worst, metric);
            total += metric;
        }
        out.max_metric.push_back(worst);
        out.mean_metric.push_back(total / config.trials);
    }
    return out;
}

std::vector<ComboResult> sweep_global(const RobustnessConfig &config,
                                      std::size_t size_index,
                                      std::vector<RobustnessRow> &rows,
                                      std::vector<std::pair<double, double>> &skipped) {
    int n = config.sizes[size_index];
    std::vector<ComboResult> out;
    for (double h : config.h_grid) {
        for (double phi : config.phi_grid) {
            GlobalSchemeParams params = config.global;
            params.h = h;
            params.phi = phi;
            QuenchEnsemble ensemble = global_scheme_ensemble(n, params);
            auto props = member_propagators(ensemble);
            CorrelationMatrix c_anc = empty_ancillas(ensemble);
            MeasurementMap map = stack_forward(ensemble, props, c_anc);
            NoiseMatrix noise = noise_matrix(ensemble, props, c_anc);
            InverseOptions opts;
            opts.w_floor = config.w_floor;
            InverseBundle bundle;
            try {
                bundle = optimal_inverse(map, noise, opts);
            } catch (const RankDeficientError &) {
                skipped.emplace_back(h, phi);
                continue;
            }
            const RealMatrix &g = bundle.g_blocks[0];
            RealMatrix hamiltonian = build_hamiltonian(ensemble.lattice, h, phi, params.theta_l).matrix;
            double t = ensemble.members[0].params.t;
            ComboResult combo{h, phi, {}, {}};
            for (std::size_t v = 0; v < config.nus.size(); ++v) {
                double worst = 0.0;
                double total = 0.0;
                for (int trial = 0; trial < config.trials; ++trial) {
                    RealVector xi = trial_disorder(config, size_index, v, trial, ensemble.n_total());
                    RealMatrix herr = hamiltonian;
                    herr.diagonal() += xi;
                    ComplexMatrix u = propagator(herr, t);
                    RealMatrix dev = bias_deviation(g, system_forward_block(u, ensemble.system_sites));
                    double metric = bias_metric(dev, bundle.retained_basis);
                    double radius = config.spectral_radius ? bias_spectral_radius(dev, bundle.retained_basis)
                                                           : std::numeric_limits<double>::quiet_NaN();
                    rows.push_back({n, config.nus[v], trial, h, phi, metric, radius});
                    worst = std::max(worst, metric);
                    total += metric;
                }
                combo.max_metric.push_back(worst);
                combo.mean_metric.push_back(total / config.trials);
            }
            out.push_back(std::move(combo));
        }
    }
    if (out.empty()) {
        throw RankDeficientError("every (h, phi) combination gave a singular map", 0, static_cast<Index>(n) * n);
    }
    return out;
}

}  // namespace

RealVector draw_disorder(std::size_t n, double nu, std::mt19937_64 &rng) {
    if (!(nu >= 0.0)) {
        throw std::invalid_argument("disorder variance must be non-negative");
    }
    RealVector xi(static_cast<Index>(n));
    double sd = std::sqrt(nu);
    for (Index i = 0; i < xi.size(); ++i) {
        xi[i] = sd * standard_normal(rng);
    }
    return xi;
}

RealMatrix perturb_hamiltonian(const RealMatrix &h, double nu, std::mt19937_64 &rng) {
    RealMatrix out = h;
    out.diagonal() += draw_disorder(static_cast<std::size_t>(h.rows()), nu, rng);
    return out;
}

RealMatrix bias_deviation(const RealMatrix &g, const RealMatrix &f_err) {
    if (g.cols() != f_err.rows() || g.rows() != f_err.cols()) {
        throw std::invalid_argument("bias_deviation: shapes do not conform");
    }
    RealMatrix dev = g * f_err;
    dev.diagonal().array() -= 1.0;
    return dev;
}

double bias_metric(const RealMatrix &deviation, const RealMatrix &retained_basis, std::span<const Index> rows) {
    RealMatrix dv = deviation * retained_basis;
    if (rows.empty()) {
        return largest_singular_value(dv);
    }
    RealMatrix sub(static_cast<Index>(rows.size()), dv.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sub.row(static_cast<Index>(i)) = dv.row(rows[i]);
    }
    return largest_singular_value(sub);
}

double bias_spectral_radius(const RealMatrix &deviation, const RealMatrix &retained_basis) {
    RealMatrix core = retained_basis.transpose() * deviation * retained_basis;
    if (core.size() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<RealMatrix> es(core, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string to_string(SchemeKind kind) {
    return kind == SchemeKind::Local ? "local" : "global";
}

RobustnessSweep robustness_sweep(const RobustnessConfig &config) {
    check_config(config);
    RobustnessSweep sweep;
    sweep.scheme = config.scheme;
    for (std::size_t i = 0; i < config.sizes.size(); ++i) {
        int n = config.sizes[i];
        std::vector<ComboResult> combos;
        if (config.scheme == SchemeKind::Local) {
            combos.push_back(sweep_local(config, i, sweep.rows));
        } else {
            combos = sweep_global(config, i, sweep.rows, sweep.skipped);
        }
        for (std::size_t v = 0; v < config.nus.size(); ++v) {
            const ComboResult *best = &combos[0];
            for (const auto &c : combos) {
                if (c.max_metric[v] < best->max_metric[v]) {
                    best = &c;
                }
            }
            sweep.best_per_nu.push_back(
                {n, config.nus[v], best->h, best->phi, best->max_metric[v], best->mean_metric[v]});
        }
        const ComboResult *overall = &combos[0];
        double overall_score = std::numeric_limits<double>::infinity();
        for (const auto &c : combos) {
            double score = 0.0;
            for (double m : c.max_metric) {
                score += m;
            }
            if (score < overall_score) {
                overall_score = score;
                overall = &c;
            }
        }
        for (std::size_t v = 0; v < config.nus.size(); ++v) {
            sweep.best_overall.push_back(
                {n, config.nus[v], overall->h, overall->phi, overall->max_metric[v], overall->mean_metric[v]});
        }
    }
    return sweep;
}

nlohmann::json summary_json(const RobustnessSweep &sweep) {
    auto points = [](const std::vector<RobustnessPoint> &list) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &p : list) {
            arr.push_back({{"N", p.n},
                           {"nu", p.nu},
                           {"h", p.h},
                           {"phi", p.phi},
                           {"max_metric", p.max_metric},
                           {"mean_metric", p.mean_metric}});
        }
        return arr;
    };
    nlohmann::json skipped = nlohmann::json::array();
    for (auto [h, phi] : sweep.skipped) {
        skipped.push_back({{"h", h}, {"phi", phi}});
    }
    return {{"scheme", to_string(sweep.scheme)},
            {"best_per_nu", points(sweep.best_per_nu)},
            {"best_overall", points(sweep.best_overall)},
            {"skipped_rank_deficient", skipped}};
}

}  // namespace gtomo
