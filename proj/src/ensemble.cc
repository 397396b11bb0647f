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

#include "gtomo/ensemble.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "gtomo/parallel.h"
#include "gtomo/random.h"

namespace gtomo {

std::vector<int> QuenchEnsemble::ancilla_sites() const {
    return complement_sites(lattice, system_sites);
}

void QuenchEnsemble::validate() const {
    if (members.empty()) {
        throw std::invalid_argument("ensemble has no members");
    }
    if (system_sites.empty()) {
        throw std::invalid_argument("ensemble has no system sites");
    }
    for (int s : system_sites) {
        if (!lattice.contains(s)) {
            throw std::invalid_argument("system site outside lattice");
        }
    }
    double total = 0.0;
    for (const auto &m : members) {
        if (!(m.probability > 0.0)) {
            throw std::invalid_argument("ensemble probabilities must be positive");
        }
        if (!(m.params.t > 0.0) || !(m.params.h >= 0.0)) {
            throw std::invalid_argument("quench parameters need t > 0 and h >= 0");
        }
        total += m.probability;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("ensemble probabilities must sum to 1");
    }
}

QuenchEnsemble sample_local_ensemble(const Lattice &lattice,
                                     std::size_t s,
                                     double t_max,
                                     double h_max,
                                     double theta_l,
                                     int grid_points,
                                     uint64_t seed) {
    if (s < 1 || !(t_max > 0) || !(h_max > 0) || grid_points < 1) {
        throw std::invalid_argument("local ensemble needs S >= 1, t_max > 0, h_max > 0, grid_points >= 1");
    }
    QuenchEnsemble out;
    out.lattice = lattice;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        out.system_sites.push_back(static_cast<int>(i));
    }
    std::mt19937_64 rng = make_stream(seed, 0);
    const double g = grid_points;
    for (std::size_t k = 0; k < s; ++k) {
        auto it = uniform_index(rng, grid_points) + 1;
        auto ih = uniform_index(rng, grid_points) + 1;
        auto ip = uniform_index(rng, grid_points) + 1;
        QuenchParams p{t_max * static_cast<double>(it) / g,
                       h_max * static_cast<double>(ih) / g,
                       2.0 * std::numbers::pi * static_cast<double>(ip) / g,
                       theta_l};
        out.members.push_back({1.0 / static_cast<double>(s), p});
    }
    return out;
}

QuenchEnsemble global_scheme_ensemble(int n, const GlobalSchemeParams &params) {
    ExpansionLayout layout = expansion_layout(n, params.system_row);
    QuenchEnsemble out;
    out.lattice = layout.lattice;
    out.system_sites = layout.system_sites;
    out.members.push_back({1.0, {params.time_factor * n, params.h, params.phi, params.theta_l}});
    return out;
}

namespace {

using HamiltonianKey = std::tuple<double, double, double>;

template <typename Eval>
std::vector<ComplexMatrix> propagate_members(const QuenchEnsemble &ensemble, std::span<const double> disorder, Eval eval) {
    if (!disorder.empty() && disorder.size() != ensemble.n_total()) {
        throw std::invalid_argument("disorder vector must cover every lattice site");
    }
    std::map<HamiltonianKey, std::size_t> group_of;
    std::vector<HamiltonianKey> keys;
    std::vector<std::size_t> member_group;
    for (const auto &m : ensemble.members) {
        HamiltonianKey key{m.params.h, m.params.phi, m.params.theta_l};
        auto [it, inserted] = group_of.emplace(key, keys.size());
        if (inserted) {
            keys.push_back(key);
        }
        member_group.push_back(it->second);
    }
    std::vector<std::unique_ptr<SpectralPropagator>> props(keys.size());
    parallel_for(keys.size(), [&](std::size_t g) {
        auto [h, phi, theta] = keys[g];
        RealMatrix ham = build_hamiltonian(ensemble.lattice, h, phi, theta).matrix;
        for (std::size_t i = 0; i < disorder.size(); ++i) {
            ham(static_cast<Index>(i), static_cast<Index>(i)) += disorder[i];
        }
        props[g] = std::make_unique<SpectralPropagator>(ham);
    });
    std::vector<ComplexMatrix> out(ensemble.size());
    parallel_for(ensemble.size(), [&](std::size_t s) {
        out[s] = eval(*props[member_group[s]], ensemble.members[s].params.t);
    });
    return out;
}

}  // namespace

std::vector<ComplexMatrix> member_propagators(const QuenchEnsemble &ensemble, std::span<const double> disorder) {
    return propagate_members(ensemble, disorder, [](const SpectralPropagator &p, double t) { return p.at(t); });
}

std::vector<ComplexMatrix> member_propagator_rows(const QuenchEnsemble &ensemble,
                                                  std::span<const int> rows,
                                                  std::span<const double> disorder) {
    return propagate_members(
        ensemble, disorder, [rows](const SpectralPropagator &p, double t) { return p.rows_at(t, rows); });
}

nlohmann::json to_json(const QuenchEnsemble &ensemble) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto &m : ensemble.members) {
        members.push_back({{"p", m.probability},
                           {"t", m.params.t},
                           {"h", m.params.h},
                           {"phi", m.params.phi},
                           {"theta_l", m.params.theta_l}});
    }
    return {{"lattice",
             {{"kind", to_string(ensemble.lattice.kind())},
              {"lx", ensemble.lattice.lx()},
              {"ly", ensemble.lattice.ly()}}},
            {"system_sites", ensemble.system_sites},
            {"members", members}};
}

QuenchEnsemble ensemble_from_json(const nlohmann::json &j) {
    QuenchEnsemble out;
    const auto &lat = j.at("lattice");
    out.lattice = build_lattice(lattice_kind_from_string(lat.at("kind").get<std::string>()),
                                lat.at("lx").get<int>(),
                                lat.at("ly").get<int>());
    out.system_sites = j.at("system_sites").get<std::vector<int>>();
    for (const auto &m : j.at("members")) {
        out.members.push_back({m.at("p").get<double>(),
                               {m.at("t").get<double>(),
                                m.at("h").get<double>(),
                                m.at("phi").get<double>(),
                                m.at("theta_l").get<double>()}});
    }
    out.validate();
    return out;
}

std::string ensemble_hash(const QuenchEnsemble &ensemble) {
    std::string text = to_json(ensemble).dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gtomo
