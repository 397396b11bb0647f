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

#ifndef GTOMO_ENSEMBLE_H
#define GTOMO_ENSEMBLE_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gtomo/gaussian.h"
#include "gtomo/lattice.h"

namespace gtomo {

/// One quench: evolve for time t under H(h, phi) with laser angle theta_l.
struct QuenchParams {
    double t = 0.0;
    double h = 0.0;
    double phi = 0.0;
    double theta_l = 0.0;
    bool operator==(const QuenchParams &) const = default;
};

struct EnsembleMember {
    double probability = 0.0;
    QuenchParams params;
};

/// Weighted quench list acting on a lattice. `system_sites` carry the unknown
/// state; every other site is an ancilla.
struct QuenchEnsemble {
    Lattice lattice;
    std::vector<int> system_sites;
    std::vector<EnsembleMember> members;

    std::size_t size() const {
        return members.size();
    }
    std::size_t n_system() const {
        return system_sites.size();
    }
    std::size_t n_total() const {
        return lattice.size();
    }
    std::vector<int> ancilla_sites() const;
    /// Throws std::invalid_argument unless probabilities are positive and sum to 1, t > 0 and h >= 0.
    void validate() const;
};

/// S members drawn uniformly with replacement from the grid
/// {t_max i/g} x {h_max j/g} x {2pi k/g}, i, j, k in 1..g; p_s = 1/S.
/// All lattice sites are system sites.
QuenchEnsemble sample_local_ensemble(const Lattice &lattice,
                                     std::size_t s,
                                     double t_max,
                                     double h_max,
                                     double theta_l,
                                     int grid_points,
                                     uint64_t seed);

struct GlobalSchemeParams {
    double time_factor = 0.75;
    double h = 1.0;
    double phi = 0.0;
    double theta_l = 0.798;
    int system_row = 0;
};

/// Single quench of duration time_factor * N on the 1d -> 2d expansion layout.
QuenchEnsemble global_scheme_ensemble(int n, const GlobalSchemeParams &params = {});

/// U_s = exp(-i t_s H_s) for every member. Members sharing (h, phi, theta_l)
/// share one eigendecomposition. `disorder`, when non-empty, is added to the
/// diagonal of every member's Hamiltonian.
std::vector<ComplexMatrix> member_propagators(const QuenchEnsemble &ensemble, std::span<const double> disorder = {});

/// Rows `rows` of each U_s; avoids materializing full propagators.
std::vector<ComplexMatrix> member_propagator_rows(const QuenchEnsemble &ensemble,
                                                  std::span<const int> rows,
                                                  std::span<const double> disorder = {});

nlohmann::json to_json(const QuenchEnsemble &ensemble);
QuenchEnsemble ensemble_from_json(const nlohmann::json &j);
/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string ensemble_hash(const QuenchEnsemble &ensemble);

}  // namespace gtomo

#endif
