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

#include "gtomo/schemes.h"

#include <stdexcept>

namespace gtomo {

QuenchEnsemble local_scheme_ensemble(const Lattice &lattice, const LocalSchemeParams &params) {
    return sample_local_ensemble(
        lattice, params.s, params.t_max, params.h_max, params.theta_l, params.grid_points, params.ensemble_seed);
}

Lattice system_geometry(const QuenchEnsemble &ensemble) {
    if (ensemble.n_system() == ensemble.n_total()) {
        return ensemble.lattice;
    }
    return build_lattice(LatticeKind::Chain, static_cast<int>(ensemble.n_system()), 1);
}

std::pair<int, int> middle_bond(const Lattice &geometry) {
    int cx = (geometry.lx() - 1) / 2;
    int cy = (geometry.ly() - 1) / 2;
    if (geometry.lx() < 2) {
        throw std::invalid_argument("middle bond needs at least two sites along x");
    }
    return {geometry.index(cx, cy), geometry.index(cx + 1, cy)};
}

std::pair<int, int> long_range_pair(const Lattice &geometry, int d) {
    int n = geometry.lx();
    if (d < 1 || d >= n) {
        throw std::invalid_argument("long-range distance must lie in [1, N)");
    }
    int cy = (geometry.ly() - 1) / 2;
    int i = (n - d) / 2;
    return {geometry.index(i, cy), geometry.index(i + d, cy)};
}

NamedObservable element_observable(const Lattice &geometry, std::string name, int a, int b) {
    if (!geometry.contains(a) || !geometry.contains(b)) {
        throw std::invalid_argument("observable sites outside the system");
    }
    auto n = static_cast<Index>(geometry.size());
    return {std::move(name), a, b, matrix_element_functional(n, a, b)};
}

NamedObservable middle_current(const Lattice &geometry) {
    auto [a, b] = middle_bond(geometry);
    return element_observable(geometry, "middle_current", a, b);
}

NamedObservable long_range_current(const Lattice &geometry, int d) {
    auto [a, b] = long_range_pair(geometry, d);
    return element_observable(geometry, "long_range_current(" + std::to_string(d) + ")", a, b);
}

}  // namespace gtomo
