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

#include "gtomo/lattice.h"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace gtomo {

std::string to_string(LatticeKind kind) {
    return kind == LatticeKind::Chain ? "chain" : "grid";
}

LatticeKind lattice_kind_from_string(const std::string &name) {
    if (name == "chain") {
        return LatticeKind::Chain;
    }
    if (name == "grid") {
        return LatticeKind::Grid;
    }
    throw std::invalid_argument("unknown lattice kind '" + name + "'");
}

Lattice::Lattice(LatticeKind kind, int lx, int ly) : kind_(kind), lx_(lx), ly_(ly) {
    if (lx < 1 || ly < 1) {
        throw std::invalid_argument("lattice dimensions must be positive");
    }
    if (kind == LatticeKind::Chain && ly != 1) {
        throw std::invalid_argument("a chain has ly = 1");
    }
    edges_.reserve(2 * size());
    for (int y = 0; y < ly; ++y) {
        for (int x = 0; x < lx; ++x) {
            int i = index(x, y);
            if (x + 1 < lx) {
                edges_.emplace_back(i, index(x + 1, y));
            }
            if (y + 1 < ly) {
                edges_.emplace_back(i, index(x, y + 1));
            }
        }
    }
}

int Lattice::chebyshev_distance(int a, int b) const {
    SiteCoord ca = coord(a);
    SiteCoord cb = coord(b);
    return std::max(std::abs(ca.x - cb.x), std::abs(ca.y - cb.y));
}

Lattice build_lattice(LatticeKind kind, int lx, int ly) {
    return Lattice(kind, lx, ly);
}

ExpansionLayout expansion_layout(int n, int system_row) {
    if (n < 2) {
        throw std::invalid_argument("expansion layout needs N >= 2");
    }
    int rows = n + kExpansionExtraRows;
    if (system_row < 0 || system_row >= rows) {
        throw std::invalid_argument("system row out of range");
    }
    ExpansionLayout layout;
    layout.lattice = Lattice(LatticeKind::Grid, n, rows);
    for (int x = 0; x < n; ++x) {
        layout.system_sites.push_back(layout.lattice.index(x, system_row));
    }
    layout.ancilla_sites = complement_sites(layout.lattice, layout.system_sites);
    return layout;
}

int sublattice_sign(const Lattice &lattice, int site) {
    SiteCoord c = lattice.coord(site);
    return (c.x + c.y) % 2 == 0 ? 1 : -1;
}

std::vector<int> chebyshev_patch(const Lattice &lattice, int center, int ell) {
    if (!lattice.contains(center)) {
        throw std::invalid_argument("patch center outside lattice");
    }
    if (ell < 0) {
        throw std::invalid_argument("patch radius must be non-negative");
    }
    SiteCoord c = lattice.coord(center);
    std::vector<int> out;
    for (int y = std::max(0, c.y - ell); y <= std::min(lattice.ly() - 1, c.y + ell); ++y) {
        for (int x = std::max(0, c.x - ell); x <= std::min(lattice.lx() - 1, c.x + ell); ++x) {
            out.push_back(lattice.index(x, y));
        }
    }
    return out;
}

std::vector<int> complement_sites(const Lattice &lattice, const std::vector<int> &subset) {
    std::vector<char> used(lattice.size(), 0);
    for (int s : subset) {
        used.at(static_cast<std::size_t>(s)) = 1;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (!used[i]) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

}  // namespace gtomo
