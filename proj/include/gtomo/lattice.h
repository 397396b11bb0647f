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

#ifndef GTOMO_LATTICE_H
#define GTOMO_LATTICE_H

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace gtomo {

enum class LatticeKind { Chain, Grid };

std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string &name);

struct SiteCoord {
    int x = 0;
    int y = 0;
    bool operator==(const SiteCoord &) const = default;
};

/// Rectangular lattice with open boundaries. Sites are indexed row-major,
/// index = y * lx + x; every downstream vectorization follows this order.
class Lattice {
   public:
    Lattice() = default;
    Lattice(LatticeKind kind, int lx, int ly);

    LatticeKind kind() const {
        return kind_;
    }
    int lx() const {
        return lx_;
    }
    int ly() const {
        return ly_;
    }
    std::size_t size() const {
        return static_cast<std::size_t>(lx_) * static_cast<std::size_t>(ly_);
    }
    int index(int x, int y) const {
        return y * lx_ + x;
    }
    int index(SiteCoord c) const {
        return index(c.x, c.y);
    }
    SiteCoord coord(int site) const {
        return {site % lx_, site / lx_};
    }
    bool contains(int site) const {
        return site >= 0 && static_cast<std::size_t>(site) < size();
    }
    /// Nearest-neighbor bonds (a, b) with a < b.
    const std::vector<std::pair<int, int>> &edges() const {
        return edges_;
    }
    int chebyshev_distance(int a, int b) const;

    bool operator==(const Lattice &other) const {
        return kind_ == other.kind_ && lx_ == other.lx_ && ly_ == other.ly_;
    }

   private:
    LatticeKind kind_ = LatticeKind::Chain;
    int lx_ = 0;
    int ly_ = 0;
    std::vector<std::pair<int, int>> edges_;
};

/// Throws std::invalid_argument on non-positive dimensions or a chain with ly != 1.
Lattice build_lattice(LatticeKind kind, int lx, int ly = 1);

/// A 1d system of N sites embedded as one row of an N x (N + 11) grid. The
/// other N^2 + 10N sites are ancillas that start empty.
struct ExpansionLayout {
    Lattice lattice;
    std::vector<int> system_sites;
    std::vector<int> ancilla_sites;
};

inline constexpr int kExpansionExtraRows = 11;

ExpansionLayout expansion_layout(int n, int system_row = 0);

/// +1 on sublattice A ((x + y) even), -1 on sublattice B.
int sublattice_sign(const Lattice &lattice, int site);

/// Sites within Chebyshev distance ell of center, clipped to the lattice, in canonical order.
std::vector<int> chebyshev_patch(const Lattice &lattice, int center, int ell);

/// Sites of `lattice` not listed in `subset` (which must be sorted-unique or not; order ignored).
std::vector<int> complement_sites(const Lattice &lattice, const std::vector<int> &subset);

}  // namespace gtomo

#endif
