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

#ifndef GTOMO_SCHEMES_H
#define GTOMO_SCHEMES_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/gaussian.h"
#include "gtomo/lattice.h"

namespace gtomo {

/// Randomized quench ensemble over the whole lattice, inverted by truncated pseudo-inverse.
struct LocalSchemeParams {
    std::size_t s = 400;
    double t_max = 5.0;
    double h_max = 6.0;
    double theta_l = 2.0 / 3.0;
    int grid_points = 30;
    double delta = 1e-3;
    uint64_t ensemble_seed = 1;
};

QuenchEnsemble local_scheme_ensemble(const Lattice &lattice, const LocalSchemeParams &params);

/// Geometry of the system block alone: basis index a is site a of this lattice.
/// The global scheme's system row is a chain.
Lattice system_geometry(const QuenchEnsemble &ensemble);

/// Bond (m, m+1) at the middle of a chain, m = floor((N-1)/2); on a grid the
/// horizontal bond leaving the central site.
std::pair<int, int> middle_bond(const Lattice &geometry);

/// Pair (i, i+d) centered on a chain, i = floor((N-d)/2).
std::pair<int, int> long_range_pair(const Lattice &geometry, int d);

struct NamedObservable {
    std::string name;
    int a = 0;
    int b = 0;
    ObservableFunctional functional;
};

/// c^dag_a c_b as a named observable.
NamedObservable element_observable(const Lattice &geometry, std::string name, int a, int b);
NamedObservable middle_current(const Lattice &geometry);
NamedObservable long_range_current(const Lattice &geometry, int d);

}  // namespace gtomo

#endif
