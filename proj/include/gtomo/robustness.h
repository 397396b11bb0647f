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

#ifndef GTOMO_ROBUSTNESS_H
#define GTOMO_ROBUSTNESS_H

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gtomo/ensemble.h"
#include "gtomo/gaussian.h"
#include "gtomo/schemes.h"

namespace gtomo {

/// H + diag(xi), xi_i ~ N(0, nu).
RealMatrix perturb_hamiltonian(const RealMatrix &h, double nu, std::mt19937_64 &rng);
/// The disorder vector alone.
RealVector draw_disorder(std::size_t n, double nu, std::mt19937_64 &rng);

/// Largest singular value of rows `rows` of deviation * V (all rows when empty).
double bias_metric(const RealMatrix &deviation, const RealMatrix &retained_basis, std::span<const Index> rows = {});
/// G F_err - I.
RealMatrix bias_deviation(const RealMatrix &g, const RealMatrix &f_err);
/// Spectral radius of V^T (G F_err - I) V.
double bias_spectral_radius(const RealMatrix &deviation, const RealMatrix &retained_basis);

enum class SchemeKind { Local, Global };
std::string to_string(SchemeKind kind);

struct RobustnessConfig {
    SchemeKind scheme = SchemeKind::Local;
    LatticeKind local_lattice = LatticeKind::Chain;
    std::vector<int> sizes;
    std::vector<double> nus;
    int trials = 50;
    uint64_t seed = 0;
    LocalSchemeParams local;
    /// Radius of the patches over which the local-scheme metric is maximized.
    int patch_radius = 1;
    GlobalSchemeParams global;
    std::vector<double> h_grid{0.0, 2.5, 5.0};
    std::vector<double> phi_grid{0.0, 0.7853981633974483, 1.5707963267948966};
    double w_floor = 1e-8;
    bool spectral_radius = false;
};

struct RobustnessRow {
    int n = 0;
    double nu = 0.0;
    int trial = 0;
    double h = 0.0;
    double phi = 0.0;
    double metric = 0.0;
    /// NaN unless requested.
    double radius = 0.0;
};

struct RobustnessPoint {
    int n = 0;
    double nu = 0.0;
    double h = 0.0;
    double phi = 0.0;
    double max_metric = 0.0;
    double mean_metric = 0.0;
};

struct RobustnessSweep {
    SchemeKind scheme = SchemeKind::Local;
    std::vector<RobustnessRow> rows;
    /// Per (N, nu): the (h, phi) with the smallest max-over-trials metric.
    std::vector<RobustnessPoint> best_per_nu;
    /// Per (N, nu): values at the single (h, phi) minimizing the summed maxima over nu.
    std::vector<RobustnessPoint> best_overall;
    /// (h, phi) combinations skipped because their map was rank deficient.
    std::vector<std::pair<double, double>> skipped;
};

RobustnessSweep robustness_sweep(const RobustnessConfig &config);

nlohmann::json summary_json(const RobustnessSweep &sweep);

}  // namespace gtomo

#endif
