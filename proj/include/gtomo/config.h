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

#ifndef GTOMO_CONFIG_H
#define GTOMO_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gtomo/ensemble.h"
#include "gtomo/inverse.h"
#include "gtomo/robustness.h"
#include "gtomo/schemes.h"

namespace gtomo {

/// Invalid configuration; carries one diagnostic per problem found.
class ConfigError : public std::runtime_error {
   public:
    explicit ConfigError(std::vector<std::string> diagnostics);
    const std::vector<std::string> &diagnostics() const {
        return diagnostics_;
    }

   private:
    std::vector<std::string> diagnostics_;
};

enum class SchemeName { Local1d, Local2d, Global, FourPoint };
std::string to_string(SchemeName scheme);

/// Named shortcut or explicit coefficient matrix.
struct ObservableSpec {
    std::string name;
    /// Distance for long_range_current; 0 means N/2.
    int distance = 0;
    /// Explicit coefficients, row-major N x N, when name == "custom".
    std::vector<std::complex<double>> coefficients;
};

enum class StateKind { Random, Mixed, File };

struct StateSpec {
    StateKind kind = StateKind::Random;
    double filling = 0.5;
    uint64_t seed = 7;
    std::string path;
};

struct RunConfig {
    SchemeName scheme = SchemeName::Local1d;
    /// Chain length, grid side, or global-scheme N.
    std::vector<int> sizes;
    LocalSchemeParams local;
    GlobalSchemeParams global;
    InverseMethod method = InverseMethod::Pseudo;
    double delta = 1e-3;
    double w_floor = 1e-8;
    bool truncated = false;
    int ell_in = 4;
    int ell_out = 2;
    int patch_radius = 1;
    double memory_cap_gib = 2.0;
    std::size_t repetitions = 4000;
    double epsilon = 0.05;
    std::optional<double> p_fail;
    uint64_t seed = 0;
    StateSpec state;
    std::vector<ObservableSpec> observables;
    std::vector<double> nus{0.0, 1e-4, 1e-3, 1e-2};
    int trials = 50;
    std::vector<double> h_grid{0.0, 2.5, 5.0};
    std::vector<double> phi_grid{0.0, 0.7853981633974483, 1.5707963267948966};
    bool spectral_radius = false;
    std::string output = "out";
};

/// Parses and validates; throws ConfigError listing every problem. The
/// metadata keys of a resolved config (command, format_version, inputs) are ignored.
RunConfig parse_config(const nlohmann::json &j);
/// Fully resolved form, including defaults.
nlohmann::json to_json(const RunConfig &config);

ObservableSpec parse_observable(const nlohmann::json &j);
std::string observable_label(const ObservableSpec &spec);

/// Lattice used by a local scheme of size n.
Lattice scheme_lattice(const RunConfig &config, int n);
/// Ensemble for one size.
QuenchEnsemble scheme_ensemble(const RunConfig &config, int n);

RobustnessConfig robustness_config(const RunConfig &config);

}  // namespace gtomo

#endif
