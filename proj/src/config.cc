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

#include "gtomo/config.h"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace gtomo {

namespace {

std::string join(const std::vector<std::string> &items) {
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out << (i ? "; " : "") << items[i];
    }
    return out.str();
}

class Reader {
   public:
    explicit Reader(std::vector<std::string> &diag) : diag_(diag) {
    }

    template <typename T>
    void read(const nlohmann::json &obj, const char *key, T &target, const std::string &where) {
        if (!obj.contains(key)) {
            return;
        }
        try {
            target = obj.at(key).get<T>();
        } catch (const nlohmann::json::exception &) {
            diag_.push_back(where + "." + key + ": wrong type");
        }
    }

    void reject_unknown(const nlohmann::json &obj, const std::vector<std::string> &known, const std::string &where) {
        if (!obj.is_object()) {
            diag_.push_back(where + ": expected an object");
            return;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
                diag_.push_back(where + ": unknown key '" + it.key() + "'");
            }
        }
    }

    void check(bool ok, const std::string &message) {
        if (!ok) {
            diag_.push_back(message);
        }
    }

   private:
    std::vector<std::string> &diag_;
};

std::optional<SchemeName> scheme_from_string(const std::string &s) {
    if (s == "local1d") {
        return SchemeName::Local1d;
    }
    if (s == "local2d") {
        return SchemeName::Local2d;
    }
    if (s == "global") {
        return SchemeName::Global;
    }
    if (s == "fourpoint") {
        return SchemeName::FourPoint;
    }
    return std::nullopt;
}

std::string state_kind_string(StateKind k) {
    switch (k) {
        case StateKind::Random:
            return "random";
        case StateKind::Mixed:
            return "mixed";
        case StateKind::File:
            return "file";
    }
    return "random";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error("invalid configuration: " + join(diagnostics)), diagnostics_(std::move(diagnostics)) {
}

std::string to_string(SchemeName scheme) {
    switch (scheme) {
        case SchemeName::Local1d:
            return "local1d";
        case SchemeName::Local2d:
            return "local2d";
        case SchemeName::Global:
            return "global";
        case SchemeName::FourPoint:
            return "fourpoint";
    }
    return "local1d";
}

ObservableSpec parse_observable(const nlohmann::json &j) {
    ObservableSpec spec;
    if (j.is_string()) {
        static const std::regex long_range(R"(long_range_current(?:\((\d+)\))?)");
        std::string s = j.get<std::string>();
        std::smatch m;
        if (s == "middle_current" || s == "full_matrix") {
            spec.name = s;
        } else if (std::regex_match(s, m, long_range)) {
            spec.name = "long_range_current";
            spec.distance = m[1].matched ? std::stoi(m[1].str()) : 0;
        } else {
            throw ConfigError({"observables: unknown shortcut '" + s + "'"});
        }
        return spec;
    }
    if (j.is_object() && j.contains("coefficients")) {
        spec.name = "custom";
        for (const auto &row : j.at("coefficients")) {
            for (const auto &entry : row) {
                if (entry.is_array() && entry.size() == 2) {
                    spec.coefficients.emplace_back(entry[0].get<double>(), entry[1].get<double>());
                } else {
                    spec.coefficients.emplace_back(entry.get<double>(), 0.0);
                }
            }
        }
        if (j.contains("name")) {
            spec.name = j.at("name").get<std::string>();
        }
        return spec;
    }
    throw ConfigError({"observables: expected a shortcut string or {\"coefficients\": [[...]]}"});
}

std::string observable_label(const ObservableSpec &spec) {
    if (spec.name == "long_range_current") {
        return spec.distance > 0 ? "long_range_current(" + std::to_string(spec.distance) + ")" : "long_range_current";
    }
    return spec.name;
}

RunConfig parse_config(const nlohmann::json &j) {
    std::vector<std::string> diag;
    Reader r(diag);
    RunConfig c;
    r.reject_unknown(j,
                     {"scheme", "sizes", "ensemble", "global", "inversion", "experiment", "observables",
                      "robustness", "output", "command", "format_version", "inputs"},
                     "config");
    if (!j.is_object()) {
        throw ConfigError(diag);
    }
    std::string scheme = "local1d";
    r.read(j, "scheme", scheme, "config");
    if (auto s = scheme_from_string(scheme)) {
        c.scheme = *s;
    } else {
        diag.push_back("config.scheme: expected local1d, local2d, global or fourpoint");
    }
    c.method = c.scheme == SchemeName::Global ? InverseMethod::Optimal : InverseMethod::Pseudo;
    if (c.scheme == SchemeName::Local2d) {
        c.local.t_max = 1.5;
        c.local.s = 1000;
    }
    if (c.scheme == SchemeName::FourPoint) {
        c.local.s = 200;
        c.sizes = {4};
    }
    r.read(j, "sizes", c.sizes, "config");
    r.check(!c.sizes.empty(), "config.sizes: at least one system size required");
    for (int n : c.sizes) {
        r.check(n >= 2, "config.sizes: every size must be >= 2");
    }
    if (j.contains("ensemble")) {
        const auto &e = j.at("ensemble");
        r.reject_unknown(e, {"S", "t_max", "h_max", "theta_l", "grid_points", "seed"}, "ensemble");
        r.read(e, "S", c.local.s, "ensemble");
        r.read(e, "t_max", c.local.t_max, "ensemble");
        r.read(e, "h_max", c.local.h_max, "ensemble");
        r.read(e, "theta_l", c.local.theta_l, "ensemble");
        r.read(e, "grid_points", c.local.grid_points, "ensemble");
        r.read(e, "seed", c.local.ensemble_seed, "ensemble");
    }
    r.check(c.local.s >= 1, "ensemble.S: must be >= 1");
    r.check(c.local.t_max > 0 && c.local.h_max > 0, "ensemble: t_max and h_max must be positive");
    r.check(c.local.grid_points >= 1, "ensemble.grid_points: must be >= 1");
    if (j.contains("global")) {
        const auto &g = j.at("global");
        r.reject_unknown(g, {"time_factor", "h", "phi", "theta_l", "system_row"}, "global");
        r.read(g, "time_factor", c.global.time_factor, "global");
        r.read(g, "h", c.global.h, "global");
        r.read(g, "phi", c.global.phi, "global");
        r.read(g, "theta_l", c.global.theta_l, "global");
        r.read(g, "system_row", c.global.system_row, "global");
    }
    r.check(c.global.time_factor > 0 && c.global.h >= 0, "global: time_factor > 0 and h >= 0 required");
    r.check(c.global.system_row >= 0 && c.global.system_row <= kExpansionExtraRows,
            "global.system_row: outside the expansion layout");
    if (j.contains("inversion")) {
        const auto &inv = j.at("inversion");
        r.reject_unknown(
            inv, {"method", "delta", "w_floor", "truncated", "ell_in", "ell_out", "patch_radius", "memory_cap_gib"},
            "inversion");
        std::string method = to_string(c.method);
        r.read(inv, "method", method, "inversion");
        if (method == "optimal") {
            c.method = InverseMethod::Optimal;
        } else if (method == "pseudo") {
            c.method = InverseMethod::Pseudo;
        } else {
            diag.push_back("inversion.method: expected optimal or pseudo");
        }
        r.read(inv, "delta", c.delta, "inversion");
        r.read(inv, "w_floor", c.w_floor, "inversion");
        r.read(inv, "truncated", c.truncated, "inversion");
        r.read(inv, "ell_in", c.ell_in, "inversion");
        r.read(inv, "ell_out", c.ell_out, "inversion");
        r.read(inv, "patch_radius", c.patch_radius, "inversion");
        r.read(inv, "memory_cap_gib", c.memory_cap_gib, "inversion");
    }
    r.check(c.delta > 0 && c.delta <= 1, "inversion.delta: must lie in (0, 1]");
    r.check(c.w_floor >= 0, "inversion.w_floor: must be non-negative");
    r.check(c.ell_in >= 0 && c.ell_out >= 0 && c.patch_radius >= 0, "inversion: radii must be non-negative");
    r.check(c.memory_cap_gib > 0, "inversion.memory_cap_gib: must be positive");
    if (j.contains("experiment")) {
        const auto &ex = j.at("experiment");
        r.reject_unknown(ex, {"R", "epsilon", "p_fail", "seed", "state"}, "experiment");
        r.read(ex, "R", c.repetitions, "experiment");
        r.read(ex, "epsilon", c.epsilon, "experiment");
        if (ex.contains("p_fail")) {
            double p = 0;
            r.read(ex, "p_fail", p, "experiment");
            c.p_fail = p;
            r.check(p > 0 && p < 1, "experiment.p_fail: must lie in (0, 1)");
        }
        r.read(ex, "seed", c.seed, "experiment");
        if (ex.contains("state")) {
            const auto &st = ex.at("state");
            r.reject_unknown(st, {"kind", "filling", "seed", "path"}, "experiment.state");
            std::string kind = "random";
            r.read(st, "kind", kind, "experiment.state");
            if (kind == "random") {
                c.state.kind = StateKind::Random;
            } else if (kind == "mixed") {
                c.state.kind = StateKind::Mixed;
            } else if (kind == "file") {
                c.state.kind = StateKind::File;
            } else {
                diag.push_back("experiment.state.kind: expected random, mixed or file");
            }
            r.read(st, "filling", c.state.filling, "experiment.state");
            r.read(st, "seed", c.state.seed, "experiment.state");
            r.read(st, "path", c.state.path, "experiment.state");
            r.check(c.state.filling >= 0 && c.state.filling <= 1, "experiment.state.filling: must lie in [0, 1]");
            r.check(c.state.kind != StateKind::File || !c.state.path.empty(), "experiment.state.path: required");
        }
    }
    r.check(c.repetitions >= 1, "experiment.R: must be >= 1");
    r.check(c.epsilon > 0, "experiment.epsilon: must be positive");
    if (j.contains("observables")) {
        if (!j.at("observables").is_array()) {
            diag.push_back("observables: expected a list");
        } else {
            for (const auto &o : j.at("observables")) {
                try {
                    c.observables.push_back(parse_observable(o));
                } catch (const ConfigError &e) {
                    diag.insert(diag.end(), e.diagnostics().begin(), e.diagnostics().end());
                } catch (const nlohmann::json::exception &) {
                    diag.push_back("observables: malformed entry");
                }
            }
        }
    } else {
        c.observables.push_back(parse_observable("middle_current"));
    }
    if (j.contains("robustness")) {
        const auto &rb = j.at("robustness");
        r.reject_unknown(rb, {"nus", "trials", "h_grid", "phi_grid", "spectral_radius"}, "robustness");
        r.read(rb, "nus", c.nus, "robustness");
        r.read(rb, "trials", c.trials, "robustness");
        r.read(rb, "h_grid", c.h_grid, "robustness");
        r.read(rb, "phi_grid", c.phi_grid, "robustness");
        r.read(rb, "spectral_radius", c.spectral_radius, "robustness");
    }
    r.check(c.trials >= 1, "robustness.trials: must be >= 1");
    for (double nu : c.nus) {
        r.check(nu >= 0, "robustness.nus: variances must be non-negative");
    }
    r.check(!c.h_grid.empty() && !c.phi_grid.empty(), "robustness: h_grid and phi_grid must be non-empty");
    r.read(j, "output", c.output, "config");
    if (!diag.empty()) {
        throw ConfigError(diag);
    }
    return c;
}

nlohmann::json to_json(const RunConfig &c) {
    nlohmann::json obs = nlohmann::json::array();
    for (const auto &o : c.observables) {
        if (o.name == "middle_current" || o.name == "full_matrix" || o.name == "long_range_current") {
            obs.push_back(observable_label(o));
        } else {
            auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(o.coefficients.size()))));
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < n; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t k = 0; k < n; ++k) {
                    auto v = o.coefficients[i * n + k];
                    row.push_back({v.real(), v.imag()});
                }
                rows.push_back(row);
            }
            obs.push_back({{"name", o.name}, {"coefficients", rows}});
        }
    }
    nlohmann::json experiment{{"R", c.repetitions},
                              {"epsilon", c.epsilon},
                              {"seed", c.seed},
                              {"state",
                               {{"kind", state_kind_string(c.state.kind)},
                                {"filling", c.state.filling},
                                {"seed", c.state.seed},
                                {"path", c.state.path}}}};
    if (c.p_fail) {
        experiment["p_fail"] = *c.p_fail;
    }
    return {{"scheme", to_string(c.scheme)},
            {"sizes", c.sizes},
            {"ensemble",
             {{"S", c.local.s},
              {"t_max", c.local.t_max},
              {"h_max", c.local.h_max},
              {"theta_l", c.local.theta_l},
              {"grid_points", c.local.grid_points},
              {"seed", c.local.ensemble_seed}}},
            {"global",
             {{"time_factor", c.global.time_factor},
              {"h", c.global.h},
              {"phi", c.global.phi},
              {"theta_l", c.global.theta_l},
              {"system_row", c.global.system_row}}},
            {"inversion",
             {{"method", to_string(c.method)},
              {"delta", c.delta},
              {"w_floor", c.w_floor},
              {"truncated", c.truncated},
              {"ell_in", c.ell_in},
              {"ell_out", c.ell_out},
              {"patch_radius", c.patch_radius},
              {"memory_cap_gib", c.memory_cap_gib}}},
            {"experiment", experiment},
            {"observables", obs},
            {"robustness",
             {{"nus", c.nus},
              {"trials", c.trials},
              {"h_grid", c.h_grid},
              {"phi_grid", c.phi_grid},
              {"spectral_radius", c.spectral_radius}}},
            {"output", c.output}};
}

Lattice scheme_lattice(const RunConfig &config, int n) {
    if (config.scheme == SchemeName::Local2d) {
        return build_lattice(LatticeKind::Grid, n, n);
    }
    return build_lattice(LatticeKind::Chain, n, 1);
}

QuenchEnsemble scheme_ensemble(const RunConfig &config, int n) {
    if (config.scheme == SchemeName::Global) {
        return global_scheme_ensemble(n, config.global);
    }
    return local_scheme_ensemble(scheme_lattice(config, n), config.local);
}

RobustnessConfig robustness_config(const RunConfig &config) {
    RobustnessConfig out;
    out.scheme = config.scheme == SchemeName::Global ? SchemeKind::Global : SchemeKind::Local;
    out.local_lattice = config.scheme == SchemeName::Local2d ? LatticeKind::Grid : LatticeKind::Chain;
    out.sizes = config.sizes;
    out.nus = config.nus;
    out.trials = config.trials;
    out.seed = config.seed;
    out.local = config.local;
    out.local.delta = config.delta;
    out.patch_radius = config.patch_radius;
    out.global = config.global;
    out.h_grid = config.h_grid;
    out.phi_grid = config.phi_grid;
    out.w_floor = config.w_floor;
    out.spectral_radius = config.spectral_radius;
    return out;
}

}  // namespace gtomo
