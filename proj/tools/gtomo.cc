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

// Command-line front end: complexity tables, simulated experiments,
// re-estimation from datasets, robustness sweeps, four-point runs and rank checks.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtomo/complexity.h"
#include "gtomo/config.h"
#include "gtomo/errors.h"
#include "gtomo/experiment.h"
#include "gtomo/fourpoint.h"
#include "gtomo/io.h"
#include "gtomo/parallel.h"
#include "gtomo/pipeline.h"
#include "gtomo/robustness.h"
#include "gtomo/schemes.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gtomo;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kRank = 3, kNumerical = 4 };

struct Globals {
    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    std::size_t threads = 0;
};

struct Resolved {
    RunConfig config;
    fs::path out;
    json inputs = json::object();
};

Resolved load(const Globals &g) {
    json raw = json::object();
    if (!g.config_path.empty()) {
        try {
            raw = read_json(g.config_path);
        } catch (const json::exception &e) {
            throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
        } catch (const std::runtime_error &e) {
            throw ConfigError({e.what()});
        }
    }
    Resolved r;
    r.config = parse_config(raw);
    if (g.seed) {
        r.config.seed = *g.seed;
    }
    if (!g.out_dir.empty()) {
        r.config.output = g.out_dir;
    }
    r.out = r.config.output;
    fs::create_directories(r.out);
    return r;
}

void write_resolved(const Resolved &r, const std::string &command) {
    json j = to_json(r.config);
    j["command"] = command;
    j["format_version"] = kFormatVersion;
    j["inputs"] = r.inputs;
    write_json(r.out / "config.resolved.json", j);
}

PipelineOptions pipeline_options(const RunConfig &c, bool keep_blocks) {
    PipelineOptions o;
    o.method = c.method;
    o.delta = c.delta;
    o.w_floor = c.w_floor;
    o.keep_blocks = keep_blocks;
    o.map.memory_cap_bytes = static_cast<std::size_t>(c.memory_cap_gib * static_cast<double>(std::size_t{1} << 30));
    return o;
}

bool is_local(const RunConfig &c) {
    return c.scheme == SchemeName::Local1d || c.scheme == SchemeName::Local2d;
}

/// Element observables resolved on the system geometry; full_matrix is handled separately.
std::vector<NamedObservable> resolve_observables(const RunConfig &c, const Lattice &geometry) {
    std::vector<NamedObservable> out;
    auto n = static_cast<Index>(geometry.size());
    for (const auto &spec : c.observables) {
        if (spec.name == "full_matrix") {
            continue;
        }
        if (spec.name == "middle_current") {
            out.push_back(middle_current(geometry));
        } else if (spec.name == "long_range_current") {
            int d = spec.distance > 0 ? spec.distance : geometry.lx() / 2;
            out.push_back(long_range_current(geometry, d));
        } else {
            if (static_cast<Index>(spec.coefficients.size()) != n * n) {
                throw ConfigError({"observable '" + spec.name + "' needs an N x N coefficient matrix"});
            }
            ComplexMatrix o(n, n);
            for (Index i = 0; i < n; ++i) {
                for (Index k = 0; k < n; ++k) {
                    o(i, k) = spec.coefficients[static_cast<std::size_t>(i * n + k)];
                }
            }
            out.push_back({spec.name, -1, -1, observable_functional(o)});
        }
    }
    return out;
}

bool wants_full_matrix(const RunConfig &c) {
    for (const auto &o : c.observables) {
        if (o.name == "full_matrix") {
            return true;
        }
    }
    return false;
}

CorrelationMatrix make_state(const RunConfig &c, Index n) {
    switch (c.state.kind) {
        case StateKind::Mixed:
            return CorrelationMatrix(ComplexMatrix::Identity(n, n) * 0.5);
        case StateKind::File: {
            CorrelationMatrix m(read_complex_matrix(c.state.path));
            if (m.size() != n) {
                throw ConfigError({"state file holds a " + std::to_string(m.size()) + "-site matrix, expected " +
                                   std::to_string(n)});
            }
            return m;
        }
        case StateKind::Random:
            break;
    }
    return random_gaussian_state(n, c.state.filling, c.state.seed);
}

double truth_value(const ObservableFunctional &f, const RealVector &x, double *imag) {
    *imag = f.im.size() == x.size() ? f.im.dot(x) : 0.0;
    return f.re.dot(x);
}

json estimate_json(const std::string &label, const EstimateResult &e, std::complex<double> truth) {
    return {{"observable", label},
            {"value", {e.value.real(), e.value.imag()}},
            {"stderr", e.standard_error()},
            {"R", e.r_used},
            {"truth", {truth.real(), truth.imag()}},
            {"abs_error", std::abs(e.value - truth)}};
}

/// Observable restricted to the inner patch of a localized inverse.
ObservableFunctional localized_functional(const LocalizedInverse &loc, int a, int b) {
    auto find = [&](int site) {
        for (std::size_t i = 0; i < loc.inner_sites.size(); ++i) {
            if (loc.inner_sites[i] == site) {
                return static_cast<Index>(i);
            }
        }
        throw ConfigError({"observable site outside the inner patch; raise inversion.ell_in"});
    };
    return matrix_element_functional(static_cast<Index>(loc.inner_sites.size()), find(a), find(b));
}

int cmd_complexity(const Globals &g) {
    Resolved r = load(g);
    const RunConfig &c = r.config;
    if (c.scheme == SchemeName::FourPoint) {
        throw ConfigError({"complexity: scheme fourpoint is not supported; use the fourpoint subcommand"});
    }
    std::vector<std::string> header{"N", "rank", "sigma2_worst", "R_worst", "sigma2_avg", "R_avg"};
    if (is_local(c)) {
        header.insert(header.end(), {"sigma2_patch_worst", "R_patch_worst"});
    }
    std::vector<double> ns, worst, avg;
    json rows = json::array();
    std::vector<std::vector<std::string>> table;
    bool header_done = false;
    CsvWriter csv(r.out / "complexity.csv");
    for (int n : c.sizes) {
        QuenchEnsemble ens = scheme_ensemble(c, n);
        r.inputs["ensemble_hash_N" + std::to_string(n)] = ensemble_hash(ens);
        Lattice geometry = system_geometry(ens);
        std::vector<NamedObservable> obs = resolve_observables(c, geometry);
        if (!header_done) {
            for (const auto &o : obs) {
                header.push_back("sigma2_" + o.name);
                header.push_back("R_" + o.name);
            }
            csv.header(header);
            header_done = true;
        }
        json row{{"N", n}};
        csv.cell(static_cast<long long>(n));
        if (c.truncated && is_local(c)) {
            csv.cell("nan").cell("nan").cell("nan").cell("nan").cell("nan");
            csv.cell("nan").cell("nan");
            for (const auto &o : obs) {
                if (o.a < 0) {
                    throw ConfigError({"truncated inversion supports element observables only"});
                }
                LocalizedInverse loc = truncated_local_map(ens, o.a, c.ell_in, c.ell_out, c.delta);
                double s2 = predicted_variance(loc.bundle, localized_functional(loc, o.a, o.b));
                csv.cell(s2).cell(static_cast<long long>(samples_required(s2, c.epsilon, c.p_fail)));
                row["sigma2_" + o.name] = s2;
            }
            csv.end_row();
            rows.push_back(row);
            continue;
        }
        Pipeline p = build_pipeline(std::move(ens), pipeline_options(c, false));
        double s_worst, s_avg;
        if (c.method == InverseMethod::Optimal) {
            s_worst = sigma_worst(p.bundle.gram);
            s_avg = sigma_avg(p.bundle.gram);
        } else {
            Eigen::SelfAdjointEigenSolver<RealMatrix> es(p.bundle.covariance, Eigen::EigenvaluesOnly);
            s_worst = es.eigenvalues().maxCoeff();
            s_avg = p.bundle.covariance.trace() / static_cast<double>(p.bundle.dimension());
        }
        ns.push_back(n);
        worst.push_back(s_worst);
        avg.push_back(s_avg);
        csv.cell(static_cast<long long>(p.bundle.rank()));
        csv.cell(s_worst).cell(static_cast<long long>(samples_required(s_worst, c.epsilon, c.p_fail)));
        csv.cell(s_avg).cell(static_cast<long long>(samples_required(s_avg, c.epsilon, c.p_fail)));
        row["rank"] = p.bundle.rank();
        row["worst"] = to_json(make_report(MetricKind::Worst, "worst", s_worst, c.epsilon));
        row["average"] = to_json(make_report(MetricKind::Average, "average", s_avg, c.epsilon));
        if (is_local(c)) {
            PatchVariance pv = worst_patch_variance(p.bundle.covariance, p.ensemble.lattice,
                                                    p.bundle.column_sites, c.patch_radius);
            csv.cell(pv.worst).cell(static_cast<long long>(samples_required(pv.worst, c.epsilon, c.p_fail)));
            row["patch_worst"] = to_json(make_report(MetricKind::Worst, "patch_worst", pv.worst, c.epsilon));
            row["patch_worst"]["center"] = pv.center;
        }
        json per = json::array();
        for (const auto &o : obs) {
            double s2 = predicted_variance(p.bundle, o.functional);
            csv.cell(s2).cell(static_cast<long long>(samples_required(s2, c.epsilon, c.p_fail)));
            per.push_back(to_json(make_report(MetricKind::Observable, o.name, s2, c.epsilon)));
            if (!o.functional.is_real()) {
                double re = o.functional.re.dot(p.bundle.covariance * o.functional.re);
                double im = o.functional.im.dot(p.bundle.covariance * o.functional.im);
                per.back()["sigma2_hermitian_parts"] = {re, im};
            }
        }
        row["observables"] = per;
        csv.end_row();
        rows.push_back(row);
        std::cerr << "complexity N=" << n << " worst=" << s_worst << " avg=" << s_avg << "\n";
    }
    json summary{{"rows", rows}, {"epsilon", c.epsilon}};
    if (ns.size() >= 2) {
        bool finite = true;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            finite = finite && std::isfinite(worst[i]) && std::isfinite(avg[i]) && worst[i] > 0 && avg[i] > 0;
        }
        if (finite) {
            summary["exponent_avg"] = loglog_slope(ns, avg);
            summary["exponent_worst"] = loglog_slope(ns, worst);
        }
    }
    write_json(r.out / "complexity.json", summary);
    write_resolved(r, "complexity");
    return kOk;
}

int cmd_simulate(const Globals &g) {
    Resolved r = load(g);
    const RunConfig &c = r.config;
    if (c.scheme == SchemeName::FourPoint) {
        throw ConfigError({"simulate: use the fourpoint subcommand for scheme fourpoint"});
    }
    for (int n : c.sizes) {
        QuenchEnsemble ens = scheme_ensemble(c, n);
        std::string tag = "N" + std::to_string(n);
        r.inputs["ensemble_hash_" + tag] = ensemble_hash(ens);
        Lattice geometry = system_geometry(ens);
        auto nsys = static_cast<Index>(ens.n_system());
        CorrelationMatrix c0 = make_state(c, nsys);
        RealVector x0 = hermitian_to_vec(c0.matrix());
        std::vector<NamedObservable> obs = resolve_observables(c, geometry);
        json report{{"N", n}, {"R", c.repetitions}, {"seed", c.seed}};

        ShotDataset ds;
        json estimates = json::array();
        if (c.truncated && is_local(c)) {
            ds = run_experiment(c0, empty_ancillas(ens), ens, c.repetitions, c.seed);
            for (const auto &o : obs) {
                if (o.a < 0) {
                    throw ConfigError({"truncated inversion supports element observables only"});
                }
                LocalizedInverse loc = truncated_local_map(ens, o.a, c.ell_in, c.ell_out, c.delta);
                EstimateResult e = estimate_observable(ds, loc.bundle, localized_functional(loc, o.a, o.b));
                estimates.push_back(estimate_json(o.name, e, c0.matrix()(o.a, o.b)));
            }
        } else {
            Pipeline p = build_pipeline(ens, pipeline_options(c, true));
            ds = run_experiment(c0, p.ancillas, p.ensemble, p.propagators, c.repetitions, c.seed);
            for (const auto &o : obs) {
                EstimateResult e = estimate_observable(ds, p.bundle, o.functional);
                double im = 0;
                double re = truth_value(o.functional, x0, &im);
                json ej = estimate_json(o.name, e, {re, im});
                ej["predicted_stderr"] =
                    std::sqrt(predicted_variance(p.bundle, o.functional) / static_cast<double>(c.repetitions));
                estimates.push_back(ej);
            }
            if (wants_full_matrix(c)) {
                CorrelationEstimate full = estimate_correlation_matrix(ds, p.bundle);
                write_matrix(r.out / ("estimate_" + tag + ".gtm"), full.matrix);
                report["full_matrix_max_abs_error"] = (full.matrix - c0.matrix()).cwiseAbs().maxCoeff();
            }
        }
        write_matrix(r.out / ("truth_" + tag + ".gtm"), c0.matrix());
        write_dataset(r.out / ("dataset_" + tag + ".csv"), ds, {{"N", n}, {"scheme", to_string(c.scheme)}});
        report["estimates"] = estimates;
        write_json(r.out / ("estimates_" + tag + ".json"), report);
        std::cerr << "simulate N=" << n << " R=" << c.repetitions << "\n";
    }
    write_resolved(r, "simulate");
    return kOk;
}

int cmd_estimate(const Globals &g, const std::string &dataset_path) {
    Resolved r = load(g);
    const RunConfig &c = r.config;
    ShotDataset ds = read_dataset(dataset_path);
    for (int n : c.sizes) {
        QuenchEnsemble ens = scheme_ensemble(c, n);
        if (ensemble_hash(ens) != ds.ensemble_hash) {
            continue;
        }
        r.inputs["dataset"] = dataset_path;
        r.inputs["ensemble_hash"] = ds.ensemble_hash;
        Lattice geometry = system_geometry(ens);
        std::vector<NamedObservable> obs = resolve_observables(c, geometry);
        Pipeline p = build_pipeline(std::move(ens), pipeline_options(c, true));
        json report{{"N", n}, {"R", ds.size()}};
        json estimates = json::array();
        for (const auto &o : obs) {
            EstimateResult e = estimate_observable(ds, p.bundle, o.functional);
            estimates.push_back({{"observable", o.name},
                                 {"value", {e.value.real(), e.value.imag()}},
                                 {"stderr", e.standard_error()},
                                 {"R", e.r_used}});
        }
        if (wants_full_matrix(c)) {
            CorrelationEstimate full = estimate_correlation_matrix(ds, p.bundle);
            write_matrix(r.out / "estimate.gtm", full.matrix);
        }
        report["estimates"] = estimates;
        write_json(r.out / "estimates.json", report);
        write_resolved(r, "estimate");
        return kOk;
    }
    throw std::invalid_argument("no configured size reproduces the dataset's ensemble hash " + ds.ensemble_hash);
}

int cmd_robustness(const Globals &g) {
    Resolved r = load(g);
    if (r.config.scheme == SchemeName::FourPoint) {
        throw ConfigError({"robustness: scheme must be local1d, local2d or global"});
    }
    RobustnessSweep sweep = robustness_sweep(robustness_config(r.config));
    CsvWriter csv(r.out / "robustness.csv");
    csv.header({"N", "nu", "trial", "h", "phi", "metric", "spectral_radius"});
    for (const auto &row : sweep.rows) {
        csv.cell(static_cast<long long>(row.n)).cell(row.nu).cell(static_cast<long long>(row.trial));
        csv.cell(row.h).cell(row.phi).cell(row.metric).cell(row.radius);
        csv.end_row();
    }
    write_json(r.out / "robustness_summary.json", summary_json(sweep));
    write_resolved(r, "robustness");
    return kOk;
}

int cmd_fourpoint(const Globals &g) {
    Resolved r = load(g);
    const RunConfig &c = r.config;
    int n = c.sizes.front();
    QuenchEnsemble ens = local_scheme_ensemble(build_lattice(LatticeKind::Chain, n, 1), c.local);
    r.inputs["ensemble_hash"] = ensemble_hash(ens);
    FourPointBundle bundle = forward_map_4(ens, c.delta);
    CorrelationMatrix c0 = make_state(c, n);
    ComplexVector truth = gaussian_fourpoint(c0.matrix());
    ShotDataset ds = run_experiment(c0, empty_ancillas(ens), ens, c.repetitions, c.seed);
    json estimates = json::array();
    for (Index j = 0; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
            EstimateResult e = estimate_fourpoint(ds, bundle, density_density_functional(n, j, k));
            estimates.push_back(estimate_json("n" + std::to_string(j) + "n" + std::to_string(k), e,
                                              truth[full_index(n, j, j, k, k)]));
        }
    }
    auto [a, b] = middle_bond(build_lattice(LatticeKind::Chain, n, 1));
    EstimateResult e = estimate_fourpoint(ds, bundle, two_point_functional(n, a, b));
    estimates.push_back(estimate_json("middle_current", e, c0.matrix()(a, b)));
    json report{{"N", n}, {"R", c.repetitions}, {"rank", bundle.inverse.rank()},
                {"dimension", bundle.inverse.dimension()}, {"estimates", estimates}};
    write_json(r.out / "fourpoint.json", report);
    write_dataset(r.out / "dataset.csv", ds, {{"N", n}, {"scheme", "fourpoint"}});
    write_resolved(r, "fourpoint");
    return kOk;
}

int cmd_rank_check(const Globals &g, double threshold) {
    Resolved r = load(g);
    const RunConfig &c = r.config;
    CsvWriter csv(r.out / "rank_check.csv");
    csv.header({"N", "rank", "required", "deficiency"});
    json rows = json::array();
    for (int n : c.sizes) {
        QuenchEnsemble ens = c.scheme == SchemeName::FourPoint
                                 ? local_scheme_ensemble(build_lattice(LatticeKind::Chain, n, 1), c.local)
                                 : scheme_ensemble(c, n);
        r.inputs["ensemble_hash_N" + std::to_string(n)] = ensemble_hash(ens);
        Lattice geometry = system_geometry(ens);
        std::vector<NamedObservable> obs = resolve_observables(c, geometry);
        std::vector<ObservableFunctional> fs;
        for (const auto &o : obs) {
            fs.push_back(o.functional);
        }
        MapOptions mo;
        mo.memory_cap_bytes = pipeline_options(c, false).map.memory_cap_bytes;
        MeasurementMap map = stack_forward(ens, empty_ancillas(ens), mo);
        RankReport rep = rank_check(map, threshold, fs);
        csv.cell(static_cast<long long>(n)).cell(static_cast<long long>(rep.rank));
        csv.cell(static_cast<long long>(rep.required)).cell(static_cast<long long>(rep.deficiency()));
        csv.end_row();
        json unrec = json::object();
        for (std::size_t i = 0; i < obs.size(); ++i) {
            unrec[obs[i].name] = rep.unrecoverable[i];
        }
        rows.push_back({{"N", n},
                        {"rank", rep.rank},
                        {"required", rep.required},
                        {"full_rank", rep.full_rank()},
                        {"unrecoverable", unrec}});
        std::cerr << "rank-check N=" << n << " rank=" << rep.rank << "/" << rep.required << "\n";
    }
    write_json(r.out / "rank_check.json", {{"threshold", threshold}, {"rows", rows}});
    write_resolved(r, "rank-check");
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gaussian-state tomography from quench ensembles"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Run configuration (JSON)");
    app.add_option("--out", g.out_dir, "Output directory (overrides config)");
    app.add_option("--seed", g.seed, "Experiment seed (overrides config)");
    app.add_option("--threads", g.threads, "Worker thread cap (0 = hardware)");

    std::string dataset;
    double threshold = 1e-10;
    auto *complexity = app.add_subcommand("complexity", "Sample-complexity scaling table");
    auto *simulate = app.add_subcommand("simulate", "Simulate an experiment and estimate observables");
    auto *estimate = app.add_subcommand("estimate", "Estimate observables from an existing dataset");
    estimate->add_option("--dataset", dataset, "Dataset CSV")->required();
    auto *robustness = app.add_subcommand("robustness", "Bias under miscalibrated Hamiltonians");
    auto *fourpoint = app.add_subcommand("fourpoint", "Two- and four-point estimation");
    auto *rank = app.add_subcommand("rank-check", "Numerical rank of the measurement map");
    rank->add_option("--threshold", threshold, "Relative singular-value threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    set_max_threads(g.threads);
    try {
        if (*complexity) {
            return cmd_complexity(g);
        }
        if (*simulate) {
            return cmd_simulate(g);
        }
        if (*estimate) {
            return cmd_estimate(g, dataset);
        }
        if (*robustness) {
            return cmd_robustness(g);
        }
        if (*fourpoint) {
            return cmd_fourpoint(g);
        }
        if (*rank) {
            return cmd_rank_check(g, threshold);
        }
    } catch (const ConfigError &e) {
        for (const auto &d : e.diagnostics()) {
            std::cerr << "config error: " << d << "\n";
        }
        return kConfig;
    } catch (const RankDeficientError &e) {
        std::cerr << "rank deficient: " << e.what() << " (rank " << e.rank() << " of " << e.required() << ")\n";
        return kRank;
    } catch (const ResourceError &e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}
