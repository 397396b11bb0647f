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

#ifndef GTOMO_COMPLEXITY_H
#define GTOMO_COMPLEXITY_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "gtomo/gaussian.h"
#include "gtomo/inverse.h"
#include "gtomo/lattice.h"

namespace gtomo {

struct ObservableVariance {
    double sigma2 = 0.0;
    /// Norm of the part of o that L cannot resolve; zero when L is invertible.
    double unrecoverable = 0.0;
};

/// (o|L^-1|o) by a Cholesky solve; falls back to an eigendecomposition when L is singular.
ObservableVariance sigma_observable(const RealMatrix &l, const RealVector &o);
/// Sum over the Hermitian parts of a complex functional.
ObservableVariance sigma_observable(const RealMatrix &l, const ObservableFunctional &o);

/// 1 / lambda_min(L) by inverse iteration; +inf when L is not positive definite.
double sigma_worst(const RealMatrix &l);
/// tr(L^-1) / dim; +inf when L is not positive definite.
double sigma_avg(const RealMatrix &l);

/// (o|G W G^T|o).
double predicted_variance(const RealMatrix &g, const RealMatrix &w, const RealVector &o);
double predicted_variance(const InverseBundle &bundle, const ObservableFunctional &o);

/// Largest per-shot variance over unit observables supported on a radius-ell
/// Chebyshev patch, maximized over patch centers.
struct PatchVariance {
    double worst = 0.0;
    int center = 0;
    std::vector<double> per_center;
};
PatchVariance worst_patch_variance(const RealMatrix &covariance,
                                   const Lattice &lattice,
                                   std::span<const int> column_sites,
                                   int ell = 1);

/// ceil(sigma2 / eps^2), or ceil(sigma2 / (eps^2 p_fail)) for a Chebyshev guarantee.
uint64_t samples_required(double sigma2, double epsilon, std::optional<double> p_fail = std::nullopt);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

enum class MetricKind { Observable, Worst, Average };
std::string to_string(MetricKind kind);

struct ComplexityReport {
    MetricKind kind = MetricKind::Observable;
    std::string label;
    double sigma2 = 0.0;
    double epsilon = 0.0;
    uint64_t r_required = 0;
};

ComplexityReport make_report(MetricKind kind, std::string label, double sigma2, double epsilon);
nlohmann::json to_json(const ComplexityReport &report);

}  // namespace gtomo

#endif
