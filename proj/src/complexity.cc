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

#include "gtomo/complexity.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gtomo/random.h"

namespace gtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_square(const RealMatrix &l) {
    if (l.rows() != l.cols()) {
        throw std::invalid_argument("Gram matrix must be square");
    }
}

}  // namespace

ObservableVariance sigma_observable(const RealMatrix &l, const RealVector &o) {
    check_square(l);
    if (o.size() != l.rows()) {
        throw std::invalid_argument("observable dimension does not match Gram matrix");
    }
    Eigen::LLT<RealMatrix> llt(l);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-13) {
        return {o.dot(llt.solve(o)), 0.0};
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(l);
    const RealVector &ev = es.eigenvalues();
    double cut = 1e-13 * std::max(ev.maxCoeff(), 0.0);
    RealVector coeff = es.eigenvectors().transpose() * o;
    ObservableVariance out;
    double lost = 0.0;
    for (Index k = 0; k < ev.size(); ++k) {
        if (ev[k] > cut) {
            out.sigma2 += coeff[k] * coeff[k] / ev[k];
        } else {
            lost += coeff[k] * coeff[k];
        }
    }
    out.unrecoverable = std::sqrt(lost);
    return out;
}

ObservableVariance sigma_observable(const RealMatrix &l, const ObservableFunctional &o) {
    ObservableVariance out = sigma_observable(l, o.re);
    if (o.im.size() == o.re.size() && !o.is_real()) {
        ObservableVariance im = sigma_observable(l, o.im);
        out.sigma2 += im.sigma2;
        out.unrecoverable = std::hypot(out.unrecoverable, im.unrecoverable);
    }
    return out;
}

double sigma_worst(const RealMatrix &l) {
    check_square(l);
    Index n = l.rows();
    if (n == 0) {
        return 0.0;
    }
    Eigen::LLT<RealMatrix> llt(l);
    if (llt.info() != Eigen::Success) {
        return kInf;
    }
    RealVector x(n);
    uint64_t state = 0x5eed;
    for (Index i = 0; i < n; ++i) {
        state = splitmix64(state);
        x[i] = 1.0 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    x.normalize();
    double mu = 0.0;
    for (int iter = 0; iter < 1000; ++iter) {
        RealVector y = llt.solve(x);
        double next = x.dot(y);
        double norm = y.norm();
        if (!std::isfinite(norm) || norm == 0.0) {
            return kInf;
        }
        x = y / norm;
        if (iter > 0 && std::abs(next - mu) <= 1e-13 * std::abs(next)) {
            mu = next;
            break;
        }
        mu = next;
    }
    // One more Rayleigh quotient on the converged direction.
    RealVector y = llt.solve(x);
    return std::max(mu, x.dot(y));
}

double sigma_avg(const RealMatrix &l) {
    check_square(l);
    Index n = l.rows();
    if (n == 0) {
        return 0.0;
    }
    Eigen::LLT<RealMatrix> llt(l);
    if (llt.info() != Eigen::Success) {
        return kInf;
    }
    RealMatrix inv = llt.solve(RealMatrix::Identity(n, n));
    return inv.trace() / static_cast<double>(n);
}

double predicted_variance(const RealMatrix &g, const RealMatrix &w, const RealVector &o) {
    RealVector go = g.transpose() * o;
    return go.dot(w * go);
}

double predicted_variance(const InverseBundle &bundle, const ObservableFunctional &o) {
    if (bundle.covariance.size() == 0) {
        throw std::logic_error("inverse bundle carries no covariance");
    }
    double v = o.re.dot(bundle.covariance * o.re);
    if (o.im.size() == o.re.size()) {
        v += o.im.dot(bundle.covariance * o.im);
    }
    return v;
}

PatchVariance worst_patch_variance(const RealMatrix &covariance,
                                   const Lattice &lattice,
                                   std::span<const int> column_sites,
                                   int ell) {
    auto n = static_cast<Index>(column_sites.size());
    if (covariance.rows() != n * n) {
        throw std::invalid_argument("covariance does not match the column basis");
    }
    std::vector<int> position(lattice.size(), -1);
    for (Index a = 0; a < n; ++a) {
        position[column_sites[a]] = static_cast<int>(a);
    }
    PatchVariance out;
    out.per_center.resize(static_cast<std::size_t>(n));
    for (Index c = 0; c < n; ++c) {
        std::vector<int> local;
        for (int site : chebyshev_patch(lattice, column_sites[c], ell)) {
            if (position[site] >= 0) {
                local.push_back(position[site]);
            }
        }
        std::vector<Index> slots = slots_supported_on(n, local);
        auto k = static_cast<Index>(slots.size());
        RealMatrix sub(k, k);
        for (Index i = 0; i < k; ++i) {
            for (Index j = 0; j < k; ++j) {
                sub(i, j) = covariance(slots[i], slots[j]);
            }
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(sub, Eigen::EigenvaluesOnly);
        double v = es.eigenvalues().maxCoeff();
        out.per_center[static_cast<std::size_t>(c)] = v;
        if (c == 0 || v > out.worst) {
            out.worst = v;
            out.center = column_sites[c];
        }
    }
    return out;
}

uint64_t samples_required(double sigma2, double epsilon, std::optional<double> p_fail) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (p_fail && !(*p_fail > 0.0 && *p_fail < 1.0)) {
        throw std::invalid_argument("p_fail must lie in (0, 1)");
    }
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("variance must be non-negative");
    }
    if (!std::isfinite(sigma2)) {
        return std::numeric_limits<uint64_t>::max();
    }
    double r = sigma2 / (epsilon * epsilon);
    if (p_fail) {
        r /= *p_fail;
    }
    // Absorb rounding in sigma2 / eps^2 so exact quotients are not bumped up.
    double count = std::ceil(r * (1.0 - 1e-12));
    if (count >= 1.8e19) {
        return std::numeric_limits<uint64_t>::max();
    }
    return static_cast<uint64_t>(count);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("slope fit needs at least two matching points");
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) {
            throw std::invalid_argument("slope fit needs positive data");
        }
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Observable:
            return "observable";
        case MetricKind::Worst:
            return "worst";
        case MetricKind::Average:
            return "average";
    }
    return "unknown";
}

ComplexityReport make_report(MetricKind kind, std::string label, double sigma2, double epsilon) {
    return {kind, std::move(label), sigma2, epsilon, samples_required(sigma2, epsilon)};
}

nlohmann::json to_json(const ComplexityReport &report) {
    nlohmann::json j{{"kind", to_string(report.kind)},
                     {"label", report.label},
                     {"epsilon", report.epsilon},
                     {"R_required", report.r_required}};
    if (std::isfinite(report.sigma2)) {
        j["sigma2"] = report.sigma2;
    } else {
        j["sigma2"] = "inf";
    }
    return j;
}

}  // namespace gtomo
