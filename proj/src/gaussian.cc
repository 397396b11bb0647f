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

#include "gtomo/gaussian.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "gtomo/errors.h"
#include "gtomo/random.h"

namespace gtomo {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;

}  // namespace

Index real_slot(Index n, Index a, Index b) {
    if (a == b) {
        throw std::invalid_argument("real_slot needs a != b");
    }
    if (a > b) {
        std::swap(a, b);
    }
    return n + 2 * pair_index(n, a, b);
}

Index imag_slot(Index n, Index a, Index b) {
    return real_slot(n, a, b) + 1;
}

SlotInfo slot_info(Index n, Index slot) {
    if (slot < n) {
        return {static_cast<int>(slot), static_cast<int>(slot), SlotPart::Diagonal};
    }
    Index p = (slot - n) / 2;
    Index a = 0;
    while (p >= n - 1 - a) {
        p -= n - 1 - a;
        ++a;
    }
    return {static_cast<int>(a), static_cast<int>(a + 1 + p), (slot - n) % 2 == 0 ? SlotPart::Real : SlotPart::Imag};
}

RealVector hermitian_to_vec(const ComplexMatrix &c, double tol) {
    if (c.rows() != c.cols()) {
        throw std::invalid_argument("hermitian_to_vec needs a square matrix");
    }
    if (c.size() > 0 && (c - c.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("hermitian_to_vec: matrix is not Hermitian");
    }
    Index n = c.rows();
    RealVector x(n * n);
    for (Index a = 0; a < n; ++a) {
        x[a] = c(a, a).real();
    }
    Index slot = n;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            std::complex<double> z = 0.5 * (c(a, b) + std::conj(c(b, a)));
            x[slot++] = kSqrt2 * z.real();
            x[slot++] = kSqrt2 * z.imag();
        }
    }
    return x;
}

ComplexMatrix vec_to_hermitian(const RealVector &x) {
    auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(x.size()))));
    if (n * n != x.size()) {
        throw std::invalid_argument("vec_to_hermitian: length is not a square");
    }
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (Index a = 0; a < n; ++a) {
        c(a, a) = x[a];
    }
    Index slot = n;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            std::complex<double> z(x[slot] * kInvSqrt2, x[slot + 1] * kInvSqrt2);
            c(a, b) = z;
            c(b, a) = std::conj(z);
            slot += 2;
        }
    }
    return c;
}

ObservableFunctional observable_functional(const ComplexMatrix &o) {
    if (o.rows() != o.cols()) {
        throw std::invalid_argument("observable coefficients must be square");
    }
    Index n = o.rows();
    ComplexVector w(n * n);
    for (Index a = 0; a < n; ++a) {
        w[a] = o(a, a);
    }
    const std::complex<double> i_unit(0.0, 1.0);
    Index slot = n;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            w[slot++] = (o(a, b) + o(b, a)) * kInvSqrt2;
            w[slot++] = i_unit * (o(a, b) - o(b, a)) * kInvSqrt2;
        }
    }
    return {w.real(), w.imag()};
}

ObservableFunctional matrix_element_functional(Index n, Index j, Index k) {
    ComplexMatrix o = ComplexMatrix::Zero(n, n);
    o(j, k) = 1.0;
    return observable_functional(o);
}

std::vector<Index> slots_supported_on(Index n, std::span<const int> sites) {
    std::vector<int> sorted(sites.begin(), sites.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Index> out;
    for (int a : sorted) {
        out.push_back(diagonal_slot(a));
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            out.push_back(real_slot(n, sorted[i], sorted[j]));
            out.push_back(imag_slot(n, sorted[i], sorted[j]));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CorrelationMatrix::CorrelationMatrix(ComplexMatrix m) : data_(std::move(m)) {
    if (data_.rows() != data_.cols()) {
        throw std::invalid_argument("correlation matrix must be square");
    }
    if (data_.size() > 0 && (data_ - data_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("correlation matrix must be Hermitian");
    }
}

CorrelationMatrix CorrelationMatrix::zeros(Index n) {
    return CorrelationMatrix(ComplexMatrix::Zero(n, n));
}

bool CorrelationMatrix::is_physical(double tol) const {
    if (size() == 0) {
        return true;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(data_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol && es.eigenvalues().maxCoeff() <= 1.0 + tol;
}

CorrelationMatrix direct_sum(const CorrelationMatrix &system, const CorrelationMatrix &ancilla) {
    Index n = system.size();
    Index m = ancilla.size();
    ComplexMatrix out = ComplexMatrix::Zero(n + m, n + m);
    out.topLeftCorner(n, n) = system.matrix();
    out.bottomRightCorner(m, m) = ancilla.matrix();
    return CorrelationMatrix(std::move(out));
}

CorrelationMatrix embed_correlations(const CorrelationMatrix &system,
                                     std::span<const int> system_sites,
                                     const CorrelationMatrix &ancilla,
                                     std::span<const int> ancilla_sites,
                                     Index n_total) {
    if (static_cast<Index>(system_sites.size()) != system.size() ||
        static_cast<Index>(ancilla_sites.size()) != ancilla.size()) {
        throw std::invalid_argument("embed_correlations: site lists do not match block sizes");
    }
    ComplexMatrix out = ComplexMatrix::Zero(n_total, n_total);
    for (std::size_t a = 0; a < system_sites.size(); ++a) {
        for (std::size_t b = 0; b < system_sites.size(); ++b) {
            out(system_sites[a], system_sites[b]) = system.matrix()(a, b);
        }
    }
    for (std::size_t a = 0; a < ancilla_sites.size(); ++a) {
        for (std::size_t b = 0; b < ancilla_sites.size(); ++b) {
            out(ancilla_sites[a], ancilla_sites[b]) = ancilla.matrix()(a, b);
        }
    }
    return CorrelationMatrix(std::move(out));
}

CorrelationMatrix evolve_correlations(const CorrelationMatrix &c, const ComplexMatrix &u) {
    if (u.rows() != c.size() || u.cols() != c.size()) {
        throw std::invalid_argument("evolve_correlations: dimension mismatch");
    }
    ComplexMatrix out = u.conjugate() * c.matrix() * u.transpose();
    // Restore exact Hermiticity lost to rounding.
    out = 0.5 * (out + out.adjoint()).eval();
    return CorrelationMatrix(std::move(out));
}

ComplexMatrix haar_unitary(Index n, uint64_t seed) {
    std::mt19937_64 rng = make_stream(seed, 0);
    ComplexMatrix z(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            double re = standard_normal(rng);
            double im = standard_normal(rng);
            z(i, j) = std::complex<double>(re, im) * kInvSqrt2;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        std::complex<double> d = r(j, j);
        double mag = std::abs(d);
        q.col(j) *= mag > 0 ? d / mag : 1.0;
    }
    return q;
}

CorrelationMatrix random_gaussian_state(Index n, double filling, uint64_t seed) {
    if (!(filling >= 0.0 && filling <= 1.0)) {
        throw std::invalid_argument("filling must lie in [0, 1]");
    }
    std::mt19937_64 rng = make_stream(seed, 1);
    RealVector lambda(n);
    for (Index k = 0; k < n; ++k) {
        lambda[k] = uniform01(rng);
    }
    double mean = n > 0 ? lambda.mean() : 0.0;
    // Shrink toward 0 or toward 1, whichever keeps the spectrum inside [0, 1].
    if (filling <= mean) {
        lambda *= mean > 0 ? filling / mean : 0.0;
    } else {
        double hole = 1.0 - mean;
        RealVector holes = RealVector::Ones(n) - lambda;
        holes *= hole > 0 ? (1.0 - filling) / hole : 0.0;
        lambda = RealVector::Ones(n) - holes;
    }
    ComplexMatrix v = haar_unitary(n, seed);
    ComplexMatrix c = v * lambda.cast<std::complex<double>>().asDiagonal() * v.adjoint();
    c = 0.5 * (c + c.adjoint()).eval();
    return CorrelationMatrix(std::move(c));
}

SingleParticleHamiltonian build_hamiltonian(const Lattice &lattice, double h, double phi, double theta_l) {
    auto n = static_cast<Index>(lattice.size());
    SingleParticleHamiltonian out{RealMatrix::Zero(n, n), h, phi, theta_l};
    for (auto [a, b] : lattice.edges()) {
        out.matrix(a, b) = -1.0;
        out.matrix(b, a) = -1.0;
    }
    const double kx = 2.0 * std::numbers::pi * std::cos(theta_l);
    const double ky = lattice.kind() == LatticeKind::Grid ? 2.0 * std::numbers::pi * std::sin(theta_l) : 0.0;
    for (Index i = 0; i < n; ++i) {
        SiteCoord c = lattice.coord(static_cast<int>(i));
        out.matrix(i, i) = h * std::cos(kx * c.x + ky * c.y + phi);
    }
    return out;
}

SpectralPropagator::SpectralPropagator(const RealMatrix &h) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on single-particle Hamiltonian");
    }
    energies_ = es.eigenvalues();
    modes_ = es.eigenvectors();
}

ComplexMatrix SpectralPropagator::at(double t) const {
    ComplexVector phases(energies_.size());
    for (Index k = 0; k < energies_.size(); ++k) {
        phases[k] = std::polar(1.0, -t * energies_[k]);
    }
    ComplexMatrix left = modes_.cast<std::complex<double>>() * phases.asDiagonal();
    return left * modes_.transpose().cast<std::complex<double>>();
}

ComplexMatrix SpectralPropagator::rows_at(double t, std::span<const int> rows) const {
    Index n = energies_.size();
    ComplexMatrix left(static_cast<Index>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (Index k = 0; k < n; ++k) {
            left(static_cast<Index>(r), k) = modes_(rows[r], k) * std::polar(1.0, -t * energies_[k]);
        }
    }
    return left * modes_.transpose().cast<std::complex<double>>();
}

ComplexMatrix propagator(const RealMatrix &h, double t) {
    return SpectralPropagator(h).at(t);
}

}  // namespace gtomo
