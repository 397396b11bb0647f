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

#ifndef GTOMO_GAUSSIAN_H
#define GTOMO_GAUSSIAN_H

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gtomo/lattice.h"

namespace gtomo {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Real orthonormal basis of N x N Hermitian matrices.
//
// Slot a (0 <= a < N) holds E_aa. Each pair a < b, enumerated
// lexicographically as p, owns slots N + 2p ((E_ab + E_ba)/sqrt2) and
// N + 2p + 1 (i(E_ab - E_ba)/sqrt2). Coordinates are x_B = Tr[B C], so for
// a < b: C_ab = (x_{N+2p} + i x_{N+2p+1}) / sqrt2.
// ---------------------------------------------------------------------------

enum class SlotPart { Diagonal, Real, Imag };

struct SlotInfo {
    int a = 0;
    int b = 0;
    SlotPart part = SlotPart::Diagonal;
};

inline Index basis_dimension(Index n) {
    return n * n;
}
inline Index pair_index(Index n, Index a, Index b) {
    return a * n - a * (a + 1) / 2 + (b - a - 1);
}
inline Index diagonal_slot(Index a) {
    return a;
}
/// Requires a != b; order is normalized.
Index real_slot(Index n, Index a, Index b);
Index imag_slot(Index n, Index a, Index b);
SlotInfo slot_info(Index n, Index slot);

/// Throws std::invalid_argument if c deviates from Hermitian by more than tol (max-abs).
RealVector hermitian_to_vec(const ComplexMatrix &c, double tol = 1e-10);
ComplexMatrix vec_to_hermitian(const RealVector &x);

/// Linear functional value = re.x + i im.x on basis coordinates x.
struct ObservableFunctional {
    RealVector re;
    RealVector im;
    bool is_real() const {
        return im.size() == 0 || im.isZero(0.0);
    }
};

/// Functional for <O> = sum_ij o_ij C_ij. Hermitian o gives a real functional.
ObservableFunctional observable_functional(const ComplexMatrix &o);
/// Functional for the single element C_jk = <c_j^dag c_k>.
ObservableFunctional matrix_element_functional(Index n, Index j, Index k);

/// Basis slots of correlations C_ab with both a and b drawn from `sites`,
/// where `sites` are positions in the column index set (0..n-1).
std::vector<Index> slots_supported_on(Index n, std::span<const int> sites);

// ---------------------------------------------------------------------------
// Correlation matrices C_ij = Tr[rho c_i^dag c_j].
// ---------------------------------------------------------------------------

class CorrelationMatrix {
   public:
    CorrelationMatrix() = default;
    /// Throws std::invalid_argument if m is not square or not Hermitian to 1e-10.
    explicit CorrelationMatrix(ComplexMatrix m);
    static CorrelationMatrix zeros(Index n);

    const ComplexMatrix &matrix() const {
        return data_;
    }
    Index size() const {
        return data_.rows();
    }
    /// Hermitian with spectrum in [-tol, 1 + tol].
    bool is_physical(double tol = 1e-9) const;

   private:
    ComplexMatrix data_;
};

CorrelationMatrix direct_sum(const CorrelationMatrix &system, const CorrelationMatrix &ancilla);

/// Places system and ancilla blocks at the given lattice sites of an n_total matrix.
CorrelationMatrix embed_correlations(const CorrelationMatrix &system,
                                     std::span<const int> system_sites,
                                     const CorrelationMatrix &ancilla,
                                     std::span<const int> ancilla_sites,
                                     Index n_total);

/// C_s = U^* C U^T.
CorrelationMatrix evolve_correlations(const CorrelationMatrix &c, const ComplexMatrix &u);

/// V diag(lambda) V^dag with Haar V and eigenvalues in [0,1] of mean `filling`.
CorrelationMatrix random_gaussian_state(Index n, double filling, uint64_t seed);

ComplexMatrix haar_unitary(Index n, uint64_t seed);

// ---------------------------------------------------------------------------
// Hopping Hamiltonian with quasiperiodic potential, unit hopping amplitude.
// ---------------------------------------------------------------------------

struct SingleParticleHamiltonian {
    RealMatrix matrix;
    double h = 0.0;
    double phi = 0.0;
    double theta_l = 0.0;
};

/// Diagonal h cos(k.i + phi) with k = 2pi(cos theta, sin theta) on grids and
/// k = 2pi cos theta on chains; -1 on every nearest-neighbor bond.
SingleParticleHamiltonian build_hamiltonian(const Lattice &lattice, double h, double phi, double theta_l);

/// exp(-i t H) for a real-symmetric H, diagonalized once and evaluated at many t.
class SpectralPropagator {
   public:
    /// Throws NumericalError if the eigensolver fails.
    explicit SpectralPropagator(const RealMatrix &h);

    ComplexMatrix at(double t) const;
    /// Rows `rows` of exp(-i t H).
    ComplexMatrix rows_at(double t, std::span<const int> rows) const;
    const RealVector &energies() const {
        return energies_;
    }

   private:
    RealVector energies_;
    RealMatrix modes_;
};

ComplexMatrix propagator(const RealMatrix &h, double t);

}  // namespace gtomo

#endif
