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

#include "gtomo/sampler.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gtomo/errors.h"
#include "gtomo/random.h"

namespace gtomo {

namespace {

double checked_probability(std::complex<double> raw, Index site) {
    double p = raw.real();
    if (!(p >= -kProbabilityTolerance && p <= 1.0 + kProbabilityTolerance)) {
        throw NumericalError("conditional occupation probability " + std::to_string(p) + " at site " +
                             std::to_string(site) + " is outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

// Condition the kernel on the outcome at index i; only the trailing block is updated.
void condition(ComplexMatrix &k, Index i, bool occupied, double p) {
    Index rest = k.rows() - i - 1;
    if (rest == 0) {
        return;
    }
    auto tail = k.bottomRightCorner(rest, rest);
    ComplexVector col = k.col(i).tail(rest);
    Eigen::RowVectorXcd row = k.row(i).tail(rest);
    if (occupied) {
        if (p > 0.0) {
            tail.noalias() -= (col / p) * row;
        }
    } else if (p < 1.0) {
        tail.noalias() += (col / (1.0 - p)) * row;
    }
}

}  // namespace

Occupations sample_occupations(const ComplexMatrix &c, std::mt19937_64 &rng) {
    if (c.rows() != c.cols()) {
        throw std::invalid_argument("kernel must be square");
    }
    ComplexMatrix k = c;
    Index n = k.rows();
    Occupations out(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        double p = checked_probability(k(i, i), i);
        bool occupied = uniform01(rng) < p;
        out[static_cast<std::size_t>(i)] = occupied ? 1 : 0;
        condition(k, i, occupied, p);
    }
    return out;
}

Occupations sample_occupations(const CorrelationMatrix &c, std::mt19937_64 &rng) {
    return sample_occupations(c.matrix(), rng);
}

double pattern_probability(const ComplexMatrix &c, std::span<const uint8_t> pattern) {
    if (c.rows() != c.cols() || static_cast<Index>(pattern.size()) != c.rows()) {
        throw std::invalid_argument("pattern length must match kernel size");
    }
    ComplexMatrix k = c;
    double prob = 1.0;
    for (Index i = 0; i < k.rows(); ++i) {
        double p = checked_probability(k(i, i), i);
        bool occupied = pattern[static_cast<std::size_t>(i)] != 0;
        double factor = occupied ? p : 1.0 - p;
        if (factor == 0.0) {
            return 0.0;
        }
        prob *= factor;
        condition(k, i, occupied, p);
    }
    return prob;
}

std::vector<double> pattern_distribution(const ComplexMatrix &c) {
    Index n = c.rows();
    if (n > 20) {
        throw ResourceError("pattern distribution limited to 20 sites");
    }
    std::size_t count = std::size_t{1} << n;
    std::vector<double> out(count);
    Occupations pattern(static_cast<std::size_t>(n));
    for (std::size_t bits = 0; bits < count; ++bits) {
        for (Index i = 0; i < n; ++i) {
            pattern[static_cast<std::size_t>(i)] = (bits >> i) & 1U;
        }
        out[bits] = pattern_probability(c, pattern);
    }
    return out;
}

double void_probability(const ComplexMatrix &c, std::span<const int> sites) {
    auto m = static_cast<Index>(sites.size());
    if (m == 0) {
        return 1.0;
    }
    ComplexMatrix sub(m, m);
    for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) {
            sub(a, b) = (a == b ? 1.0 : 0.0) - c(sites[a], sites[b]);
        }
    }
    return sub.determinant().real();
}

}  // namespace gtomo
