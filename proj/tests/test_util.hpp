// Copyright 2026 The RICCO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared fixtures. The dense helpers here rebuild operators from Kronecker
// products so they stay independent of the library's bit-mask kernels.

#pragma once

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "ricco/pauli.hpp"
#include "ricco/state.hpp"
#include "ricco/types.hpp"

namespace ricco::testing {

inline CMatrix letter_matrix(char c) {
    CMatrix m(2, 2);
    switch (c) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, cplx{0, -1}, cplx{0, 1}, 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m << 1, 0, 0, 1;
        break;
    }
    return m;
}

/// Leftmost letter is the most significant factor.
inline CMatrix kron_word(const std::string &word) {
    CMatrix m = letter_matrix(word[0]);
    for (std::size_t i = 1; i < word.size(); ++i) {
        CMatrix next = Eigen::kroneckerProduct(m, letter_matrix(word[i])).eval();
        m = next;
    }
    return m;
}

inline CVector to_vector(const StateVector &psi) {
    CVector v(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = psi[i];
    }
    return v;
}

inline StateVector random_state(std::size_t n, Rng &rng) {
    std::vector<cplx> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &x : a) {
        x = cplx{rng.normal(), rng.normal()};
        norm += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(std::move(a));
}

/// Mixture of `rank` random pure states with random weights.
inline DensityMatrix random_density(std::size_t n, std::size_t rank, Rng &rng) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    CMatrix rho = CMatrix::Zero(dim, dim);
    double total = 0.0;
    std::vector<double> w(rank);
    for (auto &x : w) {
        x = rng.uniform() + 1e-3;
        total += x;
    }
    for (std::size_t r = 0; r < rank; ++r) {
        const CVector v = to_vector(random_state(n, rng));
        rho += (w[r] / total) * v * v.adjoint();
    }
    return DensityMatrix(rho);
}

inline std::string random_word(std::size_t n, Rng &rng) {
    static const char kLetters[] = "IXYZ";
    std::string w(n, 'I');
    for (auto &c : w) {
        c = kLetters[rng.next() % 4];
    }
    return w;
}

} // namespace ricco::testing
