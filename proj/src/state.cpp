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

#include "ricco/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ricco {

namespace {

std::size_t log2_exact(std::size_t dim, const char *what) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(dim) +
                                    " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

void check_wires(std::size_t n, std::span<const std::size_t> wires, const char *what) {
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= n) {
            throw std::invalid_argument(std::string(what) + ": wire " + std::to_string(wires[i]) +
                                        " out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[i] == wires[j]) {
                throw std::invalid_argument(std::string(what) + ": repeated wire");
            }
        }
    }
}

/// Index within the sub-register `wires` (wires[0] = MSB) of full index x.
std::size_t gather(std::size_t x, std::size_t n, std::span<const std::size_t> wires) {
    std::size_t out = 0;
    for (const auto w : wires) {
        out = (out << 1U) | ((x >> wire_bit(n, w)) & 1U);
    }
    return out;
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> wires) {
    std::vector<std::size_t> rest;
    for (std::size_t w = 0; w < n; ++w) {
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) {
            rest.push_back(w);
        }
    }
    return rest;
}

} // namespace

StateVector::StateVector(std::size_t n) : n_(n), amps_(std::size_t{1} << n, cplx{0.0, 0.0}) {
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    StateVector s;
    s.n_ = log2_exact(amps.size(), "StateVector");
    s.amps_ = std::move(amps);
    return s;
}

StateVector StateVector::basis(std::size_t n, std::size_t index) {
    StateVector s(n);
    if (index >= s.dim()) {
        throw std::invalid_argument("basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

void StateVector::apply(const CMatrix &m, std::span<const std::size_t> wires) {
    check_wires(n_, wires, "apply");
    const std::size_t k = wires.size();
    const std::size_t dim = std::size_t{1} << k;
    if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
        throw std::invalid_argument("apply: matrix does not match wire count");
    }
    std::size_t mask = 0;
    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t bit = std::size_t{1} << wire_bit(n_, wires[j]);
        mask |= bit;
        for (std::size_t t = 0; t < dim; ++t) {
            if ((t >> (k - 1 - j)) & 1U) {
                offsets[t] |= bit;
            }
        }
    }
    std::vector<cplx> in(dim);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t t = 0; t < dim; ++t) {
            in[t] = amps_[base | offsets[t]];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            cplx acc{0.0, 0.0};
            for (std::size_t c = 0; c < dim; ++c) {
                acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
            }
            amps_[base | offsets[r]] = acc;
        }
    }
}

void StateVector::apply(const GateOp &op, const Bindings &bindings) {
    apply(gate_matrix(op, bindings), op.wires);
}

cplx StateVector::inner(const StateVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
        throw std::invalid_argument("DensityMatrix: matrix is not square");
    }
    n_ = log2_exact(static_cast<std::size_t>(rho_.rows()), "DensityMatrix");
}

DensityMatrix DensityMatrix::from_state(const StateVector &psi) {
    CVector v(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = psi[i];
    }
    return DensityMatrix(v * v.adjoint());
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

bool DensityMatrix::is_valid(double tol) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    if (std::abs(rho_.trace() - cplx{1.0, 0.0}) > tol) {
        return false;
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

StateVector simulate(const Circuit &circuit, const Bindings &bindings,
                     const std::optional<StateVector> &initial,
                     const std::optional<AngleShift> &shift) {
    StateVector psi = initial ? *initial : StateVector(circuit.n_wires());
    if (psi.n_qubits() != circuit.n_wires()) {
        throw std::invalid_argument("simulate: initial state has " +
                                    std::to_string(psi.n_qubits()) + " qubits, circuit has " +
                                    std::to_string(circuit.n_wires()));
    }
    const auto &ops = circuit.ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto &op = ops[i];
        if (shift && shift->op_index == i) {
            auto angles = op.angles(bindings);
            if (shift->slot >= angles.size()) {
                throw std::invalid_argument("simulate: shift slot out of range");
            }
            angles[shift->slot] += shift->delta;
            psi.apply(gate_matrix(op.kind, angles), op.wires);
        } else {
            psi.apply(op, bindings);
        }
    }
    return psi;
}

DensityMatrix partial_trace(const StateVector &psi, std::span<const std::size_t> keep) {
    const std::size_t n = psi.n_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    check_wires(n, keep, "partial_trace");
    const auto rest = complement(n, keep);
    const auto dk = static_cast<Eigen::Index>(std::size_t{1} << keep.size());
    const auto de = static_cast<Eigen::Index>(std::size_t{1} << rest.size());
    CMatrix amp = CMatrix::Zero(dk, de);
    for (std::size_t x = 0; x < psi.dim(); ++x) {
        amp(static_cast<Eigen::Index>(gather(x, n, keep)),
            static_cast<Eigen::Index>(gather(x, n, rest))) = psi[x];
    }
    return DensityMatrix(amp * amp.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.n_qubits();
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    check_wires(n, keep, "partial_trace");
    const auto rest = complement(n, keep);
    const auto dk = static_cast<Eigen::Index>(std::size_t{1} << keep.size());
    CMatrix out = CMatrix::Zero(dk, dk);
    const auto &m = rho.matrix();
    for (std::size_t x = 0; x < rho.dim(); ++x) {
        for (std::size_t y = 0; y < rho.dim(); ++y) {
            if (gather(x, n, rest) != gather(y, n, rest)) {
                continue;
            }
            out(static_cast<Eigen::Index>(gather(x, n, keep)),
                static_cast<Eigen::Index>(gather(y, n, keep))) +=
                m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        }
    }
    return DensityMatrix(out);
}

std::vector<double> outcome_distribution(const StateVector &psi,
                                         std::span<const std::size_t> wires) {
    const std::size_t n = psi.n_qubits();
    check_wires(n, wires, "outcome_distribution");
    std::vector<double> p(std::size_t{1} << wires.size(), 0.0);
    for (std::size_t x = 0; x < psi.dim(); ++x) {
        p[gather(x, n, wires)] += std::norm(psi[x]);
    }
    return p;
}

std::vector<double> outcome_distribution(const StateVector &psi) {
    std::vector<double> p(psi.dim());
    for (std::size_t x = 0; x < psi.dim(); ++x) {
        p[x] = std::norm(psi[x]);
    }
    return p;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> distribution,
                                         std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("sample_counts: shots must be positive");
    }
    if (distribution.empty()) {
        throw std::invalid_argument("sample_counts: empty distribution");
    }
    std::vector<double> cdf(distribution.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < distribution.size(); ++i) {
        if (distribution[i] < -1e-12 || !std::isfinite(distribution[i])) {
            throw std::invalid_argument("sample_counts: invalid probability");
        }
        acc += std::max(distribution[i], 0.0);
        cdf[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) {
        throw std::invalid_argument("sample_counts: probabilities sum to " + std::to_string(acc));
    }
    std::vector<std::uint64_t> counts(distribution.size(), 0);
    Rng rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
}

} // namespace ricco
