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
/**
 * @file state.hpp
 * Dense statevector and density-matrix simulation.
 *
 * Qubit ordering: wire 0 is the most significant bit of the basis index.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ricco/circuit.hpp"
#include "ricco/types.hpp"

namespace ricco {

/// Bit of wire `w` in an n-qubit basis index.
constexpr std::size_t wire_bit(std::size_t n, std::size_t w) { return n - 1 - w; }

class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n);

    /// Takes amplitudes as given; length must be a power of two.
    static StateVector from_amplitudes(std::vector<cplx> amps);
    static StateVector basis(std::size_t n, std::size_t index);

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] const std::vector<cplx> &amplitudes() const { return amps_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm() const;

    /// Applies an m-qubit matrix to `wires` (wires[0] = matrix MSB).
    void apply(const CMatrix &m, std::span<const std::size_t> wires);
    void apply(const GateOp &op, const Bindings &bindings);

    [[nodiscard]] cplx inner(const StateVector &other) const; ///< <this|other>

  private:
    std::size_t n_ = 0;
    std::vector<cplx> amps_;
};

class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix rho);
    static DensityMatrix from_state(const StateVector &psi);

    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    [[nodiscard]] const CMatrix &matrix() const { return rho_; }
    [[nodiscard]] double purity() const;

    /// Hermitian, unit trace and eigenvalues >= -tol.
    [[nodiscard]] bool is_valid(double tol = 1e-10) const;

  private:
    std::size_t n_ = 0;
    CMatrix rho_;
};

/// Replaces the angle of parameter slot `slot` of op `op_index` by
/// angle + delta. Used for parameter-shift evaluations.
struct AngleShift {
    std::size_t op_index = 0;
    std::size_t slot = 0;
    double delta = 0.0;
};

/**
 * Runs `circuit` on `initial` (|0...0> when absent). Throws
 * std::invalid_argument on unbound parameters or register mismatch.
 */
StateVector simulate(const Circuit &circuit, const Bindings &bindings = {},
                     const std::optional<StateVector> &initial = std::nullopt,
                     const std::optional<AngleShift> &shift = std::nullopt);

DensityMatrix partial_trace(const StateVector &psi, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep);

/// Marginal outcome probabilities of `wires`; outcome bit order follows `wires`.
std::vector<double> outcome_distribution(const StateVector &psi,
                                         std::span<const std::size_t> wires);
std::vector<double> outcome_distribution(const StateVector &psi);

/// Multinomial histogram of `shots` draws. Throws on shots == 0.
std::vector<std::uint64_t> sample_counts(std::span<const double> distribution,
                                         std::uint64_t shots, std::uint64_t seed);

} // namespace ricco
