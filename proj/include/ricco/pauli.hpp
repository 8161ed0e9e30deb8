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
 * @file pauli.hpp
 * Pauli strings, real-weighted observables and the Pauli-basis expansion of
 * density matrices.
 *
 * Textual forms: a Pauli string is a bare word over {I,X,Y,Z} whose leftmost
 * letter acts on wire 0. An observable is one `<coefficient> <word>` term per
 * line; `#` starts a comment.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ricco/gates.hpp"
#include "ricco/state.hpp"
#include "ricco/types.hpp"

namespace ricco {

class PauliString {
  public:
    PauliString() = default;
    /// Throws std::invalid_argument on an empty word or a letter outside IXYZ.
    explicit PauliString(std::string letters);
    static PauliString identity(std::size_t n) { return PauliString(std::string(n, 'I')); }

    [[nodiscard]] std::size_t size() const { return letters_.size(); }
    [[nodiscard]] char operator[](std::size_t w) const { return letters_[w]; }
    [[nodiscard]] const std::string &str() const { return letters_; }
    [[nodiscard]] bool is_identity() const;
    /// Only I and Z letters.
    [[nodiscard]] bool is_diagonal() const;
    /// Wires carrying a non-identity letter.
    [[nodiscard]] std::vector<std::size_t> support() const;

    /// Bit masks over the basis index (wire 0 = MSB): letters that flip a bit
    /// (X, Y) and letters that contribute a sign (Z, Y).
    [[nodiscard]] std::uint64_t flip_mask() const;
    [[nodiscard]] std::uint64_t phase_mask() const;
    [[nodiscard]] std::size_t y_count() const;

    auto operator<=>(const PauliString &) const = default;

  private:
    std::string letters_;
};

struct PauliTerm {
    double coeff = 0.0;
    PauliString pauli;
};

/**
 * @brief Real linear combination of equal-length Pauli strings.
 *
 * Kept canonical: duplicate strings are merged and terms are ordered
 * lexicographically by word.
 */
class Observable {
  public:
    Observable() = default;
    explicit Observable(std::vector<PauliTerm> terms);
    Observable(double coeff, PauliString p) : Observable(std::vector<PauliTerm>{{coeff, std::move(p)}}) {}

    [[nodiscard]] const std::vector<PauliTerm> &terms() const { return terms_; }
    [[nodiscard]] std::size_t n_qubits() const { return n_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] double coefficient_l1() const;

  private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

/// Observable line format; throws ParseError naming the line.
Observable parse_observable(std::string_view text);
std::string format_observable(const Observable &obs);

/// Dense 2^n matrix; n <= kDenseQubitLimit.
CMatrix matrix_of(const PauliString &p);
CMatrix matrix_of(const Observable &obs);

/// P|psi>.
StateVector apply_pauli(const PauliString &p, const StateVector &psi);

double expectation(const StateVector &psi, const PauliString &p);
double expectation(const DensityMatrix &rho, const PauliString &p);
double expectation(const StateVector &psi, const Observable &obs);

/// <phi|P|psi> for two states on the same register.
cplx matrix_element(const StateVector &phi, const PauliString &p, const StateVector &psi);

/// All 4^n words of length n in lexicographic order (I < X < Y < Z).
std::vector<PauliString> all_pauli_strings(std::size_t n);
/// The 2^n words over {I, Z}, lexicographic.
std::vector<PauliString> diagonal_pauli_strings(std::size_t n);

/// c_P = Tr(P rho) for every P; throws on an invalid density matrix.
std::map<PauliString, double> decompose(const DensityMatrix &rho);

/// (1/2^n) sum_P c_P P.
CMatrix reconstruct(const std::map<PauliString, double> &coefficients, std::size_t n);

/**
 * Pre-measurement basis changes: H for X, S^dagger then H for Y, nothing for
 * I and Z. After them, <p> is the mean parity of the computational outcomes
 * on p's support.
 */
std::vector<GateOp> measurement_rotation(const PauliString &p);

/// Sum_x dist[x] (-1)^{popcount(x & mask)}.
double parity_expectation(std::span<const double> distribution, std::uint64_t mask);

} // namespace ricco
