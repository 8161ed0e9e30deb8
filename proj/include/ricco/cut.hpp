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
 * @file cut.hpp
 * Reconstruction of uncut expectation values from fragment executions.
 *
 * For a cut on k wires and a term O = O_A (x) O_BC,
 *
 *     <O> = 2^-k sum_P up(P) down(P),
 *     up(P)   = <O_A (x) P> on the upstream fragment,
 *     down(P) = Tr[O_BC Lambda_down(P (x) |0><0|_C)].
 *
 * QCUT sums P over {I,X,Y,Z}^k; RICCO sums over {I,Z}^k on fragments that
 * carry U(theta) / U^dagger(theta), dropping the X/Y terms.
 *
 * Observable letters on cut wires refer to the end of the circuit and are
 * therefore measured on the downstream fragment.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ricco/circuit.hpp"
#include "ricco/pauli.hpp"
#include "ricco/types.hpp"

namespace ricco {

enum class Phase { Reconstruction, Optimization };

struct ExecutionLedger {
    std::uint64_t distinct_circuits = 0;
    std::uint64_t shots_total = 0;
    Phase phase = Phase::Reconstruction;

    ExecutionLedger &operator+=(const ExecutionLedger &other) {
        distinct_circuits += other.distinct_circuits;
        shots_total += other.shots_total;
        return *this;
    }
};

struct ExactMode {};
struct ShotsMode {
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
};
using Mode = std::variant<ExactMode, ShotsMode>;

inline bool is_exact(const Mode &mode) { return std::holds_alternative<ExactMode>(mode); }

enum class Method { Uncut, Qcut, Ricco };
std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

struct TermBreakdown {
    std::string group;       ///< upstream key of the group
    std::string term;        ///< full Hamiltonian word
    PauliString cut_pauli;
    double up = 0.0;
    double down = 0.0;
};

struct ReconstructionResult {
    double value = 0.0;
    ExecutionLedger ledger;
    Method method = Method::Qcut;
    std::vector<TermBreakdown> terms;
};

std::string to_json(const ReconstructionResult &result);

/// Upstream-local word of `term`: A letters kept, cut positions set to I.
PauliString upstream_part(const FragmentPair &fragments, const PauliString &term);
/// Downstream-local word: letters of the cut and C wires.
PauliString downstream_part(const FragmentPair &fragments, const PauliString &term);

/**
 * Group key used for ledger accounting and RICCO optimization: the upstream
 * word (A letters, I on cut positions). Identity-only terms return "".
 */
std::string upstream_key(const FragmentPair &fragments, const PauliString &term);

/// Circuits per group: settings + preparations * downstream bases.
std::uint64_t qcut_circuits_per_group(std::size_t k, std::size_t downstream_bases = 1);
std::uint64_t ricco_circuits_per_group(std::size_t k, std::size_t downstream_bases = 1);

/// Exact <observable> on the simulated uncut circuit.
double uncut_expectation(const Circuit &circuit, const Observable &observable,
                         const Bindings &bindings = {});

/**
 * Full-basis reconstruction. Exact mode injects each Pauli P as a linear
 * operator into the downstream fragment; shots mode estimates up(P) from the
 * 3^k upstream bases and down(P) from the preparations {|0>,|1>,|+>,|+i>}^k.
 */
ReconstructionResult qcut_expectation(const FragmentPair &fragments, const Observable &observable,
                                      const Mode &mode = ExactMode{},
                                      const Bindings &bindings = {});

/// theta (and any other free parameters) per group key; groups not listed
/// fall back to `fallback`.
struct GroupBindings {
    Bindings fallback;
    std::map<std::string, Bindings> per_group;

    [[nodiscard]] const Bindings &for_group(const std::string &key) const;
};

/**
 * Diagonal-basis reconstruction on fragments with U inserted. Upstream
 * values for every P in {I,Z}^k come from one computational-basis setting;
 * downstream values from the 2^k basis-state preparations.
 */
ReconstructionResult ricco_expectation(const FragmentPair &fragments, const GroupBindings &bindings,
                                       const Observable &observable,
                                       const Mode &mode = ExactMode{});
ReconstructionResult ricco_expectation(const FragmentPair &fragments, const Bindings &bindings,
                                       const Observable &observable,
                                       const Mode &mode = ExactMode{});

/**
 * 2^-k sum over P in {I,X,Y,Z}^k \ {I,Z}^k of |c_O up(P) down(P)|, summed
 * over terms. Bounds |ricco - qcut| in exact mode.
 */
double leakage(const FragmentPair &fragments, const GroupBindings &bindings,
               const Observable &observable);
double leakage(const FragmentPair &fragments, const Bindings &bindings,
               const Observable &observable);

} // namespace ricco
