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
 * @file vqe.hpp
 * Variational eigensolver driven through the uncut simulator, the full-basis
 * reconstruction or the diagonal-basis reconstruction with a re-optimized
 * cut unitary at every iteration.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ricco/circuit.hpp"
#include "ricco/cut.hpp"
#include "ricco/optimizer.hpp"
#include "ricco/pauli.hpp"

namespace ricco {

struct Hamiltonian {
    Observable observable;
    std::string name;
    std::size_t n_qubits = 0;
};

/// Observable line format; throws std::invalid_argument with the line number.
Hamiltonian load_hamiltonian(std::string_view text, std::string name = "");
Hamiltonian load_hamiltonian_file(const std::string &path);

/// Minimal-basis H2 at 0.7414 Angstrom, Jordan-Wigner encoded.
std::string bundled_h2_path();

struct ObservableGroup {
    std::string key; ///< upstream-local word, I on the cut wires
    std::vector<PauliTerm> members;
};

/**
 * Partitions the non-identity terms by upstream key, in lexicographic key
 * order. Identity-only terms belong to no group.
 */
std::vector<ObservableGroup> group_upstream(const Observable &observable,
                                            const FragmentPair &fragments);

double exact_ground_energy(const Hamiltonian &hamiltonian);

struct VqeConfig {
    std::size_t max_iter = 500;
    double tol = 1e-6;
    AdamHyper adam{0.04, 0.1, 0.9, 1e-8};
    Method method = Method::Uncut;
    RiccoConfig ricco;
    /// Start each group's inner loop from its previous optimum; false draws
    /// fresh angles every iteration.
    bool warm_start = true;
    std::uint64_t seed = 0;
    Mode mode = ExactMode{};
    std::optional<std::vector<double>> initial_params;
};

struct VqeTrace {
    Method method = Method::Uncut;
    std::vector<double> energy;
    std::vector<std::uint64_t> exec_recon_cum;
    std::vector<std::uint64_t> exec_opt_cum;
    std::vector<double> final_params;
    double final_energy = 0.0;
    double exact_energy = 0.0;
    double energy_difference = 0.0; ///< final_energy - exact_energy
    ExecutionLedger reconstruction{0, 0, Phase::Reconstruction};
    ExecutionLedger optimization{0, 0, Phase::Optimization};
    bool converged = false;
    std::size_t iterations = 0;
    std::string error;

    /// Mean reconstruction executions per iteration.
    [[nodiscard]] double recon_per_iteration() const;
};

/**
 * Each iteration evaluates E at the current parameters (re-optimizing U per
 * group first for RICCO), takes its parameter-shift gradient with the cut
 * unitary held fixed, and applies one Adam step. Stops once two consecutive
 * energies differ by at most tol. Reconstruction executions include the
 * shifted evaluations. Every free ansatz parameter must appear once, with
 * unit scale, on a gate with an exact shift rule.
 */
VqeTrace vqe_optimize(const Circuit &ansatz, const Hamiltonian &hamiltonian, const CutSpec &cut,
                      const VqeConfig &config);

/**
 * Four-wire, one-parameter default spanning c|0011> + s|1100>: upstream
 * {0, 1, 2}, cut on wire 1 after op 4, downstream {1, 3}.
 */
Benchmark default_h2_ansatz();

/// One `{iter, energy, exec_recon_cum, exec_opt_cum}` JSON object per line.
std::string to_jsonl(const VqeTrace &trace);

} // namespace ricco
