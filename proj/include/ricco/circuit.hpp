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
 * @file circuit.hpp
 * Gate-level circuit IR, cut declaration and fragmentation into upstream and
 * downstream subcircuits.
 */
#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ricco/gates.hpp"
#include "ricco/types.hpp"

namespace ricco {

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::size_t n_wires);

    /// Appends after validating wires and payload against the register.
    Circuit &add(GateOp op);

    Circuit &h(std::size_t w) { return add({GateKind::H, {w}, {}, {}}); }
    Circuit &x(std::size_t w) { return add({GateKind::X, {w}, {}, {}}); }
    Circuit &y(std::size_t w) { return add({GateKind::Y, {w}, {}, {}}); }
    Circuit &z(std::size_t w) { return add({GateKind::Z, {w}, {}, {}}); }
    Circuit &s(std::size_t w) { return add({GateKind::S, {w}, {}, {}}); }
    Circuit &sdg(std::size_t w) { return add({GateKind::Sdg, {w}, {}, {}}); }
    Circuit &cnot(std::size_t c, std::size_t t) { return add({GateKind::CNOT, {c, t}, {}, {}}); }
    Circuit &rx(std::size_t w, Param a) { return add({GateKind::RX, {w}, {std::move(a)}, {}}); }
    Circuit &ry(std::size_t w, Param a) { return add({GateKind::RY, {w}, {std::move(a)}, {}}); }
    Circuit &rz(std::size_t w, Param a) { return add({GateKind::RZ, {w}, {std::move(a)}, {}}); }
    Circuit &rot(std::size_t w, Param phi, Param theta, Param omega) {
        return add({GateKind::Rot, {w}, {std::move(phi), std::move(theta), std::move(omega)}, {}});
    }
    Circuit &unitary(std::vector<std::size_t> wires, CMatrix m) {
        return add({GateKind::Unitary, std::move(wires), {}, std::move(m)});
    }

    [[nodiscard]] std::size_t n_wires() const { return n_wires_; }
    [[nodiscard]] const std::vector<GateOp> &ops() const { return ops_; }
    [[nodiscard]] std::size_t size() const { return ops_.size(); }

    /// Exactly the free parameter names referenced by ops.
    [[nodiscard]] std::set<std::string> param_names() const;

    /// Circuit followed by `tail` (same register).
    [[nodiscard]] Circuit then(const Circuit &tail) const;

  private:
    std::size_t n_wires_ = 0;
    std::vector<GateOp> ops_;
};

/// Ops [0, time_index) run before the cut; the cut severs `cut_wires`.
struct CutSpec {
    std::size_t time_index = 0;
    std::vector<std::size_t> cut_wires;
};

/**
 * @brief Upstream and downstream subcircuits of a single-location cut.
 *
 * Local wire i of the upstream fragment is original wire upstream_wires[i];
 * likewise for downstream. Both lists are ascending. The downstream
 * fragment's `prep_local` wires start in a state injected at reconstruction
 * time; all its other wires start in |0>.
 */
struct FragmentPair {
    Circuit upstream;
    Circuit downstream;
    std::vector<std::size_t> upstream_wires;
    std::vector<std::size_t> downstream_wires;
    std::vector<std::size_t> cut_wires;  ///< original indices, cut order
    std::vector<std::size_t> cut_local;  ///< upstream-local positions, cut order
    std::vector<std::size_t> prep_local; ///< downstream-local positions, cut order
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::size_t n_c = 0;
    bool has_ansatz = false;
    std::vector<std::string> ansatz_params; ///< names of U's parameters, if inserted

    [[nodiscard]] std::size_t n_wires() const { return n_a + n_b + n_c; }
    [[nodiscard]] std::size_t k() const { return n_b; }
};

/// Raised when an op crosses the cut incompatibly; carries the op index.
class CutError : public std::invalid_argument {
  public:
    CutError(const std::string &what, std::size_t op_index)
        : std::invalid_argument(what), op_index_(op_index) {}
    [[nodiscard]] std::size_t op_index() const { return op_index_; }

  private:
    std::size_t op_index_;
};

/**
 * Splits `circuit` at `cut`. Upstream non-cut wires (A) are those touched
 * before the cut; downstream non-cut wires (C) are the rest, so untouched
 * wires land downstream. An op at or after the cut touching an A wire throws
 * CutError carrying that op's index.
 */
FragmentPair fragment(const Circuit &circuit, const CutSpec &cut);

/**
 * @brief Parameterized unitary placed on the cut wires.
 *
 * k = 1: one Rot (3 parameters).
 * k = 2: Rot x Rot, RXX RYY RZZ, Rot x Rot (15 parameters).
 * k >= 3: `layers` layers of RX, RY per wire followed by a ring of RZZ
 *         (3 k L parameters).
 * Every layout is the identity at theta = 0.
 */
class RiccoAnsatz {
  public:
    explicit RiccoAnsatz(std::size_t k, std::size_t layers = 1, std::string prefix = "u");

    [[nodiscard]] std::size_t k() const { return k_; }
    [[nodiscard]] std::size_t param_count() const { return names_.size(); }
    [[nodiscard]] const std::vector<std::string> &param_names() const { return names_; }

    /// Ops of U on local wires 0..k-1.
    [[nodiscard]] const Circuit &circuit() const { return circuit_; }

    [[nodiscard]] Bindings bind(const std::vector<double> &theta) const;

  private:
    std::size_t k_;
    std::vector<std::string> names_;
    Circuit circuit_;
};

/**
 * Appends U(theta) to the upstream cut wires and prepends U^dagger(theta)
 * (reversed adjoint ops) to the downstream preparation wires.
 */
FragmentPair insert_ricco(const FragmentPair &fragments, const RiccoAnsatz &ansatz);

/// Haar-random element of U(dim): QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
CMatrix haar_unitary(std::size_t dim, Rng &rng);

struct Benchmark {
    Circuit circuit;
    CutSpec cut;
};

/**
 * Two Haar-random blocks overlapping on the cut wires.
 * k = 1: 7 wires, U(16) on {0..3} then U(16) on {3..6}, cut on {3}.
 * k = 2: 8 wires, U(32) on {0..4} then U(32) on {3..7}, cut on {3, 4}.
 */
Benchmark random_benchmark(std::size_t k, std::uint64_t seed);

/**
 * Same topology as random_benchmark, but the upstream state is a product of
 * a computational basis state on A and a Haar-random state on the cut wires,
 * so the cut register is unentangled with A.
 */
Benchmark unentangled_benchmark(std::size_t k, std::uint64_t seed);

/// JSON document `{n_wires, ops:[{kind, wires, params|matrix}]}`.
std::string serialize(const Circuit &circuit);

/// Parse failure with the offending op/field.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t line, std::string field)
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    std::size_t line_;
    std::string field_;
};

Circuit parse_circuit(const std::string &text);

std::string serialize(const CutSpec &cut);
CutSpec parse_cut(const std::string &text);

} // namespace ricco
