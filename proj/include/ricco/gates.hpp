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
 * @file gates.hpp
 * Gate vocabulary of the circuit IR: gate kinds, symbolic parameters and the
 * dense matrices behind each kind.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ricco/types.hpp"

namespace ricco {

enum class GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    CNOT,
    RX,
    RY,
    RZ,
    Rot, ///< RZ(omega) RY(theta) RZ(phi), parameters ordered (phi, theta, omega)
    RXX,
    RYY,
    RZZ,
    CRZ,
    Unitary, ///< fixed matrix carried by the op
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// Number of wires the kind acts on; 0 for Unitary (taken from the matrix).
std::size_t gate_arity(GateKind kind);
std::size_t gate_param_count(GateKind kind);

/**
 * True when every parameter of the kind enters as exp(-i a G / 2) with G
 * having eigenvalues +-1, so the two-term shift rule with +-pi/2 is exact.
 */
bool supports_parameter_shift(GateKind kind);

/**
 * @brief Angle of a parameterized gate.
 *
 * Either a constant (empty name) or an affine reference
 * `scale * bindings[name] + offset`. Adjoint gates use scale -1.
 */
struct Param {
    std::string name;
    double scale = 1.0;
    double offset = 0.0;

    static Param constant(double value) { return Param{"", 1.0, value}; }
    static Param named(std::string name, double scale = 1.0) {
        return Param{std::move(name), scale, 0.0};
    }

    [[nodiscard]] bool symbolic() const { return !name.empty(); }
    [[nodiscard]] double resolve(const Bindings &bindings) const;
};

struct GateOp {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> wires;
    std::vector<Param> params;
    CMatrix matrix; ///< only for GateKind::Unitary

    [[nodiscard]] std::vector<double> angles(const Bindings &bindings) const;
};

/// Dense matrix of a kind at concrete angles; wire 0 of the op is the most
/// significant bit of the returned matrix.
CMatrix gate_matrix(GateKind kind, const std::vector<double> &angles);
CMatrix gate_matrix(const GateOp &op, const Bindings &bindings);

/// Exact inverse of an op. Parameter references keep their names.
GateOp adjoint(const GateOp &op);

bool is_unitary(const CMatrix &m, double tol = 1e-10);

/// Throws std::invalid_argument when wires repeat, exceed `n_wires`, or the
/// parameter/matrix payload does not fit the kind.
void validate_op(const GateOp &op, std::size_t n_wires);

} // namespace ricco
