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

#include "ricco/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace ricco {

namespace {

struct KindInfo {
    GateKind kind;
    std::string_view name;
    std::size_t arity;
    std::size_t params;
    bool shift_rule;
};

constexpr std::array<KindInfo, 16> kKinds{{
    {GateKind::H, "H", 1, 0, false},
    {GateKind::X, "X", 1, 0, false},
    {GateKind::Y, "Y", 1, 0, false},
    {GateKind::Z, "Z", 1, 0, false},
    {GateKind::S, "S", 1, 0, false},
    {GateKind::Sdg, "Sdg", 1, 0, false},
    {GateKind::CNOT, "CNOT", 2, 0, false},
    {GateKind::RX, "RX", 1, 1, true},
    {GateKind::RY, "RY", 1, 1, true},
    {GateKind::RZ, "RZ", 1, 1, true},
    {GateKind::Rot, "Rot", 1, 3, true},
    {GateKind::RXX, "RXX", 2, 1, true},
    {GateKind::RYY, "RYY", 2, 1, true},
    {GateKind::RZZ, "RZZ", 2, 1, true},
    {GateKind::CRZ, "CRZ", 2, 1, false},
    {GateKind::Unitary, "Unitary", 0, 0, false},
}};

const KindInfo &info(GateKind kind) {
    return kKinds[static_cast<std::size_t>(kind)];
}

constexpr cplx kI{0.0, 1.0};

CMatrix rx(double a) {
    const double c = std::cos(a / 2);
    const double s = std::sin(a / 2);
    CMatrix m(2, 2);
    m << c, -kI * s, -kI * s, c;
    return m;
}

CMatrix ry(double a) {
    const double c = std::cos(a / 2);
    const double s = std::sin(a / 2);
    CMatrix m(2, 2);
    m << c, -s, s, c;
    return m;
}

CMatrix rz(double a) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::exp(-kI * (a / 2));
    m(1, 1) = std::exp(kI * (a / 2));
    return m;
}

CMatrix pauli1(char p) {
    CMatrix m = CMatrix::Zero(2, 2);
    switch (p) {
    case 'X':
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case 'Y':
        m(0, 1) = -kI;
        m(1, 0) = kI;
        break;
    default:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
    }
    return m;
}

/// exp(-i a/2 P (x) P)
CMatrix ising(char p, double a) {
    const CMatrix pp = Eigen::kroneckerProduct(pauli1(p), pauli1(p)).eval();
    return std::cos(a / 2) * CMatrix::Identity(4, 4) - kI * std::sin(a / 2) * pp;
}

} // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &k : kKinds) {
        if (k.name == name) {
            return k.kind;
        }
    }
    return std::nullopt;
}

std::size_t gate_arity(GateKind kind) { return info(kind).arity; }
std::size_t gate_param_count(GateKind kind) { return info(kind).params; }
bool supports_parameter_shift(GateKind kind) { return info(kind).shift_rule; }

double Param::resolve(const Bindings &bindings) const {
    if (!symbolic()) {
        return offset;
    }
    const auto it = bindings.find(name);
    if (it == bindings.end()) {
        throw std::invalid_argument("unbound parameter '" + name + "'");
    }
    return scale * it->second + offset;
}

std::vector<double> GateOp::angles(const Bindings &bindings) const {
    std::vector<double> out;
    out.reserve(params.size());
    for (const auto &p : params) {
        out.push_back(p.resolve(bindings));
    }
    return out;
}

CMatrix gate_matrix(GateKind kind, const std::vector<double> &a) {
    if (a.size() != gate_param_count(kind)) {
        throw std::invalid_argument("gate " + std::string(gate_name(kind)) + " expects " +
                                    std::to_string(gate_param_count(kind)) + " parameters");
    }
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix m;
    switch (kind) {
    case GateKind::H:
        m.resize(2, 2);
        m << r, r, r, -r;
        return m;
    case GateKind::X:
        return pauli1('X');
    case GateKind::Y:
        return pauli1('Y');
    case GateKind::Z:
        return pauli1('Z');
    case GateKind::S:
        m = CMatrix::Identity(2, 2);
        m(1, 1) = kI;
        return m;
    case GateKind::Sdg:
        m = CMatrix::Identity(2, 2);
        m(1, 1) = -kI;
        return m;
    case GateKind::CNOT:
        m = CMatrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
        return m;
    case GateKind::RX:
        return rx(a[0]);
    case GateKind::RY:
        return ry(a[0]);
    case GateKind::RZ:
        return rz(a[0]);
    case GateKind::Rot:
        return rz(a[2]) * ry(a[1]) * rz(a[0]);
    case GateKind::RXX:
        return ising('X', a[0]);
    case GateKind::RYY:
        return ising('Y', a[0]);
    case GateKind::RZZ:
        return ising('Z', a[0]);
    case GateKind::CRZ:
        m = CMatrix::Identity(4, 4);
        m.bottomRightCorner(2, 2) = rz(a[0]);
        return m;
    case GateKind::Unitary:
        break;
    }
    throw std::invalid_argument("Unitary gates carry their own matrix");
}

CMatrix gate_matrix(const GateOp &op, const Bindings &bindings) {
    if (op.kind == GateKind::Unitary) {
        return op.matrix;
    }
    return gate_matrix(op.kind, op.angles(bindings));
}

GateOp adjoint(const GateOp &op) {
    GateOp out = op;
    auto negate = [](const Param &p) { return Param{p.name, -p.scale, -p.offset}; };
    switch (op.kind) {
    case GateKind::S:
        out.kind = GateKind::Sdg;
        break;
    case GateKind::Sdg:
        out.kind = GateKind::S;
        break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::RXX:
    case GateKind::RYY:
    case GateKind::RZZ:
    case GateKind::CRZ:
        out.params[0] = negate(op.params[0]);
        break;
    case GateKind::Rot:
        out.params = {negate(op.params[2]), negate(op.params[1]), negate(op.params[0])};
        break;
    case GateKind::Unitary:
        out.matrix = op.matrix.adjoint();
        break;
    default:
        break;
    }
    return out;
}

bool is_unitary(const CMatrix &m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        return false;
    }
    const CMatrix d = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

void validate_op(const GateOp &op, std::size_t n_wires) {
    const std::string name(gate_name(op.kind));
    if (op.wires.empty()) {
        throw std::invalid_argument("gate " + name + " has no wires");
    }
    for (std::size_t i = 0; i < op.wires.size(); ++i) {
        if (op.wires[i] >= n_wires) {
            throw std::invalid_argument("gate " + name + ": wire " + std::to_string(op.wires[i]) +
                                        " out of range for " + std::to_string(n_wires) +
                                        " wires");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (op.wires[i] == op.wires[j]) {
                throw std::invalid_argument("gate " + name + ": repeated wire " +
                                            std::to_string(op.wires[i]));
            }
        }
    }
    if (op.kind == GateKind::Unitary) {
        const auto dim = std::size_t{1} << op.wires.size();
        if (static_cast<std::size_t>(op.matrix.rows()) != dim ||
            static_cast<std::size_t>(op.matrix.cols()) != dim) {
            throw std::invalid_argument("Unitary on " + std::to_string(op.wires.size()) +
                                        " wires needs a " + std::to_string(dim) + "x" +
                                        std::to_string(dim) + " matrix");
        }
        if (!is_unitary(op.matrix)) {
            throw std::invalid_argument("Unitary matrix is not unitary");
        }
        if (!op.params.empty()) {
            throw std::invalid_argument("Unitary gates take no parameters");
        }
        return;
    }
    if (op.wires.size() != gate_arity(op.kind)) {
        throw std::invalid_argument("gate " + name + " acts on " +
                                    std::to_string(gate_arity(op.kind)) + " wires");
    }
    if (op.params.size() != gate_param_count(op.kind)) {
        throw std::invalid_argument("gate " + name + " expects " +
                                    std::to_string(gate_param_count(op.kind)) + " parameters");
    }
}

} // namespace ricco
