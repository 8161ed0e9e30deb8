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

#include "ricco/circuit.hpp"

#include <cctype>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace ricco {

using nlohmann::json;

Circuit::Circuit(std::size_t n_wires) : n_wires_(n_wires) {
    if (n_wires == 0) {
        throw std::invalid_argument("Circuit needs at least one wire");
    }
}

Circuit &Circuit::add(GateOp op) {
    validate_op(op, n_wires_);
    ops_.push_back(std::move(op));
    return *this;
}

std::set<std::string> Circuit::param_names() const {
    std::set<std::string> names;
    for (const auto &op : ops_) {
        for (const auto &p : op.params) {
            if (p.symbolic()) {
                names.insert(p.name);
            }
        }
    }
    return names;
}

Circuit Circuit::then(const Circuit &tail) const {
    if (tail.n_wires() != n_wires_) {
        throw std::invalid_argument("Circuit::then: register mismatch");
    }
    Circuit out = *this;
    for (const auto &op : tail.ops()) {
        out.ops_.push_back(op);
    }
    return out;
}

namespace {

std::vector<std::size_t> sorted_union(const std::vector<std::size_t> &a,
                                      const std::vector<std::size_t> &b) {
    std::vector<std::size_t> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t position(const std::vector<std::size_t> &wires, std::size_t w) {
    return static_cast<std::size_t>(std::find(wires.begin(), wires.end(), w) - wires.begin());
}

GateOp remap(const GateOp &op, const std::vector<std::size_t> &local_of) {
    GateOp out = op;
    for (auto &w : out.wires) {
        w = local_of[w];
    }
    return out;
}

} // namespace

FragmentPair fragment(const Circuit &circuit, const CutSpec &cut) {
    const std::size_t n = circuit.n_wires();
    if (cut.cut_wires.empty()) {
        throw std::invalid_argument("fragment: cut has no wires");
    }
    if (cut.time_index > circuit.size()) {
        throw std::invalid_argument("fragment: time index past the end of the circuit");
    }
    std::vector<bool> is_cut(n, false);
    for (const auto w : cut.cut_wires) {
        if (w >= n || is_cut[w]) {
            throw std::invalid_argument("fragment: invalid cut wire " + std::to_string(w));
        }
        is_cut[w] = true;
    }

    std::vector<bool> before(n, false);
    for (std::size_t i = 0; i < cut.time_index; ++i) {
        for (const auto w : circuit.ops()[i].wires) {
            before[w] = true;
        }
    }
    for (std::size_t i = cut.time_index; i < circuit.size(); ++i) {
        const auto &op = circuit.ops()[i];
        for (const auto w : op.wires) {
            if (!is_cut[w] && before[w]) {
                throw CutError("op " + std::to_string(i) + " (" + std::string(gate_name(op.kind)) +
                                   ") touches upstream wire " + std::to_string(w) +
                                   " after the cut",
                               i);
            }
        }
    }

    std::vector<std::size_t> a_wires;
    std::vector<std::size_t> c_wires;
    for (std::size_t w = 0; w < n; ++w) {
        if (is_cut[w]) {
            continue;
        }
        (before[w] ? a_wires : c_wires).push_back(w);
    }

    FragmentPair f;
    f.cut_wires = cut.cut_wires;
    f.upstream_wires = sorted_union(a_wires, cut.cut_wires);
    f.downstream_wires = sorted_union(c_wires, cut.cut_wires);
    f.n_a = a_wires.size();
    f.n_b = cut.cut_wires.size();
    f.n_c = c_wires.size();

    std::vector<std::size_t> up_local(n, n);
    std::vector<std::size_t> down_local(n, n);
    for (std::size_t i = 0; i < f.upstream_wires.size(); ++i) {
        up_local[f.upstream_wires[i]] = i;
    }
    for (std::size_t i = 0; i < f.downstream_wires.size(); ++i) {
        down_local[f.downstream_wires[i]] = i;
    }
    for (const auto w : cut.cut_wires) {
        f.cut_local.push_back(position(f.upstream_wires, w));
        f.prep_local.push_back(position(f.downstream_wires, w));
    }

    f.upstream = Circuit(f.upstream_wires.size());
    f.downstream = Circuit(f.downstream_wires.size());
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const auto &op = circuit.ops()[i];
        if (i < cut.time_index) {
            f.upstream.add(remap(op, up_local));
        } else {
            f.downstream.add(remap(op, down_local));
        }
    }
    return f;
}

RiccoAnsatz::RiccoAnsatz(std::size_t k, std::size_t layers, std::string prefix) : k_(k) {
    if (k == 0) {
        throw std::invalid_argument("RiccoAnsatz: k must be positive");
    }
    if (layers == 0) {
        throw std::invalid_argument("RiccoAnsatz: layers must be positive");
    }
    circuit_ = Circuit(k);
    auto fresh = [&] {
        names_.push_back(prefix + std::to_string(names_.size()));
        return Param::named(names_.back());
    };
    auto rot = [&](std::size_t w) {
        Param phi = fresh();
        Param theta = fresh();
        Param omega = fresh();
        circuit_.rot(w, phi, theta, omega);
    };
    if (k == 1) {
        rot(0);
    } else if (k == 2) {
        rot(0);
        rot(1);
        circuit_.add({GateKind::RXX, {0, 1}, {fresh()}, {}});
        circuit_.add({GateKind::RYY, {0, 1}, {fresh()}, {}});
        circuit_.add({GateKind::RZZ, {0, 1}, {fresh()}, {}});
        rot(0);
        rot(1);
    } else {
        for (std::size_t l = 0; l < layers; ++l) {
            for (std::size_t w = 0; w < k; ++w) {
                circuit_.rx(w, fresh());
                circuit_.ry(w, fresh());
            }
            for (std::size_t w = 0; w < k; ++w) {
                circuit_.add({GateKind::RZZ, {w, (w + 1) % k}, {fresh()}, {}});
            }
        }
    }
}

Bindings RiccoAnsatz::bind(const std::vector<double> &theta) const {
    if (theta.size() != names_.size()) {
        throw std::invalid_argument("RiccoAnsatz: expected " + std::to_string(names_.size()) +
                                    " parameters, got " + std::to_string(theta.size()));
    }
    Bindings b;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        b[names_[i]] = theta[i];
    }
    return b;
}

FragmentPair insert_ricco(const FragmentPair &fragments, const RiccoAnsatz &ansatz) {
    if (ansatz.k() != fragments.n_b) {
        throw std::invalid_argument("insert_ricco: ansatz acts on " + std::to_string(ansatz.k()) +
                                    " qubits but the cut has " + std::to_string(fragments.n_b));
    }
    if (fragments.has_ansatz) {
        throw std::invalid_argument("insert_ricco: fragments already carry an ansatz");
    }
    FragmentPair out = fragments;
    for (const auto &op : ansatz.circuit().ops()) {
        out.upstream.add(remap(op, fragments.cut_local));
    }
    Circuit down(fragments.downstream.n_wires());
    const auto &u_ops = ansatz.circuit().ops();
    for (auto it = u_ops.rbegin(); it != u_ops.rend(); ++it) {
        down.add(remap(adjoint(*it), fragments.prep_local));
    }
    for (const auto &op : fragments.downstream.ops()) {
        down.add(op);
    }
    out.downstream = std::move(down);
    out.has_ansatz = true;
    out.ansatz_params = ansatz.param_names();
    return out;
}

CMatrix haar_unitary(std::size_t dim, Rng &rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix z(d, d);
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index row = 0; row < d; ++row) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(row, c) = cplx{re * r, im * r};
        }
    }
    const Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix rmat = qr.matrixQR();
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx rii = rmat(i, i);
        const double mag = std::abs(rii);
        q.col(i) *= mag > 0.0 ? rii / mag : cplx{1.0, 0.0};
    }
    return q;
}

namespace {

struct Topology {
    std::size_t n;
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
    std::vector<std::size_t> cut;
};

Topology topology(std::size_t k) {
    if (k == 1) {
        return {7, {0, 1, 2, 3}, {3, 4, 5, 6}, {3}};
    }
    if (k == 2) {
        return {8, {0, 1, 2, 3, 4}, {3, 4, 5, 6, 7}, {3, 4}};
    }
    throw std::invalid_argument("benchmark cut size must be 1 or 2, got " + std::to_string(k));
}

} // namespace

Benchmark random_benchmark(std::size_t k, std::uint64_t seed) {
    const auto t = topology(k);
    Rng rng(seed);
    Benchmark b{Circuit(t.n), {1, t.cut}};
    b.circuit.unitary(t.first, haar_unitary(std::size_t{1} << t.first.size(), rng));
    b.circuit.unitary(t.second, haar_unitary(std::size_t{1} << t.second.size(), rng));
    return b;
}

Benchmark unentangled_benchmark(std::size_t k, std::uint64_t seed) {
    const auto t = topology(k);
    Rng rng(mix_seed(seed, 0x756e656eULL));
    Circuit c(t.n);
    for (const auto w : t.first) {
        if (std::find(t.cut.begin(), t.cut.end(), w) != t.cut.end()) {
            continue;
        }
        if (rng.uniform() < 0.5) {
            c.x(w);
        } else {
            c.z(w);
        }
    }
    c.unitary(t.cut, haar_unitary(std::size_t{1} << t.cut.size(), rng));
    const std::size_t time_index = c.size();
    c.unitary(t.second, haar_unitary(std::size_t{1} << t.second.size(), rng));
    return {std::move(c), {time_index, t.cut}};
}

namespace {

json param_to_json(const Param &p) {
    if (!p.symbolic()) {
        return p.offset;
    }
    if (p.scale == 1.0 && p.offset == 0.0) {
        return p.name;
    }
    return json{{"name", p.name}, {"scale", p.scale}, {"offset", p.offset}};
}

json op_to_json(const GateOp &op) {
    json j;
    j["kind"] = gate_name(op.kind);
    j["wires"] = op.wires;
    if (op.kind == GateKind::Unitary) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
                row.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
            }
            rows.push_back(std::move(row));
        }
        j["matrix"] = std::move(rows);
    } else if (!op.params.empty()) {
        json params = json::array();
        for (const auto &p : op.params) {
            params.push_back(param_to_json(p));
        }
        j["params"] = std::move(params);
    }
    return j;
}

/// 1-based text line of the n-th "kind" key; ops are the only objects
/// carrying one.
/// 1-based line on which each element of the top-level "ops" array starts.
std::vector<std::size_t> op_lines(const std::string &text) {
    std::vector<std::size_t> lines;
    std::size_t line = 1;
    std::size_t depth = 0;
    std::size_t array_depth = 0;
    bool in_string = false;
    bool escaped = false;
    bool expect_element = false;
    std::string token;
    std::string last_key;
    for (const char ch : text) {
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (ch == '\\') {
                escaped = true;
            } else if (ch == '"') {
                in_string = false;
                if (depth == 1) {
                    last_key = token;
                }
            } else {
                token.push_back(ch);
            }
            if (ch == '\n') {
                ++line;
            }
            continue;
        }
        if (ch == '\n') {
            ++line;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
            continue;
        }
        if (expect_element && ch != ']') {
            lines.push_back(line);
            expect_element = false;
        }
        switch (ch) {
        case '"':
            in_string = true;
            token.clear();
            break;
        case '{':
        case '[':
            ++depth;
            if (ch == '[' && depth == 2 && last_key == "ops" && array_depth == 0) {
                array_depth = depth;
                expect_element = true;
            }
            break;
        case '}':
        case ']':
            if (depth == array_depth && ch == ']') {
                array_depth = std::numeric_limits<std::size_t>::max();
            }
            depth = depth == 0 ? 0 : depth - 1;
            break;
        case ',':
            expect_element = depth == array_depth;
            break;
        default:
            break;
        }
    }
    return lines;
}

std::size_t line_of_offset(const std::string &text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

Param param_from_json(const json &j) {
    if (j.is_number()) {
        return Param::constant(j.get<double>());
    }
    if (j.is_string()) {
        return Param::named(j.get<std::string>());
    }
    if (j.is_object() && j.contains("name")) {
        return Param{j.at("name").get<std::string>(), j.value("scale", 1.0), j.value("offset", 0.0)};
    }
    throw std::invalid_argument("expected a number, a name or {name, scale, offset}");
}

} // namespace

std::string serialize(const Circuit &circuit) {
    std::ostringstream out;
    out << "{\n  \"n_wires\": " << circuit.n_wires() << ",\n  \"ops\": [";
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        out << (i == 0 ? "\n    " : ",\n    ") << op_to_json(circuit.ops()[i]).dump();
    }
    out << (circuit.size() == 0 ? "]\n}\n" : "\n  ]\n}\n");
    return out.str();
}

Circuit parse_circuit(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed circuit JSON: ") + e.what(),
                         line_of_offset(text, e.byte), "");
    }
    if (!doc.is_object() || !doc.contains("n_wires") || !doc.contains("ops")) {
        throw ParseError("circuit JSON needs n_wires and ops", 1, "n_wires");
    }
    if (!doc["n_wires"].is_number_unsigned() || doc["n_wires"].get<std::size_t>() == 0) {
        throw ParseError("n_wires must be a positive integer", 1, "n_wires");
    }
    if (!doc["ops"].is_array()) {
        throw ParseError("ops must be an array", 1, "ops");
    }
    const auto n = doc["n_wires"].get<std::size_t>();
    Circuit circuit(n);
    const auto &ops = doc["ops"];
    const auto lines = op_lines(text);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto &jo = ops[i];
        const std::size_t line = i < lines.size() ? lines[i] : 0;
        const std::string where = "ops[" + std::to_string(i) + "]";
        auto fail = [&](const std::string &field, const std::string &msg) -> ParseError {
            return ParseError("line " + std::to_string(line) + ", " + where + "." + field + ": " + msg,
                              line, field);
        };
        if (!jo.is_object() || !jo.contains("kind") || !jo["kind"].is_string()) {
            throw fail("kind", "missing gate kind");
        }
        const auto name = jo["kind"].get<std::string>();
        const auto kind = gate_kind_from_name(name);
        if (!kind) {
            throw fail("kind", "unknown gate kind '" + name + "'");
        }
        GateOp op;
        op.kind = *kind;
        if (!jo.contains("wires") || !jo["wires"].is_array()) {
            throw fail("wires", "missing wire list");
        }
        for (const auto &w : jo["wires"]) {
            if (!w.is_number_unsigned()) {
                throw fail("wires", "bad wire index " + w.dump());
            }
            op.wires.push_back(w.get<std::size_t>());
        }
        if (jo.contains("params")) {
            if (!jo["params"].is_array()) {
                throw fail("params", "params must be an array");
            }
            for (const auto &jp : jo["params"]) {
                try {
                    op.params.push_back(param_from_json(jp));
                } catch (const std::exception &e) {
                    throw fail("params", e.what());
                }
            }
        }
        if (jo.contains("matrix")) {
            const auto &jm = jo["matrix"];
            if (!jm.is_array() || jm.empty()) {
                throw fail("matrix", "matrix must be a non-empty array of rows");
            }
            const auto d = static_cast<Eigen::Index>(jm.size());
            op.matrix = CMatrix::Zero(d, d);
            for (Eigen::Index r = 0; r < d; ++r) {
                const auto &row = jm[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
                    throw fail("matrix", "matrix must be square");
                }
                for (Eigen::Index c = 0; c < d; ++c) {
                    const auto &e = row[static_cast<std::size_t>(c)];
                    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                        throw fail("matrix", "entries must be [re, im] pairs");
                    }
                    op.matrix(r, c) = cplx{e[0].get<double>(), e[1].get<double>()};
                }
            }
        }
        if (op.kind == GateKind::Unitary) {
            const auto expected = static_cast<Eigen::Index>(std::size_t{1} << std::min<std::size_t>(op.wires.size(), 20));
            if (op.matrix.rows() != expected || !is_unitary(op.matrix)) {
                throw fail("matrix", "matrix must be a unitary of dimension 2^" +
                                         std::to_string(op.wires.size()));
            }
        } else if (jo.contains("matrix")) {
            throw fail("matrix", "only Unitary ops carry a matrix");
        } else if (op.params.size() != gate_param_count(op.kind)) {
            throw fail("params", std::string(gate_name(op.kind)) + " expects " +
                                     std::to_string(gate_param_count(op.kind)) + " parameters");
        }
        try {
            circuit.add(std::move(op));
        } catch (const std::invalid_argument &e) {
            throw fail("wires", e.what());
        }
    }
    return circuit;
}

std::string serialize(const CutSpec &cut) {
    json j;
    j["time_index"] = cut.time_index;
    j["cut_wires"] = cut.cut_wires;
    return j.dump() + "\n";
}

CutSpec parse_cut(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed cut JSON: ") + e.what(), line_of_offset(text, e.byte),
                         "");
    }
    CutSpec cut;
    if (!doc.contains("time_index") || !doc["time_index"].is_number_unsigned()) {
        throw ParseError("cut JSON needs an unsigned time_index", 1, "time_index");
    }
    if (!doc.contains("cut_wires") || !doc["cut_wires"].is_array()) {
        throw ParseError("cut JSON needs a cut_wires array", 1, "cut_wires");
    }
    cut.time_index = doc["time_index"].get<std::size_t>();
    for (const auto &w : doc["cut_wires"]) {
        if (!w.is_number_unsigned()) {
            throw ParseError("bad cut wire " + w.dump(), 1, "cut_wires");
        }
        cut.cut_wires.push_back(w.get<std::size_t>());
    }
    return cut;
}

} // namespace ricco
