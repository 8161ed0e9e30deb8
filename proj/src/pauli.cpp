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

#include "ricco/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ricco {

namespace {

void check_dense(std::size_t n) {
    if (n > kDenseQubitLimit) {
        throw std::invalid_argument("dense construction limited to " +
                                    std::to_string(kDenseQubitLimit) + " qubits, got " +
                                    std::to_string(n));
    }
}

/// Phase picked up by basis state |x> under p: p|x> = phase(x) |x ^ flip>.
cplx pauli_phase(std::uint64_t x, std::uint64_t phase_mask, std::size_t y_count) {
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx base = kIPow[y_count % 4];
    return (std::popcount(x & phase_mask) & 1U) != 0 ? -base : base;
}

} // namespace

PauliString::PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) {
        throw std::invalid_argument("empty Pauli string");
    }
    if (letters_.size() > 63) {
        throw std::invalid_argument("Pauli string longer than 63 letters");
    }
    for (const char c : letters_) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw std::invalid_argument(std::string("bad Pauli letter '") + c + "' in \"" +
                                        letters_ + "\"");
        }
    }
}

bool PauliString::is_identity() const {
    return letters_.find_first_not_of('I') == std::string::npos;
}

bool PauliString::is_diagonal() const {
    return letters_.find_first_of("XY") == std::string::npos;
}

std::vector<std::size_t> PauliString::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < letters_.size(); ++w) {
        if (letters_[w] != 'I') {
            out.push_back(w);
        }
    }
    return out;
}

std::uint64_t PauliString::flip_mask() const {
    std::uint64_t m = 0;
    const std::size_t n = letters_.size();
    for (std::size_t w = 0; w < n; ++w) {
        if (letters_[w] == 'X' || letters_[w] == 'Y') {
            m |= std::uint64_t{1} << wire_bit(n, w);
        }
    }
    return m;
}

std::uint64_t PauliString::phase_mask() const {
    std::uint64_t m = 0;
    const std::size_t n = letters_.size();
    for (std::size_t w = 0; w < n; ++w) {
        if (letters_[w] == 'Z' || letters_[w] == 'Y') {
            m |= std::uint64_t{1} << wire_bit(n, w);
        }
    }
    return m;
}

std::size_t PauliString::y_count() const {
    return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), 'Y'));
}

Observable::Observable(std::vector<PauliTerm> terms) {
    std::map<PauliString, double> merged;
    for (auto &t : terms) {
        if (!std::isfinite(t.coeff)) {
            throw std::invalid_argument("non-finite coefficient on " + t.pauli.str());
        }
        if (t.pauli.size() == 0) {
            throw std::invalid_argument("empty Pauli string in observable");
        }
        if (n_ == 0) {
            n_ = t.pauli.size();
        } else if (t.pauli.size() != n_) {
            throw std::invalid_argument("term " + t.pauli.str() + " has length " +
                                        std::to_string(t.pauli.size()) + ", expected " +
                                        std::to_string(n_));
        }
        merged[t.pauli] += t.coeff;
    }
    for (auto &[p, c] : merged) {
        terms_.push_back({c, p});
    }
}

double Observable::coefficient_l1() const {
    double s = 0.0;
    for (const auto &t : terms_) {
        s += std::abs(t.coeff);
    }
    return s;
}

Observable parse_observable(std::string_view text) {
    std::vector<PauliTerm> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string coeff_tok;
        std::string word;
        std::string extra;
        if (!(fields >> coeff_tok)) {
            continue;
        }
        auto fail = [&](const std::string &msg) {
            return std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
        };
        if (!(fields >> word)) {
            throw fail("expected '<coefficient> <pauli string>'");
        }
        if (fields >> extra) {
            throw fail("unexpected token '" + extra + "'");
        }
        char *end = nullptr;
        const double coeff = std::strtod(coeff_tok.c_str(), &end);
        if (end == coeff_tok.c_str() || *end != '\0' || !std::isfinite(coeff)) {
            throw fail("non-numeric coefficient '" + coeff_tok + "'");
        }
        try {
            PauliString p(word);
            if (!terms.empty() && terms.front().pauli.size() != p.size()) {
                throw std::invalid_argument("length " + std::to_string(p.size()) +
                                            " differs from " +
                                            std::to_string(terms.front().pauli.size()));
            }
            terms.push_back({coeff, std::move(p)});
        } catch (const std::invalid_argument &e) {
            throw fail(e.what());
        }
    }
    if (terms.empty()) {
        throw std::invalid_argument("observable has no terms");
    }
    return Observable(std::move(terms));
}

std::string format_observable(const Observable &obs) {
    std::string out;
    char buf[64];
    for (const auto &t : obs.terms()) {
        std::snprintf(buf, sizeof buf, "%.17g", t.coeff);
        out += buf;
        out += ' ';
        out += t.pauli.str();
        out += '\n';
    }
    return out;
}

CMatrix matrix_of(const PauliString &p) {
    return matrix_of(Observable(1.0, p));
}

CMatrix matrix_of(const Observable &obs) {
    const std::size_t n = obs.n_qubits();
    if (n == 0) {
        throw std::invalid_argument("matrix_of: empty observable");
    }
    check_dense(n);
    const std::size_t dim = std::size_t{1} << n;
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto &t : obs.terms()) {
        const auto f = t.pauli.flip_mask();
        const auto pm = t.pauli.phase_mask();
        const auto ny = t.pauli.y_count();
        for (std::uint64_t y = 0; y < dim; ++y) {
            m(static_cast<Eigen::Index>(y ^ f), static_cast<Eigen::Index>(y)) +=
                t.coeff * pauli_phase(y, pm, ny);
        }
    }
    return m;
}

StateVector apply_pauli(const PauliString &p, const StateVector &psi) {
    if (p.size() != psi.n_qubits()) {
        throw std::invalid_argument("apply_pauli: " + std::to_string(p.size()) +
                                    "-letter string on " + std::to_string(psi.n_qubits()) +
                                    " qubits");
    }
    const auto f = p.flip_mask();
    const auto pm = p.phase_mask();
    const auto ny = p.y_count();
    std::vector<cplx> out(psi.dim());
    for (std::uint64_t y = 0; y < psi.dim(); ++y) {
        out[y ^ f] = pauli_phase(y, pm, ny) * psi[y];
    }
    return StateVector::from_amplitudes(std::move(out));
}

cplx matrix_element(const StateVector &phi, const PauliString &p, const StateVector &psi) {
    if (p.size() != psi.n_qubits() || phi.n_qubits() != psi.n_qubits()) {
        throw std::invalid_argument("matrix_element: dimension mismatch");
    }
    const auto f = p.flip_mask();
    const auto pm = p.phase_mask();
    const auto ny = p.y_count();
    cplx acc{0.0, 0.0};
    for (std::uint64_t y = 0; y < psi.dim(); ++y) {
        acc += std::conj(phi[y ^ f]) * pauli_phase(y, pm, ny) * psi[y];
    }
    return acc;
}

double expectation(const StateVector &psi, const PauliString &p) {
    if (p.size() != psi.n_qubits()) {
        throw std::invalid_argument("expectation: " + std::to_string(p.size()) +
                                    "-letter string on " + std::to_string(psi.n_qubits()) +
                                    " qubits");
    }
    return matrix_element(psi, p, psi).real();
}

double expectation(const DensityMatrix &rho, const PauliString &p) {
    if (p.size() != rho.n_qubits()) {
        throw std::invalid_argument("expectation: " + std::to_string(p.size()) +
                                    "-letter string on " + std::to_string(rho.n_qubits()) +
                                    "-qubit density matrix");
    }
    const auto f = p.flip_mask();
    const auto pm = p.phase_mask();
    const auto ny = p.y_count();
    const auto &m = rho.matrix();
    cplx acc{0.0, 0.0};
    for (std::uint64_t y = 0; y < rho.dim(); ++y) {
        acc += pauli_phase(y, pm, ny) *
               m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(y ^ f));
    }
    return acc.real();
}

double expectation(const StateVector &psi, const Observable &obs) {
    double e = 0.0;
    for (const auto &t : obs.terms()) {
        e += t.coeff * expectation(psi, t.pauli);
    }
    return e;
}

std::vector<PauliString> all_pauli_strings(std::size_t n) {
    if (n == 0 || n > 10) {
        throw std::invalid_argument("all_pauli_strings: n must be in [1, 10]");
    }
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    const std::size_t count = std::size_t{1} << (2 * n);
    std::vector<PauliString> out;
    out.reserve(count);
    std::string word(n, 'I');
    for (std::size_t idx = 0; idx < count; ++idx) {
        for (std::size_t w = 0; w < n; ++w) {
            word[w] = kLetters[(idx >> (2 * (n - 1 - w))) & 3U];
        }
        out.emplace_back(word);
    }
    return out;
}

std::vector<PauliString> diagonal_pauli_strings(std::size_t n) {
    if (n == 0 || n > 20) {
        throw std::invalid_argument("diagonal_pauli_strings: n must be in [1, 20]");
    }
    const std::size_t count = std::size_t{1} << n;
    std::vector<PauliString> out;
    out.reserve(count);
    std::string word(n, 'I');
    for (std::size_t idx = 0; idx < count; ++idx) {
        for (std::size_t w = 0; w < n; ++w) {
            word[w] = ((idx >> (n - 1 - w)) & 1U) != 0 ? 'Z' : 'I';
        }
        out.emplace_back(word);
    }
    return out;
}

std::map<PauliString, double> decompose(const DensityMatrix &rho) {
    if (!rho.is_valid(1e-10)) {
        throw std::invalid_argument("decompose: not a valid density matrix");
    }
    std::map<PauliString, double> out;
    for (auto &p : all_pauli_strings(rho.n_qubits())) {
        const double c = expectation(rho, p);
        out.emplace(std::move(p), c);
    }
    return out;
}

CMatrix reconstruct(const std::map<PauliString, double> &coefficients, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("reconstruct: n must be positive");
    }
    check_dense(n);
    std::vector<PauliTerm> terms;
    const double norm = std::ldexp(1.0, -static_cast<int>(n));
    for (const auto &[p, c] : coefficients) {
        if (p.size() != n) {
            throw std::invalid_argument("reconstruct: term " + p.str() + " has wrong length");
        }
        terms.push_back({c * norm, p});
    }
    if (terms.empty()) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        return CMatrix::Zero(dim, dim);
    }
    return matrix_of(Observable(std::move(terms)));
}

std::vector<GateOp> measurement_rotation(const PauliString &p) {
    std::vector<GateOp> out;
    for (std::size_t w = 0; w < p.size(); ++w) {
        if (p[w] == 'X') {
            out.push_back({GateKind::H, {w}, {}, {}});
        } else if (p[w] == 'Y') {
            out.push_back({GateKind::Sdg, {w}, {}, {}});
            out.push_back({GateKind::H, {w}, {}, {}});
        }
    }
    return out;
}

double parity_expectation(std::span<const double> distribution, std::uint64_t mask) {
    double e = 0.0;
    for (std::size_t x = 0; x < distribution.size(); ++x) {
        e += (std::popcount(x & mask) & 1U) != 0 ? -distribution[x] : distribution[x];
    }
    return e;
}

} // namespace ricco
