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

#include "ricco/cut.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <json.hpp>

namespace ricco {

std::string_view method_name(Method m) {
    switch (m) {
    case Method::Uncut:
        return "uncut";
    case Method::Qcut:
        return "qcut";
    case Method::Ricco:
        return "ricco";
    }
    return "unknown";
}

Method method_from_name(std::string_view name) {
    if (name == "uncut") {
        return Method::Uncut;
    }
    if (name == "qcut") {
        return Method::Qcut;
    }
    if (name == "ricco") {
        return Method::Ricco;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string to_json(const ReconstructionResult &result) {
    nlohmann::ordered_json j;
    j["method"] = method_name(result.method);
    j["value"] = result.value;
    j["distinct_circuits"] = result.ledger.distinct_circuits;
    j["shots_total"] = result.ledger.shots_total;
    auto terms = nlohmann::ordered_json::array();
    for (const auto &t : result.terms) {
        nlohmann::ordered_json jt;
        jt["group"] = t.group;
        jt["term"] = t.term;
        jt["cut_pauli"] = t.cut_pauli.str();
        jt["up"] = t.up;
        jt["down"] = t.down;
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

namespace {

void check_observable(const FragmentPair &f, const Observable &obs) {
    if (obs.empty()) {
        throw std::invalid_argument("observable has no terms");
    }
    if (obs.n_qubits() != f.n_wires()) {
        throw std::invalid_argument("observable acts on " + std::to_string(obs.n_qubits()) +
                                    " qubits, fragments cover " + std::to_string(f.n_wires()));
    }
}

} // namespace

PauliString upstream_part(const FragmentPair &f, const PauliString &term) {
    if (term.size() != f.n_wires()) {
        throw std::invalid_argument("term " + term.str() + " does not match the cut register");
    }
    std::string word(f.upstream_wires.size(), 'I');
    for (std::size_t i = 0; i < word.size(); ++i) {
        const auto orig = f.upstream_wires[i];
        if (std::find(f.cut_wires.begin(), f.cut_wires.end(), orig) == f.cut_wires.end()) {
            word[i] = term[orig];
        }
    }
    return PauliString(word);
}

PauliString downstream_part(const FragmentPair &f, const PauliString &term) {
    if (term.size() != f.n_wires()) {
        throw std::invalid_argument("term " + term.str() + " does not match the cut register");
    }
    std::string word(f.downstream_wires.size(), 'I');
    for (std::size_t i = 0; i < word.size(); ++i) {
        word[i] = term[f.downstream_wires[i]];
    }
    return PauliString(word);
}

std::string upstream_key(const FragmentPair &f, const PauliString &term) {
    if (term.is_identity()) {
        if (term.size() != f.n_wires()) {
            throw std::invalid_argument("term " + term.str() + " does not match the cut register");
        }
        return "";
    }
    return upstream_part(f, term).str();
}

std::uint64_t qcut_circuits_per_group(std::size_t k, std::size_t downstream_bases) {
    std::uint64_t three = 1;
    std::uint64_t four = 1;
    for (std::size_t i = 0; i < k; ++i) {
        three *= 3;
        four *= 4;
    }
    return three + four * std::max<std::size_t>(downstream_bases, 1);
}

std::uint64_t ricco_circuits_per_group(std::size_t k, std::size_t downstream_bases) {
    return 1 + (std::uint64_t{1} << k) * std::max<std::size_t>(downstream_bases, 1);
}

double uncut_expectation(const Circuit &circuit, const Observable &observable,
                         const Bindings &bindings) {
    if (circuit.n_wires() > kDenseQubitLimit) {
        throw std::invalid_argument("uncut_expectation: more than " +
                                    std::to_string(kDenseQubitLimit) + " qubits");
    }
    if (observable.n_qubits() != circuit.n_wires()) {
        throw std::invalid_argument("uncut_expectation: observable/circuit size mismatch");
    }
    return expectation(simulate(circuit, bindings), observable);
}

const Bindings &GroupBindings::for_group(const std::string &key) const {
    const auto it = per_group.find(key);
    return it == per_group.end() ? fallback : it->second;
}

namespace {

struct Member {
    double coeff;
    PauliString term;
    PauliString down; ///< downstream-local word
    std::size_t basis; ///< index into Group::bases
};

struct Group {
    std::string key;
    PauliString up; ///< upstream-local word, I on cut positions
    std::vector<Member> members;
    std::vector<std::string> bases; ///< qubit-wise merged downstream settings
};

/// Identity-only terms go to `constant`; everything else is grouped by
/// upstream key in lexicographic order.
std::vector<Group> split_groups(const FragmentPair &f, const Observable &obs, double &constant) {
    check_observable(f, obs);
    constant = 0.0;
    std::map<std::string, Group> by_key;
    for (const auto &t : obs.terms()) {
        const auto key = upstream_key(f, t.pauli);
        if (key.empty()) {
            constant += t.coeff;
            continue;
        }
        auto &g = by_key[key];
        if (g.members.empty()) {
            g.key = key;
            g.up = PauliString(key);
        }
        g.members.push_back({t.coeff, t.pauli, downstream_part(f, t.pauli), 0});
    }
    std::vector<Group> out;
    for (auto &[key, g] : by_key) {
        for (auto &m : g.members) {
            const auto &word = m.down.str();
            bool placed = false;
            for (std::size_t b = 0; b < g.bases.size() && !placed; ++b) {
                auto &basis = g.bases[b];
                bool ok = true;
                for (std::size_t w = 0; w < word.size() && ok; ++w) {
                    ok = word[w] == 'I' || basis[w] == 'I' || word[w] == basis[w];
                }
                if (ok) {
                    for (std::size_t w = 0; w < word.size(); ++w) {
                        if (word[w] != 'I') {
                            basis[w] = word[w];
                        }
                    }
                    m.basis = b;
                    placed = true;
                }
            }
            if (!placed) {
                m.basis = g.bases.size();
                g.bases.push_back(word);
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// Upstream-local word with the letters of `cut` placed on the cut wires.
PauliString with_cut(const FragmentPair &f, const PauliString &up, const PauliString &cut) {
    std::string word = up.str();
    for (std::size_t j = 0; j < f.cut_local.size(); ++j) {
        word[f.cut_local[j]] = cut[j];
    }
    return PauliString(word);
}

/// Basis index of the downstream register for cut-register basis index i.
std::size_t prep_index(const FragmentPair &f, std::size_t i) {
    const std::size_t k = f.k();
    const std::size_t nd = f.downstream.n_wires();
    std::size_t idx = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (((i >> (k - 1 - j)) & 1U) != 0) {
            idx |= std::size_t{1} << wire_bit(nd, f.prep_local[j]);
        }
    }
    return idx;
}

/// psi_i = V |i on the preparation wires, 0 elsewhere>, for all 2^k i.
std::vector<StateVector> downstream_images(const FragmentPair &f, const Bindings &b) {
    const std::size_t dk = std::size_t{1} << f.k();
    std::vector<StateVector> out;
    out.reserve(dk);
    for (std::size_t i = 0; i < dk; ++i) {
        out.push_back(
            simulate(f.downstream, b, StateVector::basis(f.downstream.n_wires(), prep_index(f, i))));
    }
    return out;
}

/// M_ji = <psi_j| D |psi_i>.
CMatrix transfer_matrix(const std::vector<StateVector> &images, const PauliString &d) {
    const auto dk = static_cast<Eigen::Index>(images.size());
    CMatrix m(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i) {
        for (Eigen::Index j = 0; j < dk; ++j) {
            m(j, i) = matrix_element(images[static_cast<std::size_t>(j)], d,
                                     images[static_cast<std::size_t>(i)]);
        }
    }
    return m;
}

/// Tr[D Lambda(P)] = sum_ij P_ij M_ji.
double inject(const PauliString &p, const CMatrix &m) {
    return (matrix_of(p) * m).trace().real();
}

std::uint64_t support_mask(const PauliString &p) {
    return p.flip_mask() | p.phase_mask();
}

/// Computational-basis distribution of `circuit` after the basis change for
/// `setting`, exact or sampled.
class Executor {
  public:
    explicit Executor(const Mode &mode) : mode_(mode) {}

    std::vector<double> measure(const Circuit &circuit, const Bindings &b,
                                const std::optional<StateVector> &initial,
                                const PauliString &setting) {
        Circuit c = circuit;
        for (auto &op : measurement_rotation(setting)) {
            c.add(std::move(op));
        }
        auto dist = outcome_distribution(simulate(c, b, initial));
        ++ledger_.distinct_circuits;
        if (const auto *shots = std::get_if<ShotsMode>(&mode_)) {
            const auto counts = sample_counts(dist, shots->shots, mix_seed(shots->seed, stream_++));
            for (std::size_t x = 0; x < dist.size(); ++x) {
                dist[x] = static_cast<double>(counts[x]) / static_cast<double>(shots->shots);
            }
            ledger_.shots_total += shots->shots;
        }
        return dist;
    }

    [[nodiscard]] const ExecutionLedger &ledger() const { return ledger_; }

  private:
    Mode mode_;
    std::uint64_t stream_ = 0;
    ExecutionLedger ledger_;
};

/// Single-qubit product state on the preparation wires: 0 |0>, 1 |1>,
/// 2 |+>, 3 |+i>.
StateVector prep_state(const FragmentPair &f, const std::vector<int> &labels) {
    const std::size_t nd = f.downstream.n_wires();
    static const double r = 1.0 / std::sqrt(2.0);
    std::vector<std::array<cplx, 2>> local(nd, {cplx{1, 0}, cplx{0, 0}});
    for (std::size_t j = 0; j < labels.size(); ++j) {
        auto &v = local[f.prep_local[j]];
        switch (labels[j]) {
        case 0:
            v = {cplx{1, 0}, cplx{0, 0}};
            break;
        case 1:
            v = {cplx{0, 0}, cplx{1, 0}};
            break;
        case 2:
            v = {cplx{r, 0}, cplx{r, 0}};
            break;
        default:
            v = {cplx{r, 0}, cplx{0, r}};
            break;
        }
    }
    std::vector<cplx> amps(std::size_t{1} << nd);
    for (std::size_t x = 0; x < amps.size(); ++x) {
        cplx a{1, 0};
        for (std::size_t w = 0; w < nd; ++w) {
            a *= local[w][(x >> wire_bit(nd, w)) & 1U];
        }
        amps[x] = a;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

/// Weight of preparation `label` in the decomposition of letter `p`.
double prep_weight(char p, int label) {
    switch (p) {
    case 'I':
        return label <= 1 ? 1.0 : 0.0;
    case 'Z':
        return label == 0 ? 1.0 : (label == 1 ? -1.0 : 0.0);
    case 'X':
        return label == 2 ? 2.0 : (label <= 1 ? -1.0 : 0.0);
    default:
        return label == 3 ? 2.0 : (label <= 1 ? -1.0 : 0.0);
    }
}

std::vector<std::vector<int>> label_tuples(std::size_t k, int alphabet) {
    std::vector<std::vector<int>> out;
    std::size_t count = 1;
    for (std::size_t j = 0; j < k; ++j) {
        count *= static_cast<std::size_t>(alphabet);
    }
    for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<int> t(k);
        std::size_t rest = idx;
        for (std::size_t j = k; j-- > 0;) {
            t[j] = static_cast<int>(rest % static_cast<std::size_t>(alphabet));
            rest /= static_cast<std::size_t>(alphabet);
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Per-basis downstream parity estimates E[basis][prep][member].
struct DownstreamData {
    std::vector<std::vector<std::vector<double>>> parity;
};

DownstreamData measure_downstream(const FragmentPair &f, const Group &g, const Bindings &b,
                                  const std::vector<std::vector<int>> &preps, Executor &exec) {
    DownstreamData d;
    d.parity.assign(g.bases.size(), {});
    for (std::size_t bi = 0; bi < g.bases.size(); ++bi) {
        const PauliString setting(g.bases[bi]);
        for (const auto &labels : preps) {
            const auto dist = exec.measure(f.downstream, b, prep_state(f, labels), setting);
            std::vector<double> per_member(g.members.size(), 0.0);
            for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
                if (g.members[mi].basis == bi) {
                    per_member[mi] = parity_expectation(dist, support_mask(g.members[mi].down));
                }
            }
            d.parity[bi].push_back(std::move(per_member));
        }
    }
    return d;
}

void add_term(ReconstructionResult &r, const Group &g, const Member &m, const PauliString &p,
              double up, double down) {
    r.terms.push_back({g.key, m.term.str(), p, up, down});
}

} // namespace

ReconstructionResult qcut_expectation(const FragmentPair &f, const Observable &observable,
                                      const Mode &mode, const Bindings &bindings) {
    double constant = 0.0;
    const auto groups = split_groups(f, observable, constant);
    const std::size_t k = f.k();
    const double norm = std::ldexp(1.0, -static_cast<int>(k));
    const auto cut_paulis = all_pauli_strings(k);

    ReconstructionResult r;
    r.method = Method::Qcut;
    r.value = constant;

    if (is_exact(mode)) {
        std::optional<StateVector> up_state;
        std::vector<StateVector> images;
        for (const auto &g : groups) {
            if (!up_state) {
                up_state = simulate(f.upstream, bindings);
                images = downstream_images(f, bindings);
            }
            for (const auto &m : g.members) {
                const CMatrix tm = transfer_matrix(images, m.down);
                for (const auto &p : cut_paulis) {
                    const double up = expectation(*up_state, with_cut(f, g.up, p));
                    const double down = inject(p, tm);
                    r.value += m.coeff * norm * up * down;
                    add_term(r, g, m, p, up, down);
                }
            }
            r.ledger.distinct_circuits += qcut_circuits_per_group(k, g.bases.size());
        }
        return r;
    }

    Executor exec(mode);
    const auto preps = label_tuples(k, 4);
    const auto settings = label_tuples(k, 3);
    static constexpr char kSetting[3] = {'X', 'Y', 'Z'};
    for (const auto &g : groups) {
        std::map<std::string, std::vector<double>> up_dist;
        for (const auto &s : settings) {
            std::string letters(k, 'Z');
            for (std::size_t j = 0; j < k; ++j) {
                letters[j] = kSetting[s[j]];
            }
            const PauliString cut_setting(letters);
            up_dist[letters] = exec.measure(f.upstream, bindings, std::nullopt,
                                            with_cut(f, g.up, cut_setting));
        }
        const auto down = measure_downstream(f, g, bindings, preps, exec);
        for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
            const auto &m = g.members[mi];
            for (const auto &p : cut_paulis) {
                std::string setting = p.str();
                std::replace(setting.begin(), setting.end(), 'I', 'Z');
                const double up = parity_expectation(up_dist.at(setting),
                                                     support_mask(with_cut(f, g.up, p)));
                double dv = 0.0;
                for (std::size_t ri = 0; ri < preps.size(); ++ri) {
                    double w = 1.0;
                    for (std::size_t j = 0; j < k && w != 0.0; ++j) {
                        w *= prep_weight(p[j], preps[ri][j]);
                    }
                    if (w != 0.0) {
                        dv += w * down.parity[m.basis][ri][mi];
                    }
                }
                r.value += m.coeff * norm * up * dv;
                add_term(r, g, m, p, up, dv);
            }
        }
    }
    r.ledger = exec.ledger();
    return r;
}

ReconstructionResult ricco_expectation(const FragmentPair &f, const GroupBindings &bindings,
                                       const Observable &observable, const Mode &mode) {
    if (!f.has_ansatz) {
        throw std::invalid_argument("ricco_expectation: fragments lack the cut unitary");
    }
    double constant = 0.0;
    const auto groups = split_groups(f, observable, constant);
    const std::size_t k = f.k();
    const double norm = std::ldexp(1.0, -static_cast<int>(k));
    const auto cut_paulis = diagonal_pauli_strings(k);

    ReconstructionResult r;
    r.method = Method::Ricco;
    r.value = constant;

    if (is_exact(mode)) {
        for (const auto &g : groups) {
            const auto &b = bindings.for_group(g.key);
            const auto up_state = simulate(f.upstream, b);
            const auto images = downstream_images(f, b);
            for (const auto &m : g.members) {
                const CMatrix tm = transfer_matrix(images, m.down);
                for (const auto &p : cut_paulis) {
                    const double up = expectation(up_state, with_cut(f, g.up, p));
                    const double down = inject(p, tm);
                    r.value += m.coeff * norm * up * down;
                    add_term(r, g, m, p, up, down);
                }
            }
            r.ledger.distinct_circuits += ricco_circuits_per_group(k, g.bases.size());
        }
        return r;
    }

    Executor exec(mode);
    const auto preps = label_tuples(k, 2);
    for (const auto &g : groups) {
        const auto &b = bindings.for_group(g.key);
        const auto up_dist = exec.measure(f.upstream, b, std::nullopt, g.up);
        const auto down = measure_downstream(f, g, b, preps, exec);
        for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
            const auto &m = g.members[mi];
            for (const auto &p : cut_paulis) {
                const double up =
                    parity_expectation(up_dist, support_mask(with_cut(f, g.up, p)));
                const auto qmask = p.phase_mask();
                double dv = 0.0;
                for (std::size_t bi = 0; bi < preps.size(); ++bi) {
                    const double sign = (std::popcount(bi & qmask) & 1U) != 0 ? -1.0 : 1.0;
                    dv += sign * down.parity[m.basis][bi][mi];
                }
                r.value += m.coeff * norm * up * dv;
                add_term(r, g, m, p, up, dv);
            }
        }
    }
    r.ledger = exec.ledger();
    return r;
}

ReconstructionResult ricco_expectation(const FragmentPair &f, const Bindings &bindings,
                                       const Observable &observable, const Mode &mode) {
    return ricco_expectation(f, GroupBindings{bindings, {}}, observable, mode);
}

double leakage(const FragmentPair &f, const GroupBindings &bindings, const Observable &observable) {
    double constant = 0.0;
    const auto groups = split_groups(f, observable, constant);
    const std::size_t k = f.k();
    const double norm = std::ldexp(1.0, -static_cast<int>(k));
    double total = 0.0;
    for (const auto &g : groups) {
        const auto &b = bindings.for_group(g.key);
        const auto up_state = simulate(f.upstream, b);
        const auto images = downstream_images(f, b);
        for (const auto &m : g.members) {
            const CMatrix tm = transfer_matrix(images, m.down);
            for (const auto &p : all_pauli_strings(k)) {
                if (p.is_diagonal()) {
                    continue;
                }
                const double up = expectation(up_state, with_cut(f, g.up, p));
                total += std::abs(m.coeff * norm * up * inject(p, tm));
            }
        }
    }
    return total;
}

double leakage(const FragmentPair &f, const Bindings &bindings, const Observable &observable) {
    return leakage(f, GroupBindings{bindings, {}}, observable);
}

} // namespace ricco
