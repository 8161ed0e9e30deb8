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

#include "ricco/optimizer.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ricco/state.hpp"

namespace ricco {

std::string_view cost_name(CostKind kind) {
    switch (kind) {
    case CostKind::Restricted:
        return "restricted";
    case CostKind::Alignment:
        return "alignment";
    case CostKind::Paper:
        return "paper";
    }
    return "unknown";
}

CostKind cost_from_name(std::string_view name) {
    if (name == "restricted") {
        return CostKind::Restricted;
    }
    if (name == "alignment") {
        return CostKind::Alignment;
    }
    if (name == "paper") {
        return CostKind::Paper;
    }
    throw std::invalid_argument("unknown cost '" + std::string(name) + "'");
}

double fidelity_restricted(const std::map<PauliString, double> &expectations, std::size_t n_a,
                           std::size_t n_b, std::uint64_t basis_state) {
    const std::size_t n = n_a + n_b;
    if (n == 0 || n > 30) {
        throw std::invalid_argument("fidelity_restricted: register size must be in [1, 30]");
    }
    if (basis_state >> n != 0) {
        throw std::invalid_argument("fidelity_restricted: basis state out of range");
    }
    double sum = 0.0;
    for (const auto &tail : diagonal_pauli_strings(n_b)) {
        const PauliString p(std::string(n_a, 'Z') + tail.str());
        const auto it = expectations.find(p);
        if (it == expectations.end()) {
            throw std::invalid_argument("fidelity_restricted: missing expectation for " + p.str());
        }
        const double on_x = (std::popcount(basis_state & p.phase_mask()) & 1) != 0 ? -1.0 : 1.0;
        sum += it->second * on_x;
    }
    return std::ldexp(sum, -static_cast<int>(n));
}

double cost_paper(std::span<const double> p) {
    double prod = 1.0;
    for (const double x : p) {
        prod *= x;
    }
    return (1.0 - prod) * (1.0 - prod);
}

double cost_alignment(std::span<const double> p) {
    double s = 0.0;
    for (const double x : p) {
        s += x * x;
    }
    return (1.0 - s) * (1.0 - s);
}

namespace {

/// Masks of every Q in {I,Z}^k, merged with the O_A mask.
std::vector<std::uint64_t> restricted_masks(const UpstreamProbabilities &probs) {
    const std::size_t k = probs.cut_masks.size();
    std::vector<std::uint64_t> out;
    for (std::size_t q = 0; q < (std::size_t{1} << k); ++q) {
        std::uint64_t m = probs.observable_mask;
        for (std::size_t j = 0; j < k; ++j) {
            if (((q >> j) & 1U) != 0) {
                m |= probs.cut_masks[j];
            }
        }
        out.push_back(m);
    }
    return out;
}

double chi(std::uint64_t x, std::uint64_t mask) {
    return (std::popcount(x & mask) & 1) != 0 ? -1.0 : 1.0;
}

double restricted_score(const UpstreamProbabilities &probs, const std::vector<std::uint64_t> &masks,
                        std::vector<double> *e) {
    double s = 0.0;
    for (const auto m : masks) {
        const double v = parity_expectation(probs.p, m);
        if (e != nullptr) {
            e->push_back(v);
        }
        s += v * v;
    }
    return s / static_cast<double>(masks.size());
}

} // namespace

double cost_value(CostKind kind, const UpstreamProbabilities &probs) {
    switch (kind) {
    case CostKind::Alignment:
        return cost_alignment(probs.p);
    case CostKind::Paper:
        return cost_paper(probs.p);
    case CostKind::Restricted: {
        const double s = restricted_score(probs, restricted_masks(probs), nullptr);
        return (1.0 - s) * (1.0 - s);
    }
    }
    throw std::invalid_argument("cost_value: unknown cost");
}

std::vector<double> cost_gradient(CostKind kind, const UpstreamProbabilities &probs) {
    const auto &p = probs.p;
    std::vector<double> g(p.size(), 0.0);
    switch (kind) {
    case CostKind::Alignment: {
        double s = 0.0;
        for (const double x : p) {
            s += x * x;
        }
        for (std::size_t x = 0; x < p.size(); ++x) {
            g[x] = -4.0 * (1.0 - s) * p[x];
        }
        return g;
    }
    case CostKind::Paper: {
        std::vector<double> prefix(p.size() + 1, 1.0);
        std::vector<double> suffix(p.size() + 1, 1.0);
        for (std::size_t x = 0; x < p.size(); ++x) {
            prefix[x + 1] = prefix[x] * p[x];
        }
        for (std::size_t x = p.size(); x-- > 0;) {
            suffix[x] = suffix[x + 1] * p[x];
        }
        const double prod = prefix[p.size()];
        for (std::size_t x = 0; x < p.size(); ++x) {
            g[x] = -2.0 * (1.0 - prod) * prefix[x] * suffix[x + 1];
        }
        return g;
    }
    case CostKind::Restricted: {
        const auto masks = restricted_masks(probs);
        std::vector<double> e;
        const double s = restricted_score(probs, masks, &e);
        const double outer = -2.0 * (1.0 - s) * 2.0 / static_cast<double>(masks.size());
        for (std::size_t x = 0; x < p.size(); ++x) {
            double acc = 0.0;
            for (std::size_t q = 0; q < masks.size(); ++q) {
                acc += e[q] * chi(x, masks[q]);
            }
            g[x] = outer * acc;
        }
        return g;
    }
    }
    throw std::invalid_argument("cost_gradient: unknown cost");
}

namespace {

Circuit rotated_upstream(const FragmentPair &f, const PauliString &word) {
    if (word.size() != f.upstream.n_wires()) {
        throw std::invalid_argument("upstream word " + word.str() + " does not match the fragment");
    }
    for (const auto w : f.cut_local) {
        if (word[w] != 'I') {
            throw std::invalid_argument("upstream word " + word.str() +
                                        " must carry I on the cut wires");
        }
    }
    Circuit c = f.upstream;
    for (auto &op : measurement_rotation(word)) {
        c.add(std::move(op));
    }
    return c;
}

UpstreamProbabilities probabilities_of(const FragmentPair &f, const Circuit &rotated,
                                       const PauliString &word, const Bindings &b,
                                       const Mode &mode, const std::optional<AngleShift> &shift) {
    UpstreamProbabilities out;
    out.n_qubits = rotated.n_wires();
    out.p = outcome_distribution(simulate(rotated, b, std::nullopt, shift));
    if (const auto *s = std::get_if<ShotsMode>(&mode)) {
        const auto counts = sample_counts(out.p, s->shots, s->seed);
        for (std::size_t x = 0; x < out.p.size(); ++x) {
            out.p[x] = static_cast<double>(counts[x]) / static_cast<double>(s->shots);
        }
    }
    for (const auto w : f.cut_local) {
        out.cut_masks.push_back(std::uint64_t{1} << wire_bit(out.n_qubits, w));
    }
    out.observable_mask = word.flip_mask() | word.phase_mask();
    return out;
}

} // namespace

UpstreamProbabilities upstream_probabilities(const FragmentPair &fragments,
                                             const PauliString &upstream_word,
                                             const Bindings &bindings, const Mode &mode,
                                             const std::optional<AngleShift> &shift) {
    return probabilities_of(fragments, rotated_upstream(fragments, upstream_word), upstream_word,
                            bindings, mode, shift);
}

AdamState::AdamState(std::size_t n, AdamHyper hyper) : hyper_(hyper), m_(n, 0.0), v_(n, 0.0) {}

void AdamState::step(std::vector<double> &theta, const std::vector<double> &grad) {
    if (theta.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("AdamState::step: size mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        m_[i] = hyper_.beta1 * m_[i] + (1.0 - hyper_.beta1) * grad[i];
        v_[i] = hyper_.beta2 * v_[i] + (1.0 - hyper_.beta2) * grad[i] * grad[i];
        theta[i] -= hyper_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + hyper_.eps);
    }
}

GroupCost::GroupCost(const FragmentPair &fragments_with_u, PauliString upstream_word,
                     Bindings fixed, CostKind kind, Mode mode)
    : fragments_(fragments_with_u), circuit_(rotated_upstream(fragments_with_u, upstream_word)),
      word_(std::move(upstream_word)), fixed_(std::move(fixed)), kind_(kind),
      mode_(std::move(mode)) {
    if (!fragments_.has_ansatz) {
        throw std::invalid_argument("GroupCost: fragments lack the cut unitary");
    }
    for (const auto &name : fragments_.ansatz_params) {
        std::vector<Occurrence> occ;
        for (std::size_t i = 0; i < circuit_.size(); ++i) {
            const auto &op = circuit_.ops()[i];
            for (std::size_t slot = 0; slot < op.params.size(); ++slot) {
                if (op.params[slot].name == name) {
                    occ.push_back({i, slot, op.params[slot].scale,
                                   supports_parameter_shift(op.kind)});
                }
            }
        }
        occurrences_.push_back(std::move(occ));
    }
}

Bindings GroupCost::bindings(const std::vector<double> &theta) const {
    if (theta.size() != fragments_.ansatz_params.size()) {
        throw std::invalid_argument("GroupCost: expected " +
                                    std::to_string(fragments_.ansatz_params.size()) +
                                    " angles, got " + std::to_string(theta.size()));
    }
    Bindings b = fixed_;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        b[fragments_.ansatz_params[i]] = theta[i];
    }
    return b;
}

UpstreamProbabilities GroupCost::probabilities(const std::vector<double> &theta,
                                               const std::optional<AngleShift> &shift) {
    Mode mode = mode_;
    if (auto *s = std::get_if<ShotsMode>(&mode)) {
        s->seed = mix_seed(s->seed, stream_++);
        ledger_.shots_total += s->shots;
    }
    ++ledger_.distinct_circuits;
    return probabilities_of(fragments_, circuit_, word_, bindings(theta), mode, shift);
}

double GroupCost::operator()(const std::vector<double> &theta) {
    last_.emplace(theta, probabilities(theta, std::nullopt));
    return cost_value(kind_, last_->second);
}

std::vector<double> GroupCost::gradient(const std::vector<double> &theta, GradientMethod method,
                                        double h) {
    std::vector<double> grad(theta.size(), 0.0);
    if (method == GradientMethod::FiniteDifference) {
        if (!(h > 0.0)) {
            throw std::invalid_argument("finite-difference step must be positive");
        }
        for (std::size_t j = 0; j < theta.size(); ++j) {
            auto plus = theta;
            auto minus = theta;
            plus[j] += h;
            minus[j] -= h;
            grad[j] = (cost_value(kind_, probabilities(plus, std::nullopt)) -
                       cost_value(kind_, probabilities(minus, std::nullopt))) /
                      (2.0 * h);
        }
        return grad;
    }
    for (std::size_t j = 0; j < theta.size(); ++j) {
        for (const auto &o : occurrences_[j]) {
            if (!o.shiftable) {
                throw std::invalid_argument(
                    "parameter-shift requested for '" + fragments_.ansatz_params[j] + "' on " +
                    std::string(gate_name(circuit_.ops()[o.op_index].kind)) +
                    ", which has no exact shift rule");
            }
        }
    }
    if (!last_ || last_->first != theta) {
        last_.emplace(theta, probabilities(theta, std::nullopt));
    }
    const auto &base = last_->second;
    const auto dcdp = cost_gradient(kind_, base);
    constexpr double kShift = std::numbers::pi / 2.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        for (const auto &o : occurrences_[j]) {
            const auto plus = probabilities(theta, AngleShift{o.op_index, o.slot, kShift});
            const auto minus = probabilities(theta, AngleShift{o.op_index, o.slot, -kShift});
            double acc = 0.0;
            for (std::size_t x = 0; x < dcdp.size(); ++x) {
                acc += dcdp[x] * (plus.p[x] - minus.p[x]) / 2.0;
            }
            grad[j] += o.scale * acc;
        }
    }
    return grad;
}

bool RiccoRun::ok() const {
    for (const auto &g : groups) {
        if (!g.error.empty()) {
            return false;
        }
    }
    return true;
}

OptimizationTrace optimize_group(GroupCost &cost, const std::vector<double> &theta0,
                                 const RiccoConfig &config) {
    if (!(config.tol > 0.0)) {
        throw std::invalid_argument("RICCO tolerance must be positive");
    }
    OptimizationTrace trace;
    std::vector<double> theta = theta0;
    const auto start = cost.ledger();
    auto executions = [&] { return cost.ledger().distinct_circuits - start.distinct_circuits; };

    trace.initial_cost = cost(theta);
    if (!std::isfinite(trace.initial_cost)) {
        trace.error = "non-finite cost at the initial angles";
    }
    AdamState adam(theta.size(), config.adam);
    const bool exact = is_exact(config.mode);
    const std::size_t window = std::max<std::size_t>(config.moving_average, 1);
    std::vector<double> history{trace.initial_cost};
    double prev = trace.initial_cost;
    for (std::size_t it = 0; trace.error.empty() && it < config.max_inner_iters; ++it) {
        const auto grad = cost.gradient(theta, config.gradient, config.fd_step);
        adam.step(theta, grad);
        const double c = cost(theta);
        trace.cost.push_back(c);
        trace.executions_cum.push_back(executions());
        ++trace.iterations;
        if (!std::isfinite(c)) {
            trace.error = "non-finite cost at iteration " + std::to_string(trace.iterations);
            break;
        }
        if (exact) {
            if (std::abs(prev - c) <= config.tol) {
                trace.converged = true;
                break;
            }
        } else {
            history.push_back(c);
            if (history.size() > window) {
                const auto n = history.size();
                double now = 0.0;
                double before = 0.0;
                for (std::size_t i = 0; i < window; ++i) {
                    now += history[n - 1 - i];
                    before += history[n - 2 - i];
                }
                if (std::abs(now - before) / static_cast<double>(window) <= config.tol) {
                    trace.converged = true;
                    break;
                }
            }
        }
        prev = c;
    }
    trace.final_theta = theta;
    trace.ledger.distinct_circuits = executions();
    trace.ledger.shots_total = cost.ledger().shots_total - start.shots_total;
    return trace;
}

RiccoRun ricco_optimize(const FragmentPair &fragments_with_u, const Observable &observable,
                        const RiccoAnsatz &ansatz, const Bindings &fixed,
                        const RiccoConfig &config) {
    if (fragments_with_u.ansatz_params != ansatz.param_names()) {
        throw std::invalid_argument("ricco_optimize: fragments were built with another ansatz");
    }
    std::set<std::string> keys;
    for (const auto &t : observable.terms()) {
        if (auto key = upstream_key(fragments_with_u, t.pauli); !key.empty()) {
            keys.insert(std::move(key));
        }
    }
    std::vector<double> theta;
    if (config.warm_start) {
        theta = *config.warm_start;
        if (theta.size() != ansatz.param_count()) {
            throw std::invalid_argument("ricco_optimize: warm start has wrong length");
        }
    } else {
        Rng rng(config.seed);
        for (std::size_t i = 0; i < ansatz.param_count(); ++i) {
            theta.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
    }

    RiccoRun run;
    run.bindings.fallback = fixed;
    for (const auto &[name, value] : ansatz.bind(theta)) {
        run.bindings.fallback[name] = value;
    }
    std::uint64_t group_index = 0;
    for (const auto &key : keys) {
        Mode mode = config.mode;
        if (auto *s = std::get_if<ShotsMode>(&mode)) {
            s->seed = mix_seed(s->seed, group_index);
        }
        ++group_index;
        if (const auto it = config.group_warm_start.find(key); it != config.group_warm_start.end()) {
            if (it->second.size() != ansatz.param_count()) {
                throw std::invalid_argument("ricco_optimize: warm start for " + key +
                                            " has wrong length");
            }
            theta = it->second;
        }
        GroupCost cost(fragments_with_u, PauliString(key), fixed, config.cost, mode);
        auto trace = optimize_group(cost, theta, config);
        trace.group = key;
        theta = trace.final_theta;
        run.bindings.per_group[key] = cost.bindings(theta);
        run.ledger += trace.ledger;
        const bool failed = !trace.error.empty();
        run.groups.push_back(std::move(trace));
        if (failed) {
            break;
        }
    }
    return run;
}

std::string to_jsonl(const OptimizationTrace &trace) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.cost.size(); ++i) {
        nlohmann::ordered_json j;
        j["iter"] = i + 1;
        j["cost"] = trace.cost[i];
        j["executions_cum"] = trace.executions_cum[i];
        out << j.dump() << '\n';
    }
    return out.str();
}

} // namespace ricco
