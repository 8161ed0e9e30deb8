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

#include "ricco/vqe.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "ricco/state.hpp"

namespace ricco {

Hamiltonian load_hamiltonian(std::string_view text, std::string name) {
    Hamiltonian h;
    h.observable = parse_observable(text);
    h.name = std::move(name);
    h.n_qubits = h.observable.n_qubits();
    return h;
}

Hamiltonian load_hamiltonian_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open Hamiltonian file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_hamiltonian(buf.str(), path);
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string bundled_h2_path() { return std::string(RICCO_DATA_DIR) + "/h2_sto3g.txt"; }

std::vector<ObservableGroup> group_upstream(const Observable &observable,
                                            const FragmentPair &fragments) {
    std::map<std::string, ObservableGroup> by_key;
    for (const auto &t : observable.terms()) {
        auto key = upstream_key(fragments, t.pauli);
        if (key.empty()) {
            continue;
        }
        auto &g = by_key[key];
        g.key = key;
        g.members.push_back(t);
    }
    std::vector<ObservableGroup> out;
    for (auto &[key, g] : by_key) {
        out.push_back(std::move(g));
    }
    return out;
}

double exact_ground_energy(const Hamiltonian &hamiltonian) {
    const CMatrix h = matrix_of(hamiltonian.observable);
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("exact_ground_energy: eigensolver failed");
    }
    return solver.eigenvalues().minCoeff();
}

double VqeTrace::recon_per_iteration() const {
    return iterations == 0 ? 0.0
                           : static_cast<double>(reconstruction.distinct_circuits) /
                                 static_cast<double>(iterations);
}

Benchmark default_h2_ansatz() {
    Circuit c(4);
    c.ry(0, Param::named("t0"));
    c.cnot(0, 1);
    c.x(2);
    c.cnot(0, 2);
    c.x(3);
    c.cnot(1, 3);
    return {std::move(c), {4, {1}}};
}

namespace {

std::vector<std::string> checked_params(const Circuit &ansatz) {
    const auto free = ansatz.param_names();
    std::vector<std::string> names(free.begin(), free.end());
    for (const auto &name : names) {
        std::size_t uses = 0;
        for (const auto &op : ansatz.ops()) {
            for (const auto &p : op.params) {
                if (p.name != name) {
                    continue;
                }
                ++uses;
                if (!supports_parameter_shift(op.kind) || std::abs(p.scale) != 1.0) {
                    throw std::invalid_argument("VQE parameter '" + name + "' sits on " +
                                                std::string(gate_name(op.kind)) +
                                                " without an exact shift rule");
                }
            }
        }
        if (uses != 1) {
            throw std::invalid_argument("VQE parameter '" + name + "' must appear exactly once");
        }
    }
    if (names.empty()) {
        throw std::invalid_argument("VQE ansatz has no free parameters");
    }
    return names;
}

class EnergyModel {
  public:
    EnergyModel(const Circuit &ansatz, const Hamiltonian &h, const CutSpec &cut,
                const VqeConfig &config)
        : ansatz_(ansatz), h_(h.observable), config_(config) {
        if (h.n_qubits != ansatz.n_wires()) {
            throw std::invalid_argument("Hamiltonian acts on " + std::to_string(h.n_qubits) +
                                        " qubits, ansatz has " +
                                        std::to_string(ansatz.n_wires()));
        }
        if (config.method != Method::Uncut) {
            fragments_ = fragment(ansatz, cut);
            if (config.method == Method::Ricco) {
                u_.emplace(fragments_.k(), 1, "u");
                with_u_ = insert_ricco(fragments_, *u_);
            }
        }
    }

    /// Re-optimizes U for RICCO at the given VQE bindings.
    void prepare(const Bindings &b, std::size_t iter, ExecutionLedger &opt) {
        if (config_.method != Method::Ricco) {
            return;
        }
        RiccoConfig rc = config_.ricco;
        rc.mode = sub_mode(iter, 0x6f7074ULL);
        rc.seed = mix_seed(config_.ricco.seed, iter);
        if (config_.warm_start && previous_) {
            for (const auto &g : previous_->groups) {
                rc.group_warm_start[g.group] = g.final_theta;
            }
        }
        auto run = ricco_optimize(with_u_, h_, *u_, b, rc);
        opt += run.ledger;
        if (!run.ok()) {
            throw std::runtime_error("RICCO optimization failed: " + run.groups.back().error);
        }
        previous_ = std::move(run);
    }

    double energy(const Bindings &b, std::size_t iter, std::uint64_t eval,
                  ExecutionLedger &recon) {
        switch (config_.method) {
        case Method::Uncut:
            return uncut_expectation(ansatz_, h_, b);
        case Method::Qcut: {
            const auto r = qcut_expectation(fragments_, h_, sub_mode(iter, eval), b);
            recon += r.ledger;
            return r.value;
        }
        case Method::Ricco: {
            GroupBindings gb = previous_->bindings;
            for (const auto &[name, value] : b) {
                gb.fallback[name] = value;
                for (auto &[key, bound] : gb.per_group) {
                    bound[name] = value;
                }
            }
            const auto r = ricco_expectation(with_u_, gb, h_, sub_mode(iter, eval));
            recon += r.ledger;
            return r.value;
        }
        }
        throw std::invalid_argument("unknown method");
    }

  private:
    Mode sub_mode(std::size_t iter, std::uint64_t eval) const {
        Mode m = config_.mode;
        if (auto *s = std::get_if<ShotsMode>(&m)) {
            s->seed = mix_seed(mix_seed(s->seed, iter), eval);
        }
        return m;
    }

    const Circuit &ansatz_;
    const Observable &h_;
    const VqeConfig &config_;
    FragmentPair fragments_;
    std::optional<RiccoAnsatz> u_;
    FragmentPair with_u_;
    std::optional<RiccoRun> previous_;
};

} // namespace

VqeTrace vqe_optimize(const Circuit &ansatz, const Hamiltonian &hamiltonian, const CutSpec &cut,
                      const VqeConfig &config) {
    if (config.max_iter == 0 || !(config.tol > 0.0)) {
        throw std::invalid_argument("VQE needs max_iter >= 1 and tol > 0");
    }
    const auto names = checked_params(ansatz);
    EnergyModel model(ansatz, hamiltonian, cut, config);

    std::vector<double> params;
    if (config.initial_params) {
        params = *config.initial_params;
        if (params.size() != names.size()) {
            throw std::invalid_argument("VQE initial parameters have wrong length");
        }
    } else {
        Rng rng(config.seed);
        for (std::size_t i = 0; i < names.size(); ++i) {
            params.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
    }
    auto bind = [&](const std::vector<double> &v) {
        Bindings b;
        for (std::size_t i = 0; i < v.size(); ++i) {
            b[names[i]] = v[i];
        }
        return b;
    };

    VqeTrace trace;
    trace.method = config.method;
    trace.exact_energy = exact_ground_energy(hamiltonian);
    AdamState adam(params.size(), config.adam);
    try {
        for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
            const Bindings b = bind(params);
            model.prepare(b, iter, trace.optimization);
            const double e = model.energy(b, iter, 0, trace.reconstruction);
            trace.energy.push_back(e);
            trace.final_params = params;
            trace.final_energy = e;
            ++trace.iterations;
            if (!std::isfinite(e)) {
                trace.error = "non-finite energy at iteration " + std::to_string(iter + 1);
                break;
            }
            if (trace.energy.size() >= 2 &&
                std::abs(trace.energy[trace.energy.size() - 2] - e) <= config.tol) {
                trace.converged = true;
                trace.exec_recon_cum.push_back(trace.reconstruction.distinct_circuits);
                trace.exec_opt_cum.push_back(trace.optimization.distinct_circuits);
                break;
            }
            std::vector<double> grad(params.size(), 0.0);
            constexpr double kShift = std::numbers::pi / 2.0;
            for (std::size_t j = 0; j < params.size(); ++j) {
                auto plus = params;
                auto minus = params;
                plus[j] += kShift;
                minus[j] -= kShift;
                const double ep = model.energy(bind(plus), iter, 2 * j + 1, trace.reconstruction);
                const double em = model.energy(bind(minus), iter, 2 * j + 2, trace.reconstruction);
                grad[j] = (ep - em) / 2.0;
            }
            trace.exec_recon_cum.push_back(trace.reconstruction.distinct_circuits);
            trace.exec_opt_cum.push_back(trace.optimization.distinct_circuits);
            adam.step(params, grad);
        }
    } catch (const std::runtime_error &e) {
        trace.error = e.what();
    }
    trace.energy_difference = trace.final_energy - trace.exact_energy;
    return trace;
}

std::string to_jsonl(const VqeTrace &trace) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.energy.size(); ++i) {
        nlohmann::ordered_json j;
        j["iter"] = i + 1;
        j["energy"] = trace.energy[i];
        j["exec_recon_cum"] = i < trace.exec_recon_cum.size() ? trace.exec_recon_cum[i] : 0;
        j["exec_opt_cum"] = i < trace.exec_opt_cum.size() ? trace.exec_opt_cum[i] : 0;
        out << j.dump() << '\n';
    }
    return out.str();
}

} // namespace ricco
