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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "ricco/cut.hpp"
#include "ricco/state.hpp"
#include "ricco/vqe.hpp"
#include "test_util.hpp"

using namespace ricco;
using Catch::Approx;
using ricco::testing::kron_word;
using ricco::testing::to_vector;

namespace {

CMatrix dense_hamiltonian(const Hamiltonian &h) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits);
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const auto &t : h.observable.terms()) {
        m += t.coeff * kron_word(t.pauli.str());
    }
    return m;
}

/// cos(t/2)|0011> + sin(t/2)|1100>, written out by hand.
CVector ansatz_state(double t) {
    CVector v = CVector::Zero(16);
    v(0b0011) = std::cos(t / 2);
    v(0b1100) = std::sin(t / 2);
    return v;
}

double dense_energy(const CMatrix &h, double t) {
    const CVector v = ansatz_state(t);
    return (v.adjoint() * h * v)(0, 0).real();
}

const Hamiltonian &h2() {
    static const Hamiltonian h = load_hamiltonian_file(bundled_h2_path());
    return h;
}

} // namespace

TEST_CASE("Hamiltonian loading") {
    const auto h = load_hamiltonian("# comment\n0.5 ZI\n\n-0.25 XX\n", "toy");
    CHECK(h.n_qubits == 2);
    CHECK(h.name == "toy");
    CHECK(h.observable.terms().size() == 2);
    CHECK_THROWS_WITH(load_hamiltonian("0.5 ZI\nfoo XX\n"), Catch::Matchers::ContainsSubstring("2"));
    CHECK_THROWS(load_hamiltonian("0.5 ZI\n1.0 ZZZ\n"));
    CHECK_THROWS(load_hamiltonian_file("/nonexistent/h.txt"));
}

TEST_CASE("bundled H2 ground energy") {
    const auto &h = h2();
    CHECK(h.n_qubits == 4);
    CHECK(h.observable.terms().size() == 15);
    const CMatrix m = dense_hamiltonian(h);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    CHECK(exact_ground_energy(h) == Approx(es.eigenvalues()(0)).margin(1e-12));
    CHECK(exact_ground_energy(h) == Approx(-1.137283834488502).margin(1e-9));
}

TEST_CASE("default ansatz spans the ground state") {
    const auto b = default_h2_ansatz();
    CHECK(b.circuit.n_wires() == 4);
    CHECK(b.circuit.param_names().size() == 1);
    const auto name = *b.circuit.param_names().begin();
    for (const double t : {0.0, 0.7, -2.1, 3.0}) {
        const CVector v = to_vector(simulate(b.circuit, {{name, t}}));
        CHECK((v - ansatz_state(t)).cwiseAbs().maxCoeff() < 1e-14);
    }
    const CMatrix m = dense_hamiltonian(h2());
    double best = 1e9;
    for (int i = 0; i <= 20000; ++i) {
        best = std::min(best, dense_energy(m, -std::numbers::pi + 2 * std::numbers::pi * i / 20000));
    }
    CHECK(best - exact_ground_energy(h2()) < 1e-7);

    const auto f = fragment(b.circuit, b.cut);
    CHECK(f.k() == 1);
    CHECK(f.upstream_wires == std::vector<std::size_t>{0, 1, 2});
    CHECK(f.downstream_wires == std::vector<std::size_t>{1, 3});
}

TEST_CASE("upstream grouping") {
    const auto b = default_h2_ansatz();
    const auto f = fragment(b.circuit, b.cut);
    const auto groups = group_upstream(h2().observable, f);
    std::size_t members = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i > 0) {
            CHECK(groups[i - 1].key < groups[i].key);
        }
        for (const auto &t : groups[i].members) {
            CHECK(upstream_key(f, t.pauli) == groups[i].key);
            CHECK_FALSE(t.pauli.is_identity());
        }
        members += groups[i].members.size();
    }
    CHECK(members == 14);
}

TEST_CASE("uncut VQE follows an independent Adam trajectory") {
    const auto b = default_h2_ansatz();
    VqeConfig cfg;
    cfg.initial_params = std::vector<double>{0.4};
    cfg.max_iter = 6;
    const auto trace = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    REQUIRE(trace.energy.size() == 6);

    const CMatrix m = dense_hamiltonian(h2());
    double t = 0.4;
    double mom = 0.0;
    double vel = 0.0;
    const auto &a = cfg.adam;
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(trace.energy[i] == Approx(dense_energy(m, t)).margin(1e-12));
        const double h = 1e-5;
        const double g = (dense_energy(m, t + h) - dense_energy(m, t - h)) / (2 * h);
        mom = a.beta1 * mom + (1 - a.beta1) * g;
        vel = a.beta2 * vel + (1 - a.beta2) * g * g;
        const double mh = mom / (1 - std::pow(a.beta1, static_cast<double>(i + 1)));
        const double vh = vel / (1 - std::pow(a.beta2, static_cast<double>(i + 1)));
        t -= a.lr * mh / (std::sqrt(vh) + a.eps);
    }
    CHECK(trace.reconstruction.distinct_circuits == 0);
}

TEST_CASE("VQE methods reach their tolerances") {
    const auto b = default_h2_ansatz();
    VqeConfig cfg;
    cfg.seed = 3;
    cfg.method = Method::Uncut;
    const auto uncut = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    CHECK(uncut.converged);
    CHECK(std::abs(uncut.energy_difference) <= 1e-6);

    cfg.method = Method::Qcut;
    const auto qcut = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    CHECK(std::abs(qcut.energy_difference) <= 1e-5);
    REQUIRE(qcut.energy.size() == uncut.energy.size());
    for (std::size_t i = 0; i < qcut.energy.size(); ++i) {
        CHECK(qcut.energy[i] == Approx(uncut.energy[i]).margin(1e-10));
    }
    CHECK(qcut.optimization.distinct_circuits == 0);

    cfg.method = Method::Ricco;
    const auto ricco = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    CHECK(ricco.error.empty());
    CHECK(std::abs(ricco.energy_difference) <= 5e-2);
    CHECK(ricco.recon_per_iteration() < qcut.recon_per_iteration());
    CHECK(ricco.optimization.distinct_circuits > 0);
    CHECK(ricco.exec_opt_cum.size() == ricco.iterations);

    const auto lines = to_jsonl(ricco);
    CHECK(static_cast<std::size_t>(std::count(lines.begin(), lines.end(), '\n')) ==
          ricco.iterations);
    const auto last = nlohmann::json::parse(lines.substr(lines.rfind('\n', lines.size() - 2) + 1));
    CHECK(last["exec_opt_cum"] == ricco.optimization.distinct_circuits);
    CHECK(last["exec_recon_cum"] == ricco.reconstruction.distinct_circuits);
}

TEST_CASE("VQE rejects unsupported ansatz parameters") {
    const auto b = default_h2_ansatz();
    VqeConfig cfg;
    cfg.max_iter = 2;
    Circuit scaled(4);
    scaled.ry(0, Param::named("a", 2.0));
    CHECK_THROWS_AS(vqe_optimize(scaled, h2(), {1, {0}}, cfg), std::invalid_argument);
    Circuit twice(4);
    twice.ry(0, Param::named("a")).rz(0, Param::named("a"));
    CHECK_THROWS_AS(vqe_optimize(twice, h2(), {2, {0}}, cfg), std::invalid_argument);
    Circuit crz(4);
    crz.add({GateKind::CRZ, {0, 1}, {Param::named("a")}, {}});
    CHECK_THROWS_AS(vqe_optimize(crz, h2(), {1, {1}}, cfg), std::invalid_argument);
    cfg.initial_params = std::vector<double>{1.0, 2.0};
    CHECK_THROWS_AS(vqe_optimize(b.circuit, h2(), b.cut, cfg), std::invalid_argument);
    cfg.initial_params.reset();
    cfg.tol = 0.0;
    CHECK_THROWS_AS(vqe_optimize(b.circuit, h2(), b.cut, cfg), std::invalid_argument);
}

TEST_CASE("shots-mode VQE is seeded") {
    const auto b = default_h2_ansatz();
    VqeConfig cfg;
    cfg.method = Method::Qcut;
    cfg.mode = ShotsMode{500, 11};
    cfg.max_iter = 4;
    const auto a = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    const auto c = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    CHECK(a.energy == c.energy);
    CHECK(a.reconstruction.shots_total == a.reconstruction.distinct_circuits * 500);
}

TEST_CASE("Hamiltonian parsing examples") {
    const auto one = load_hamiltonian("1.0 ZZ\n");
    CHECK(one.observable.terms().size() == 1);
    CHECK(one.n_qubits == 2);
    const auto dup = load_hamiltonian("0.5 ZI\n0.5 ZI\n");
    REQUIRE(dup.observable.terms().size() == 1);
    CHECK(dup.observable.terms()[0].coeff == Approx(1.0));
    CHECK(exact_ground_energy(load_hamiltonian("-1.0 Z\n")) == Approx(-1.0));
    CHECK(exact_ground_energy(load_hamiltonian("1.0 ZZ\n")) == Approx(-1.0));
}

TEST_CASE("bundled ground energy matches the value stored in the file") {
    std::ifstream in(bundled_h2_path());
    std::string line;
    double stored = 0.0;
    while (std::getline(in, line)) {
        const auto pos = line.find("Ground-state energy:");
        if (pos != std::string::npos) {
            stored = std::stod(line.substr(pos + 20));
        }
    }
    REQUIRE(stored != 0.0);
    for (int run = 0; run < 3; ++run) {
        CHECK(std::abs(exact_ground_energy(h2()) - stored) <= 1e-10);
    }
}

TEST_CASE("upstream patterns collapse to six groups") {
    const auto b = default_h2_ansatz();
    const auto f = fragment(b.circuit, b.cut);
    REQUIRE(f.upstream_wires == std::vector<std::size_t>{0, 1, 2});
    REQUIRE(f.cut_wires == std::vector<std::size_t>{1});
    const std::vector<std::string> patterns = {"III", "IZI", "IIZ", "IZZ", "XIY", "XZY",
                                               "YIX", "YZX", "ZII", "ZZI", "ZIZ", "ZZZ"};
    std::vector<PauliTerm> terms;
    for (const auto &p : patterns) {
        // Z on the downstream-only wire keeps III from being the identity.
        terms.push_back({0.1, PauliString(p + "Z")});
    }
    const auto groups = group_upstream(Observable(std::move(terms)), f);
    REQUIRE(groups.size() == 6);
    const std::vector<std::string> keys = {"III", "IIZ", "XIY", "YIX", "ZII", "ZIZ"};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(groups[i].key == keys[i]);
        REQUIRE(groups[i].members.size() == 2);
        const auto &a = groups[i].members[0].pauli.str();
        const auto &c = groups[i].members[1].pauli.str();
        CHECK(a[0] == c[0]);
        CHECK(a[2] == c[2]);
        CHECK(a[1] != c[1]);
    }
    CHECK(group_upstream(Observable(1.0, PauliString("ZIZI")), f).size() == 1);
}

TEST_CASE("every method ends below its starting energy") {
    const auto b = default_h2_ansatz();
    const double exact = exact_ground_energy(h2());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (const auto method : {Method::Uncut, Method::Qcut, Method::Ricco}) {
            VqeConfig cfg;
            cfg.seed = seed;
            cfg.method = method;
            const auto t = vqe_optimize(b.circuit, h2(), b.cut, cfg);
            REQUIRE(t.error.empty());
            CHECK(t.final_energy <= t.energy.front());
            CHECK(t.energy.size() <= cfg.max_iter);
            if (method == Method::Uncut) {
                for (const double e : t.energy) {
                    CHECK(e >= exact - 1e-9);
                }
            }
            CHECK(t.exec_recon_cum.back() == t.reconstruction.distinct_circuits);
            CHECK(t.exec_opt_cum.back() == t.optimization.distinct_circuits);
            CHECK(std::is_sorted(t.exec_recon_cum.begin(), t.exec_recon_cum.end()));
            CHECK(std::is_sorted(t.exec_opt_cum.begin(), t.exec_opt_cum.end()));
        }
    }
}

TEST_CASE("RICCO VQE can reseed the cut unitary every iteration") {
    const auto b = default_h2_ansatz();
    VqeConfig cfg;
    cfg.method = Method::Ricco;
    cfg.max_iter = 15;
    const auto warm = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    cfg.warm_start = false;
    const auto cold = vqe_optimize(b.circuit, h2(), b.cut, cfg);
    CHECK(cold.error.empty());
    CHECK(cold.optimization.distinct_circuits != warm.optimization.distinct_circuits);
}
