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

#include <cmath>
#include <set>

#include <json.hpp>

#include "ricco/circuit.hpp"
#include "ricco/cut.hpp"
#include "ricco/pauli.hpp"
#include "ricco/state.hpp"
#include "test_util.hpp"

using namespace ricco;
using Catch::Approx;
using ricco::testing::kron_word;
using ricco::testing::random_word;
using ricco::testing::to_vector;

namespace {

/// <psi|O|psi> with O assembled from Kronecker products.
double dense_expectation(const Circuit &c, const Observable &obs, const Bindings &b = {}) {
    const CVector v = to_vector(simulate(c, b));
    double e = 0.0;
    for (const auto &t : obs.terms()) {
        e += t.coeff * (v.adjoint() * kron_word(t.pauli.str()) * v)(0, 0).real();
    }
    return e;
}

Observable random_observable(std::size_t n, std::size_t terms, Rng &rng) {
    std::vector<PauliTerm> ts;
    for (std::size_t i = 0; i < terms; ++i) {
        ts.push_back({rng.uniform(-1, 1), PauliString(random_word(n, rng))});
    }
    return Observable(std::move(ts));
}

std::vector<double> random_theta(std::size_t n, Rng &rng) {
    std::vector<double> t(n);
    for (auto &x : t) {
        x = rng.uniform(-3, 3);
    }
    return t;
}

/// Rot angles (phi, theta, omega) equal to `w` up to a global phase.
std::vector<double> zyz_angles(const CMatrix &w) {
    const cplx det = w.determinant();
    const CMatrix su = w / std::sqrt(det);
    const cplx a = su(0, 0);
    const cplx b = su(1, 0);
    const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    const double omega = std::arg(b) - std::arg(a);
    const double phi = -std::arg(a) - std::arg(b);
    return {phi, theta, omega};
}

} // namespace

TEST_CASE("ledger formulas") {
    CHECK(qcut_circuits_per_group(1) == 7);
    CHECK(qcut_circuits_per_group(2) == 25);
    CHECK(ricco_circuits_per_group(1) == 3);
    CHECK(ricco_circuits_per_group(2) == 5);
    CHECK(qcut_circuits_per_group(1, 2) == 3 + 8);
    CHECK(ricco_circuits_per_group(2, 3) == 1 + 12);
    CHECK(method_from_name("qcut") == Method::Qcut);
    CHECK(method_name(Method::Ricco) == "ricco");
    CHECK_THROWS_AS(method_from_name("nope"), std::invalid_argument);
}

TEST_CASE("observable parts and group keys") {
    const auto b = random_benchmark(1, 0);
    const auto f = fragment(b.circuit, b.cut);
    const PauliString t("XYIZZIX");
    CHECK(upstream_part(f, t).str() == "XYII");
    CHECK(downstream_part(f, t).str() == "ZZIX");
    CHECK(upstream_key(f, t) == "XYII");
    CHECK(upstream_key(f, PauliString("IIIZIIX")) == "IIII");
    CHECK(upstream_key(f, PauliString("IIIIIII")).empty());
}

TEST_CASE("uncut expectation matches the dense oracle") {
    Rng rng(2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto b = random_benchmark(1, seed);
        const auto obs = random_observable(7, 6, rng);
        CHECK(uncut_expectation(b.circuit, obs) ==
              Approx(dense_expectation(b.circuit, obs)).margin(1e-12));
    }
}

TEST_CASE("exact QCUT reproduces the uncut value") {
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        for (const std::size_t k : {1U, 2U}) {
            const auto b = random_benchmark(k, seed);
            const auto f = fragment(b.circuit, b.cut);
            const std::size_t n = b.circuit.n_wires();
            const auto obs = random_observable(n, 5, rng);
            const auto r = qcut_expectation(f, obs);
            CHECK(r.method == Method::Qcut);
            CHECK(std::abs(r.value - dense_expectation(b.circuit, obs)) < 1e-10);
            CHECK(r.ledger.phase == Phase::Reconstruction);
            CHECK(r.ledger.shots_total == 0);
        }
    }
}

TEST_CASE("QCUT upstream values are Pauli expectations of the upstream state") {
    const auto b = random_benchmark(1, 9);
    const auto f = fragment(b.circuit, b.cut);
    const Observable obs(1.0, PauliString("ZIXYZII"));
    const auto r = qcut_expectation(f, obs);
    REQUIRE(r.terms.size() == 4);
    const CVector up = to_vector(simulate(f.upstream));
    double sum = 0.0;
    std::set<std::string> seen;
    for (const auto &t : r.terms) {
        std::string word = "ZIX?";
        word[f.cut_local[0]] = t.cut_pauli[0];
        const double oracle = (up.adjoint() * kron_word(word) * up)(0, 0).real();
        CHECK(t.up == Approx(oracle).margin(1e-12));
        CHECK(t.group == "ZIXI");
        sum += t.up * t.down / 2.0;
        seen.insert(t.cut_pauli.str());
    }
    CHECK(seen == std::set<std::string>{"I", "X", "Y", "Z"});
    CHECK(sum == Approx(r.value).margin(1e-12));

    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j["method"] == "qcut");
    CHECK(j["terms"].size() == 4);
    CHECK(j["distinct_circuits"] == 7);
}

TEST_CASE("ledger counts groups and downstream bases") {
    const auto b = random_benchmark(1, 1);
    const auto f = fragment(b.circuit, b.cut);
    // One group, two downstream bases (Z...Z and X...X cannot share a basis).
    const Observable two_bases(
        std::vector<PauliTerm>{{0.5, PauliString("ZIIIZII")}, {0.5, PauliString("ZIIIXII")}});
    CHECK(qcut_expectation(f, two_bases).ledger.distinct_circuits == 3 + 4 * 2);
    // Two groups, one basis each, plus a constant that costs nothing.
    const Observable two_groups(std::vector<PauliTerm>{{0.5, PauliString("ZIIIZII")},
                                                       {0.5, PauliString("XIIIZII")},
                                                       {2.0, PauliString("IIIIIII")}});
    const auto r = qcut_expectation(f, two_groups);
    CHECK(r.ledger.distinct_circuits == 2 * 7);
    CHECK(std::abs(r.value - dense_expectation(b.circuit, two_groups)) < 1e-10);
    const Observable constant(3.0, PauliString("IIIIIII"));
    const auto c = qcut_expectation(f, constant);
    CHECK(c.value == Approx(3.0));
    CHECK(c.ledger.distinct_circuits == 0);
}

TEST_CASE("observable validation") {
    const auto b = random_benchmark(1, 1);
    const auto f = fragment(b.circuit, b.cut);
    CHECK_THROWS_AS(qcut_expectation(f, Observable(1.0, PauliString("ZZ"))), std::invalid_argument);
    CHECK_THROWS_AS(qcut_expectation(f, Observable()), std::invalid_argument);
    CHECK_THROWS_AS(ricco_expectation(f, Bindings{}, Observable(1.0, PauliString("ZIIIZII"))),
                    std::invalid_argument);
}

TEST_CASE("RICCO deviation from QCUT is bounded by the leakage") {
    Rng rng(11);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        for (const std::size_t k : {1U, 2U}) {
            const auto b = random_benchmark(k, seed);
            const auto f = fragment(b.circuit, b.cut);
            const RiccoAnsatz u(k);
            const auto g = insert_ricco(f, u);
            const auto obs = random_observable(b.circuit.n_wires(), 4, rng);
            const auto theta = u.bind(random_theta(u.param_count(), rng));
            const auto qcut = qcut_expectation(f, obs).value;
            const auto ricco = ricco_expectation(g, theta, obs);
            CHECK(ricco.method == Method::Ricco);
            const double leak = leakage(g, theta, obs);
            CHECK(std::abs(ricco.value - qcut) <= leak + 1e-10);
            // QCUT on the augmented fragments is still exact for any theta.
            CHECK(std::abs(qcut_expectation(g, obs, ExactMode{}, theta).value - qcut) < 1e-10);
        }
    }
}

TEST_CASE("RICCO ledger is 1 + 2^k per group") {
    const auto b = random_benchmark(2, 4);
    const auto f = insert_ricco(fragment(b.circuit, b.cut), RiccoAnsatz(2));
    const Observable obs(std::vector<PauliTerm>{{1.0, PauliString("ZIIIIZII")},
                                                {1.0, PauliString("IZIIIZII")}});
    const auto r = ricco_expectation(f, RiccoAnsatz(2).bind(std::vector<double>(15, 0.1)), obs);
    CHECK(r.ledger.distinct_circuits == 2 * 5);
    for (const auto &t : r.terms) {
        CHECK(t.cut_pauli.is_diagonal());
    }
}

TEST_CASE("per-group bindings are honoured") {
    const auto b = random_benchmark(1, 2);
    const RiccoAnsatz u(1);
    const auto f = insert_ricco(fragment(b.circuit, b.cut), u);
    const Observable zg(1.0, PauliString("ZIIIZII"));
    const Observable xg(1.0, PauliString("XIIIZII"));
    const auto t1 = u.bind({0.3, 1.0, -0.2});
    const auto t2 = u.bind({-1.1, 0.4, 2.0});
    GroupBindings gb;
    gb.fallback = t1;
    gb.per_group["XIII"] = t2;
    const Observable both(std::vector<PauliTerm>{{1.0, PauliString("ZIIIZII")},
                                                 {1.0, PauliString("XIIIZII")}});
    const double combined = ricco_expectation(f, gb, both).value;
    const double expected = ricco_expectation(f, t1, zg).value + ricco_expectation(f, t2, xg).value;
    CHECK(combined == Approx(expected).margin(1e-12));
    CHECK(&gb.for_group("ZIII") == &gb.fallback);
}

TEST_CASE("RICCO is exact when U diagonalises the cut state") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto b = unentangled_benchmark(1, seed);
        const auto &prep = b.circuit.ops()[b.cut.time_index - 1];
        REQUIRE(prep.kind == GateKind::Unitary);
        const CMatrix w = prep.matrix.adjoint();
        const RiccoAnsatz u(1);
        const auto theta = u.bind(zyz_angles(w));
        // The Rot angles reproduce w up to phase.
        const CMatrix rot = gate_matrix(GateKind::Rot, zyz_angles(w));
        CHECK(std::abs(std::abs((rot.adjoint() * w).trace()) - 2.0) < 1e-10);

        const auto f = insert_ricco(fragment(b.circuit, b.cut), u);
        Rng rng(seed);
        const auto obs = random_observable(7, 5, rng);
        const double exact = dense_expectation(b.circuit, obs);
        CHECK(std::abs(ricco_expectation(f, theta, obs).value - exact) < 1e-10);
        CHECK(leakage(f, theta, obs) < 1e-10);
    }
}

TEST_CASE("shots mode converges and is seeded") {
    const auto b = random_benchmark(1, 6);
    const auto f = fragment(b.circuit, b.cut);
    const Observable obs(std::vector<PauliTerm>{{0.7, PauliString("ZIIIZII")},
                                                {0.4, PauliString("IXIIIYI")}});
    const double exact = dense_expectation(b.circuit, obs);
    const ShotsMode mode{200000, 17};
    const auto r1 = qcut_expectation(f, obs, mode);
    const auto r2 = qcut_expectation(f, obs, mode);
    CHECK(r1.value == r2.value);
    CHECK(std::abs(r1.value - exact) < 0.03);
    CHECK(r1.ledger.shots_total == r1.ledger.distinct_circuits * mode.shots);
    const auto r3 = qcut_expectation(f, obs, ShotsMode{200000, 18});
    CHECK(r3.value != r1.value);

    const RiccoAnsatz u(1);
    const auto g = insert_ricco(f, u);
    const auto theta = u.bind({0.2, 0.9, -0.4});
    const double ricco_exact = ricco_expectation(g, theta, obs).value;
    const auto rs = ricco_expectation(g, theta, obs, mode);
    CHECK(std::abs(rs.value - ricco_exact) < 0.03);
    CHECK(rs.ledger.distinct_circuits == 2 * 3);
    CHECK(rs.ledger.shots_total == 6 * mode.shots);
}

TEST_CASE("QCUT stays exact after inserting U with random angles") {
    Rng rng(44);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t k = 1 + seed % 2;
        const auto b = random_benchmark(k, seed);
        const RiccoAnsatz u(k);
        const auto g = insert_ricco(fragment(b.circuit, b.cut), u);
        const Observable z(1.0, PauliString(std::string(b.circuit.n_wires(), 'Z')));
        const auto theta = u.bind(random_theta(u.param_count(), rng));
        worst = std::max(worst, std::abs(qcut_expectation(g, z, ExactMode{}, theta).value -
                                         dense_expectation(b.circuit, z)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("zero angles leave the fragments unchanged") {
    const auto b = random_benchmark(2, 8);
    const auto f = fragment(b.circuit, b.cut);
    const RiccoAnsatz u(2);
    const auto g = insert_ricco(f, u);
    const Observable obs(1.0, PauliString("ZXIZYIIZ"));
    const auto plain = qcut_expectation(f, obs);
    const auto zero = qcut_expectation(g, obs, ExactMode{}, u.bind(std::vector<double>(15, 0.0)));
    REQUIRE(plain.terms.size() == zero.terms.size());
    for (std::size_t i = 0; i < plain.terms.size(); ++i) {
        CHECK(zero.terms[i].up == Approx(plain.terms[i].up).margin(1e-13));
        CHECK(zero.terms[i].down == Approx(plain.terms[i].down).margin(1e-13));
    }
}

TEST_CASE("values respect the coefficient bound and linearity") {
    Rng rng(45);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto b = random_benchmark(1, seed);
        const auto f = fragment(b.circuit, b.cut);
        const RiccoAnsatz u(1);
        const auto g = insert_ricco(f, u);
        const auto obs = random_observable(7, 6, rng);
        const auto theta = u.bind(random_theta(3, rng));
        CHECK(std::abs(qcut_expectation(f, obs).value) <= obs.coefficient_l1() + 1e-9);
        CHECK(std::abs(ricco_expectation(g, theta, obs).value) <= obs.coefficient_l1() + 1e-9);
    }
    Circuit c(2);
    c.h(0).cnot(0, 1).ry(1, Param::constant(0.7));
    const Observable combo(
        std::vector<PauliTerm>{{0.5, PauliString("ZZ")}, {0.25, PauliString("XI")}});
    CHECK(uncut_expectation(c, combo) ==
          Approx(0.5 * uncut_expectation(c, Observable(1.0, PauliString("ZZ"))) +
                 0.25 * uncut_expectation(c, Observable(1.0, PauliString("XI")))));
    Circuit bell(2);
    bell.h(0).cnot(0, 1);
    CHECK(uncut_expectation(bell, Observable(1.0, PauliString("ZZ"))) == Approx(1.0));
}

TEST_CASE("leakage of an unrotated |+> cut state") {
    Circuit c(1);
    c.h(0);
    const auto f = fragment(c, {1, {0}});
    const RiccoAnsatz u(1);
    const auto g = insert_ricco(f, u);
    const auto zero = u.bind({0.0, 0.0, 0.0});
    const Observable x(1.0, PauliString("X"));
    // up(P) = <P> on |+>; down(P) = Tr[X P] through an empty downstream.
    const double up_x = 1.0;
    const double up_y = 0.0;
    const double down_x = 2.0;
    const double down_y = 0.0;
    const double expected = (std::abs(up_x * down_x) + std::abs(up_y * down_y)) / 2.0;
    CHECK(leakage(g, zero, x) == Approx(expected));
    CHECK(expected > 0.0);
    const double gap = std::abs(ricco_expectation(g, zero, x).value - qcut_expectation(f, x).value);
    CHECK(gap == Approx(expected));
}

TEST_CASE("a million shots land within 1e-2 of the exact value") {
    for (const std::uint64_t seed : {0U, 1U}) {
        const auto b = random_benchmark(1, seed);
        const auto f = fragment(b.circuit, b.cut);
        const Observable z(1.0, PauliString("ZZZZZZZ"));
        const double exact = dense_expectation(b.circuit, z);
        CHECK(std::abs(qcut_expectation(f, z, ShotsMode{1000000, 3}).value - exact) <= 1e-2);
    }
}
