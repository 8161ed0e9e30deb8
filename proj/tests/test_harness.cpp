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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ricco/circuit.hpp"
#include "ricco/harness.hpp"
#include "test_util.hpp"

using namespace ricco;
using Catch::Approx;
namespace fs = std::filesystem;
using ricco::testing::kron_word;
using ricco::testing::to_vector;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("ricco_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("percent error") {
    CHECK(percent_error(1.01, 1.0) == Approx(1.0));
    CHECK(percent_error(-0.5, -0.4) == Approx(25.0));
    CHECK(percent_error(0.0, 0.0) == 0.0);
}

TEST_CASE("method lists") {
    CHECK(parse_methods("qcut, ricco") == std::vector<Method>{Method::Qcut, Method::Ricco});
    CHECK(parse_methods("uncut,uncut") == std::vector<Method>{Method::Uncut});
    CHECK_THROWS_AS(parse_methods("qcut,bogus"), std::invalid_argument);
}

TEST_CASE("config parsing and validation") {
    const auto c = config_from_json(
        R"({"kind": "benchmark", "k": 2, "seed_start": 5, "seed_count": 3, "mode": "shots",
            "shots": 50, "cost": "alignment", "methods": ["qcut"], "out": "x"})");
    CHECK(c.k == 2);
    CHECK(c.seed_start == 5);
    CHECK(c.seed_count == 3);
    CHECK(c.shots_mode);
    CHECK(c.shots == 50);
    CHECK(c.cost == CostKind::Alignment);
    CHECK(c.methods == std::vector<Method>{Method::Qcut});
    CHECK(c.out == "x");
    CHECK_NOTHROW(c.validate());

    const auto d = config_from_json("{}");
    CHECK(d.k == 1);
    CHECK(d.methods.size() == 3);

    CHECK_THROWS_AS(config_from_json("[1]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("{oops"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(R"({"mode": "fast"})"), std::invalid_argument);

    auto bad = d;
    bad.k = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.seed_count = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.shots_mode = true;
    bad.shots = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = d;
    bad.kind = "other";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("benchmark records and CSV") {
    ExperimentConfig c;
    c.k = 1;
    c.seed_start = 10;
    c.seed_count = 4;
    c.threads = 1;
    const auto records = benchmark_records(c);
    REQUIRE(records.size() == 12);
    std::vector<double> ricco_err;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        CHECK(r.seed == 10 + i / 3);
        CHECK(r.method == c.methods[i % 3]);
        CHECK(r.error.empty());
        const auto b = random_benchmark(1, r.seed);
        const CVector v = to_vector(simulate(b.circuit));
        const double ref = (v.adjoint() * kron_word("ZZZZZZZ") * v)(0, 0).real();
        CHECK(r.reference == Approx(ref).margin(1e-12));
        if (r.method == Method::Qcut) {
            CHECK(r.percent_error < 1e-8);
            CHECK(r.recon_circuits == 7);
        }
        if (r.method == Method::Ricco) {
            CHECK(r.recon_circuits == 3);
            CHECK(r.opt_executions > 0);
            ricco_err.push_back(r.percent_error);
        }
    }
    std::sort(ricco_err.begin(), ricco_err.end());
    const double median = (ricco_err[1] + ricco_err[2]) / 2;

    const auto csv = benchmark_csv(records);
    const auto rows = lines_of(csv);
    CHECK(rows[0] == "seed,method,k,value,reference,percent_error,recon_circuits,opt_executions,error");
    CHECK(rows.size() == 1 + 12 + 9);
    bool found = false;
    for (const auto &row : rows) {
        if (row.rfind("summary_median,ricco,1,,,", 0) == 0) {
            const auto cell = row.substr(std::string("summary_median,ricco,1,,,").size());
            CHECK(std::stod(cell.substr(0, cell.find(','))) == Approx(median).epsilon(1e-12));
            found = true;
        }
    }
    CHECK(found);

    c.threads = 4;
    CHECK(benchmark_csv(benchmark_records(c)) == csv);
    CHECK(lines_of(timing_csv(records)).size() == 13);
}

TEST_CASE("benchmark runs write reproducible files") {
    const auto dir = scratch("bench");
    ExperimentConfig c;
    c.k = 2;
    c.seed_count = 2;
    c.methods = {Method::Qcut, Method::Ricco};
    c.shots_mode = true;
    c.shots = 200;
    c.out = (dir / "a").string();
    CHECK(run_benchmark(c) == 0);
    c.out = (dir / "b").string();
    CHECK(run_benchmark(c) == 0);
    const auto first = slurp(dir / "a" / "benchmark_k2.csv");
    CHECK_FALSE(first.empty());
    CHECK(first == slurp(dir / "b" / "benchmark_k2.csv"));
    CHECK(fs::exists(dir / "a" / "benchmark_k2_timing.csv"));

    const auto md = report({(dir / "a" / "benchmark_k2.csv").string()});
    CHECK(md.find("| 2 | qcut |") != std::string::npos);
    CHECK(md.find("| 2 | ricco |") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("generated circuits parse back") {
    const auto dir = scratch("gen");
    ExperimentConfig c;
    c.kind = "generate";
    c.k = 2;
    c.seed_start = 3;
    c.seed_count = 2;
    c.out = dir.string();
    CHECK(run_generate(c) == 0);
    for (const std::uint64_t s : {3U, 4U}) {
        const auto stem = "circuit_k2_seed" + std::to_string(s);
        const auto circuit = parse_circuit(slurp(dir / (stem + ".json")));
        const auto cut = parse_cut(slurp(dir / (stem + ".cut.json")));
        const auto b = random_benchmark(2, s);
        CHECK(serialize(circuit) == serialize(b.circuit));
        CHECK(cut.time_index == b.cut.time_index);
        CHECK(cut.cut_wires == b.cut.cut_wires);
    }
    fs::remove_all(dir);
}

TEST_CASE("VQE comparison summary") {
    const auto dir = scratch("vqe");
    ExperimentConfig c;
    c.kind = "vqe";
    c.out = dir.string();
    CHECK(run_vqe(c) == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "vqe_summary.json"));
    CHECK(summary["exact_energy"].get<double>() == Approx(-1.137283834488502).margin(1e-9));
    CHECK(summary["methods"].size() == 3);
    CHECK(summary["comparison"]["ricco_recon_per_iteration_below_qcut"] == true);
    for (const auto *m : {"uncut", "qcut", "ricco"}) {
        CHECK(fs::exists(dir / ("vqe_" + std::string(m) + ".jsonl")));
    }
    const auto again = scratch("vqe2");
    c.out = again.string();
    CHECK(run_vqe(c) == 0);
    CHECK(slurp(dir / "vqe_summary.json") == slurp(again / "vqe_summary.json"));
    CHECK(slurp(dir / "vqe_ricco.jsonl") == slurp(again / "vqe_ricco.jsonl"));
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("generate examples") {
    const auto dir = scratch("gen2");
    ExperimentConfig c;
    c.kind = "generate";
    c.seed_start = 7;
    c.seed_count = 1;
    c.out = (dir / "a").string();
    CHECK(run_generate(c) == 0);
    CHECK(parse_circuit(slurp(dir / "a" / "circuit_k1_seed7.json")).n_wires() == 7);
    c.out = (dir / "b").string();
    CHECK(run_generate(c) == 0);
    CHECK(slurp(dir / "a" / "circuit_k1_seed7.json") == slurp(dir / "b" / "circuit_k1_seed7.json"));
    c.k = 2;
    c.out = (dir / "c").string();
    CHECK(run_generate(c) == 0);
    CHECK(parse_cut(slurp(dir / "c" / "circuit_k2_seed7.cut.json")).cut_wires ==
          std::vector<std::size_t>{3, 4});
    fs::remove_all(dir);
}
