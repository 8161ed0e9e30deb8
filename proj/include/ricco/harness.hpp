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
 * @file harness.hpp
 * Batch experiments: seeded benchmark sweeps, VQE comparisons, circuit
 * generation and CSV aggregation.
 *
 * Benchmark CSV columns:
 *   seed,method,k,value,reference,percent_error,recon_circuits,opt_executions,error
 * Per-method summary rows follow the data rows with seed set to
 * summary_mean, summary_median or summary_max. Wall times go to a separate
 * `<name>_timing.csv` so the main file is reproducible byte for byte.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ricco/cut.hpp"
#include "ricco/optimizer.hpp"

namespace ricco {

struct ExperimentConfig {
    std::string kind = "benchmark"; ///< benchmark | vqe | generate
    std::size_t k = 1;
    std::uint64_t seed_start = 0;
    std::uint64_t seed_count = 1;
    bool shots_mode = false;
    std::uint64_t shots = 1000;
    CostKind cost = CostKind::Restricted;
    std::vector<Method> methods{Method::Uncut, Method::Qcut, Method::Ricco};
    std::string out = "out";
    std::size_t threads = 0; ///< 0 = hardware concurrency
    std::string hamiltonian;  ///< empty = bundled H2
    std::string ansatz;       ///< circuit JSON; empty = built-in H2 ansatz
    std::string cut;          ///< cut JSON sidecar for `ansatz`
    std::size_t max_iter = 500;
    double tol = 1e-6;
    bool warm_start = true;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Reads the JSON form; absent fields keep their defaults.
ExperimentConfig config_from_json(const std::string &text);

std::vector<Method> parse_methods(const std::string &csv);

struct ResultRecord {
    std::uint64_t seed = 0;
    Method method = Method::Uncut;
    std::size_t k = 1;
    double value = 0.0;
    double reference = 0.0;
    double percent_error = 0.0;
    std::uint64_t recon_circuits = 0;
    std::uint64_t opt_executions = 0;
    std::string error;
    double wall_seconds = 0.0;
};

double percent_error(double value, double reference);

/// Every (seed, method) of the sweep, sorted by seed then method order.
std::vector<ResultRecord> benchmark_records(const ExperimentConfig &config);

std::string benchmark_csv(const std::vector<ResultRecord> &records);
std::string timing_csv(const std::vector<ResultRecord> &records);

/// Exit code: 0 when every row succeeded, 2 otherwise.
int run_benchmark(const ExperimentConfig &config);

/// Writes vqe_<method>.jsonl and vqe_summary.json under config.out.
int run_vqe(const ExperimentConfig &config);

/// Writes circuit_k<k>_seed<s>.json and its .cut.json sidecar per seed.
int run_generate(const ExperimentConfig &config);

/// Aggregates benchmark CSVs into a Markdown table per (k, method).
std::string report(const std::vector<std::string> &csv_paths);

} // namespace ricco
