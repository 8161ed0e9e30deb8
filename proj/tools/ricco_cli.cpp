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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricco/harness.hpp"

namespace {

struct Flags {
    std::string config;
    std::uint64_t seed_start = 0;
    std::uint64_t seed_count = 1;
    std::size_t k = 1;
    std::string mode = "exact";
    std::uint64_t shots = 1000;
    std::string cost = "restricted";
    std::string methods;
    std::string out;
    std::size_t threads = 0;
    std::string hamiltonian;
    std::string ansatz;
    std::string cut;
    std::size_t max_iter = 500;
    double tol = 1e-6;
    bool reseed = false;
};

struct Options {
    CLI::Option *seed_start;
    CLI::Option *seed_count;
    CLI::Option *k;
    CLI::Option *mode;
    CLI::Option *shots;
    CLI::Option *cost;
    CLI::Option *methods;
    CLI::Option *out;
    CLI::Option *threads;
};

Options add_common(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config, "JSON experiment config; flags override it");
    Options o{};
    o.seed_start = cmd->add_option("--seed-start", f.seed_start, "first seed");
    o.seed_count = cmd->add_option("--seed-count", f.seed_count, "number of seeds");
    o.k = cmd->add_option("--k", f.k, "cut size")->check(CLI::IsMember({1, 2}));
    o.mode = cmd->add_option("--mode", f.mode, "exact or shots")
                 ->check(CLI::IsMember({"exact", "shots"}));
    o.shots = cmd->add_option("--shots", f.shots, "shots per circuit in shots mode");
    o.cost = cmd->add_option("--cost", f.cost, "cut-unitary cost")
                 ->check(CLI::IsMember({"restricted", "alignment", "paper"}));
    o.methods = cmd->add_option("--methods", f.methods, "comma list of uncut,qcut,ricco");
    o.out = cmd->add_option("--out", f.out, "output directory");
    o.threads = cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    return o;
}

ricco::ExperimentConfig resolve(const std::string &kind, const Flags &f, const Options &o) {
    ricco::ExperimentConfig c;
    bool seed_from_config = false;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw std::runtime_error("cannot open config " + f.config);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        c = ricco::config_from_json(buf.str());
        seed_from_config = buf.str().find("\"seed_start\"") != std::string::npos;
    }
    c.kind = kind;
    if (o.seed_start->count() > 0) {
        c.seed_start = f.seed_start;
    } else if (!seed_from_config) {
        if (const char *env = std::getenv("RICCO_SEED"); env != nullptr && *env != '\0') {
            c.seed_start = std::stoull(env);
        }
    }
    if (o.seed_count->count() > 0) {
        c.seed_count = f.seed_count;
    }
    if (o.k->count() > 0) {
        c.k = f.k;
    }
    if (o.mode->count() > 0) {
        c.shots_mode = f.mode == "shots";
    }
    if (o.shots->count() > 0) {
        c.shots = f.shots;
    }
    if (o.cost->count() > 0) {
        c.cost = ricco::cost_from_name(f.cost);
    }
    if (o.methods->count() > 0) {
        c.methods = ricco::parse_methods(f.methods);
    }
    if (o.out->count() > 0) {
        c.out = f.out;
    }
    if (o.threads->count() > 0) {
        c.threads = f.threads;
    }
    c.validate();
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Circuit cutting with full-basis and optimized diagonal-basis reconstruction"};
    app.require_subcommand(1);

    Flags gen_flags;
    auto *gen = app.add_subcommand("generate", "write seeded benchmark circuits and cut files");
    const auto gen_opts = add_common(gen, gen_flags);

    Flags bench_flags;
    auto *bench = app.add_subcommand("benchmark", "error and execution counts over seeds");
    const auto bench_opts = add_common(bench, bench_flags);

    Flags vqe_flags;
    auto *vqe = app.add_subcommand("vqe", "VQE with each method on one seed");
    const auto vqe_opts = add_common(vqe, vqe_flags);
    auto *ham_opt = vqe->add_option("--hamiltonian", vqe_flags.hamiltonian,
                                    "observable file; defaults to the bundled H2");
    auto *ansatz_opt = vqe->add_option("--ansatz", vqe_flags.ansatz, "ansatz circuit JSON");
    auto *cut_opt = vqe->add_option("--cut", vqe_flags.cut, "cut JSON for --ansatz");
    auto *iter_opt = vqe->add_option("--max-iter", vqe_flags.max_iter, "VQE iteration cap");
    auto *tol_opt = vqe->add_option("--tol", vqe_flags.tol, "VQE energy tolerance");
    auto *reseed_opt = vqe->add_flag("--reseed", vqe_flags.reseed,
                                     "draw fresh cut-unitary angles every iteration");

    std::vector<std::string> csvs;
    auto *rep = app.add_subcommand("report", "aggregate benchmark CSVs into a Markdown table");
    rep->add_option("csv", csvs, "benchmark CSV files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return ricco::run_generate(resolve("generate", gen_flags, gen_opts));
        }
        if (bench->parsed()) {
            return ricco::run_benchmark(resolve("benchmark", bench_flags, bench_opts));
        }
        if (vqe->parsed()) {
            auto c = resolve("vqe", vqe_flags, vqe_opts);
            if (ham_opt->count() > 0) {
                c.hamiltonian = vqe_flags.hamiltonian;
            }
            if (ansatz_opt->count() > 0) {
                c.ansatz = vqe_flags.ansatz;
            }
            if (cut_opt->count() > 0) {
                c.cut = vqe_flags.cut;
            }
            if (iter_opt->count() > 0) {
                c.max_iter = vqe_flags.max_iter;
            }
            if (tol_opt->count() > 0) {
                c.tol = vqe_flags.tol;
            }
            if (reseed_opt->count() > 0) {
                c.warm_start = false;
            }
            c.validate();
            return ricco::run_vqe(c);
        }
        std::cout << ricco::report(csvs);
        return 0;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
