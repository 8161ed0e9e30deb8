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

#include "ricco/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ricco/circuit.hpp"
#include "ricco/vqe.hpp"

namespace ricco {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (kind != "benchmark" && kind != "vqe" && kind != "generate") {
        throw std::invalid_argument("unknown experiment kind '" + kind + "'");
    }
    if (k != 1 && k != 2) {
        throw std::invalid_argument("k must be 1 or 2");
    }
    if (seed_count == 0) {
        throw std::invalid_argument("seed range is empty");
    }
    if (shots_mode && shots == 0) {
        throw std::invalid_argument("shots must be positive in shots mode");
    }
    if (methods.empty()) {
        throw std::invalid_argument("method list is empty");
    }
    if (max_iter == 0 || !(tol > 0.0)) {
        throw std::invalid_argument("max_iter must be >= 1 and tol > 0");
    }
}

std::vector<Method> parse_methods(const std::string &csv) {
    std::vector<Method> out;
    std::stringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (!tok.empty()) {
            const auto m = method_from_name(tok);
            if (std::find(out.begin(), out.end(), m) == out.end()) {
                out.push_back(m);
            }
        }
    }
    return out;
}

ExperimentConfig config_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    ExperimentConfig c;
    try {
        c.kind = j.value("kind", c.kind);
        c.k = j.value("k", c.k);
        c.seed_start = j.value("seed_start", c.seed_start);
        c.seed_count = j.value("seed_count", c.seed_count);
        if (j.contains("mode")) {
            const auto mode = j["mode"].get<std::string>();
            if (mode != "exact" && mode != "shots") {
                throw std::invalid_argument("mode must be exact or shots");
            }
            c.shots_mode = mode == "shots";
        }
        c.shots = j.value("shots", c.shots);
        if (j.contains("cost")) {
            c.cost = cost_from_name(j["cost"].get<std::string>());
        }
        if (j.contains("methods")) {
            const auto &m = j["methods"];
            if (m.is_string()) {
                c.methods = parse_methods(m.get<std::string>());
            } else {
                c.methods.clear();
                for (const auto &x : m) {
                    c.methods.push_back(method_from_name(x.get<std::string>()));
                }
            }
        }
        c.out = j.value("out", c.out);
        c.threads = j.value("threads", c.threads);
        c.hamiltonian = j.value("hamiltonian", c.hamiltonian);
        c.ansatz = j.value("ansatz", c.ansatz);
        c.cut = j.value("cut", c.cut);
        c.max_iter = j.value("max_iter", c.max_iter);
        c.tol = j.value("tol", c.tol);
        c.warm_start = j.value("warm_start", c.warm_start);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("bad config field: ") + e.what());
    }
    return c;
}

double percent_error(double value, double reference) {
    return 100.0 * std::abs(value - reference) / std::max(std::abs(reference), 1e-12);
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Observable z_all(std::size_t n) { return Observable(1.0, PauliString(std::string(n, 'Z'))); }

Mode mode_for(const ExperimentConfig &c, std::uint64_t seed, Method m) {
    if (!c.shots_mode) {
        return ExactMode{};
    }
    return ShotsMode{c.shots, mix_seed(seed, static_cast<std::uint64_t>(m) + 1)};
}

std::vector<ResultRecord> run_seed(const ExperimentConfig &c, std::uint64_t seed) {
    std::vector<ResultRecord> rows;
    std::optional<Benchmark> bench;
    std::optional<FragmentPair> frags;
    double reference = 0.0;
    std::string setup_error;
    try {
        bench = random_benchmark(c.k, seed);
        frags = fragment(bench->circuit, bench->cut);
        reference = uncut_expectation(bench->circuit, z_all(bench->circuit.n_wires()));
    } catch (const std::exception &e) {
        setup_error = e.what();
    }
    for (const auto method : c.methods) {
        ResultRecord r;
        r.seed = seed;
        r.method = method;
        r.k = c.k;
        r.reference = reference;
        const auto start = std::chrono::steady_clock::now();
        if (!setup_error.empty()) {
            r.error = setup_error;
        } else {
            try {
                const auto obs = z_all(bench->circuit.n_wires());
                switch (method) {
                case Method::Uncut:
                    r.value = reference;
                    r.recon_circuits = 1;
                    break;
                case Method::Qcut: {
                    const auto res = qcut_expectation(*frags, obs, mode_for(c, seed, method));
                    r.value = res.value;
                    r.recon_circuits = res.ledger.distinct_circuits;
                    break;
                }
                case Method::Ricco: {
                    const RiccoAnsatz u(c.k);
                    const auto with_u = insert_ricco(*frags, u);
                    RiccoConfig rc;
                    rc.cost = c.cost;
                    rc.seed = seed;
                    rc.mode = mode_for(c, seed, method);
                    const auto run = ricco_optimize(with_u, obs, u, {}, rc);
                    r.opt_executions = run.ledger.distinct_circuits;
                    if (!run.ok()) {
                        throw std::runtime_error(run.groups.back().error);
                    }
                    Mode recon = rc.mode;
                    if (auto *s = std::get_if<ShotsMode>(&recon)) {
                        s->seed = mix_seed(s->seed, 0x7265636fULL);
                    }
                    const auto res = ricco_expectation(with_u, run.bindings, obs, recon);
                    r.value = res.value;
                    r.recon_circuits = res.ledger.distinct_circuits;
                    break;
                }
                }
                r.percent_error = percent_error(r.value, r.reference);
            } catch (const std::exception &e) {
                r.error = e.what();
            }
        }
        r.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

void write_file(const fs::path &path, const std::string &content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

double median(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::vector<ResultRecord> benchmark_records(const ExperimentConfig &config) {
    config.validate();
    const std::size_t n = config.seed_count;
    std::vector<std::vector<ResultRecord>> slots(n);
    std::size_t workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    workers = std::clamp<std::size_t>(workers, 1, n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            slots[i] = run_seed(config, config.seed_start + i);
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();
    std::vector<ResultRecord> out;
    for (auto &s : slots) {
        for (auto &r : s) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string benchmark_csv(const std::vector<ResultRecord> &records) {
    std::ostringstream out;
    out << "seed,method,k,value,reference,percent_error,recon_circuits,opt_executions,error\n";
    std::vector<std::pair<std::size_t, Method>> order;
    for (const auto &r : records) {
        out << r.seed << ',' << method_name(r.method) << ',' << r.k << ',' << fmt_double(r.value)
            << ',' << fmt_double(r.reference) << ',' << fmt_double(r.percent_error) << ','
            << r.recon_circuits << ',' << r.opt_executions << ',' << csv_escape(r.error) << '\n';
        const std::pair<std::size_t, Method> key{r.k, r.method};
        if (std::find(order.begin(), order.end(), key) == order.end()) {
            order.push_back(key);
        }
    }
    for (const auto &[k, method] : order) {
        std::vector<double> errs;
        double recon = 0.0;
        double opt = 0.0;
        std::size_t failed = 0;
        for (const auto &r : records) {
            if (r.k != k || r.method != method) {
                continue;
            }
            if (!r.error.empty()) {
                ++failed;
                continue;
            }
            errs.push_back(r.percent_error);
            recon += static_cast<double>(r.recon_circuits);
            opt += static_cast<double>(r.opt_executions);
        }
        const double count = std::max<double>(1.0, static_cast<double>(errs.size()));
        double mean = 0.0;
        for (const double e : errs) {
            mean += e;
        }
        mean /= count;
        const double max = errs.empty() ? 0.0 : *std::max_element(errs.begin(), errs.end());
        const std::string note = failed == 0 ? "" : std::to_string(failed) + " failed";
        const std::string stats[3][2] = {{"summary_mean", fmt_double(mean)},
                                         {"summary_median", fmt_double(median(errs))},
                                         {"summary_max", fmt_double(max)}};
        for (const auto &s : stats) {
            out << s[0] << ',' << method_name(method) << ',' << k << ",,," << s[1] << ','
                << fmt_double(recon / count) << ',' << fmt_double(opt / count) << ',' << note
                << '\n';
        }
    }
    return out.str();
}

std::string timing_csv(const std::vector<ResultRecord> &records) {
    std::ostringstream out;
    out << "seed,method,k,wall_seconds\n";
    for (const auto &r : records) {
        out << r.seed << ',' << method_name(r.method) << ',' << r.k << ','
            << fmt_double(r.wall_seconds) << '\n';
    }
    return out.str();
}

int run_benchmark(const ExperimentConfig &config) {
    const auto records = benchmark_records(config);
    const std::string stem = "benchmark_k" + std::to_string(config.k);
    write_file(fs::path(config.out) / (stem + ".csv"), benchmark_csv(records));
    write_file(fs::path(config.out) / (stem + "_timing.csv"), timing_csv(records));
    const bool ok = std::all_of(records.begin(), records.end(),
                                [](const ResultRecord &r) { return r.error.empty(); });
    return ok ? 0 : 2;
}

int run_vqe(const ExperimentConfig &config) {
    config.validate();
    const auto ham = load_hamiltonian_file(config.hamiltonian.empty() ? bundled_h2_path()
                                                                      : config.hamiltonian);
    Benchmark problem = default_h2_ansatz();
    if (!config.ansatz.empty()) {
        auto read = [](const std::string &path) {
            std::ifstream in(path);
            if (!in) {
                throw std::runtime_error("cannot open " + path);
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            return buf.str();
        };
        problem.circuit = parse_circuit(read(config.ansatz));
        if (config.cut.empty()) {
            throw std::invalid_argument("a custom ansatz needs a cut file");
        }
        problem.cut = parse_cut(read(config.cut));
    }

    nlohmann::ordered_json summary;
    summary["hamiltonian"] = ham.name;
    summary["seed"] = config.seed_start;
    summary["exact_energy"] = exact_ground_energy(ham);
    nlohmann::ordered_json methods = nlohmann::ordered_json::object();
    std::map<Method, VqeTrace> traces;
    bool ok = true;
    for (const auto method : config.methods) {
        VqeConfig vc;
        vc.method = method;
        vc.max_iter = config.max_iter;
        vc.tol = config.tol;
        vc.seed = config.seed_start;
        vc.warm_start = config.warm_start;
        vc.ricco.cost = config.cost;
        vc.ricco.seed = mix_seed(config.seed_start, 0x72696363ULL);
        if (config.shots_mode) {
            vc.mode = ShotsMode{config.shots, mix_seed(config.seed_start, 0x73686f74ULL)};
        }
        auto trace = vqe_optimize(problem.circuit, ham, problem.cut, vc);
        write_file(fs::path(config.out) / ("vqe_" + std::string(method_name(method)) + ".jsonl"),
                   to_jsonl(trace));
        nlohmann::ordered_json m;
        m["final_energy"] = trace.final_energy;
        m["energy_difference"] = trace.energy_difference;
        m["iterations"] = trace.iterations;
        m["converged"] = trace.converged;
        m["reconstruction_executions"] = trace.reconstruction.distinct_circuits;
        m["optimization_executions"] = trace.optimization.distinct_circuits;
        m["reconstruction_per_iteration"] = trace.recon_per_iteration();
        m["shots_total"] = trace.reconstruction.shots_total + trace.optimization.shots_total;
        m["error"] = trace.error;
        ok = ok && trace.error.empty();
        methods[std::string(method_name(method))] = std::move(m);
        traces.emplace(method, std::move(trace));
    }
    summary["methods"] = std::move(methods);
    if (traces.count(Method::Qcut) != 0 && traces.count(Method::Ricco) != 0) {
        const auto &q = traces.at(Method::Qcut);
        const auto &r = traces.at(Method::Ricco);
        nlohmann::ordered_json cmp;
        cmp["ricco_recon_per_iteration_below_qcut"] =
            r.recon_per_iteration() < q.recon_per_iteration();
        cmp["ricco_opt_over_qcut_recon"] =
            q.reconstruction.distinct_circuits == 0
                ? 0.0
                : static_cast<double>(r.optimization.distinct_circuits) /
                      static_cast<double>(q.reconstruction.distinct_circuits);
        summary["comparison"] = std::move(cmp);
    }
    write_file(fs::path(config.out) / "vqe_summary.json", summary.dump(2) + "\n");
    return ok ? 0 : 2;
}

int run_generate(const ExperimentConfig &config) {
    config.validate();
    for (std::uint64_t i = 0; i < config.seed_count; ++i) {
        const auto seed = config.seed_start + i;
        const auto b = random_benchmark(config.k, seed);
        const std::string stem =
            "circuit_k" + std::to_string(config.k) + "_seed" + std::to_string(seed);
        write_file(fs::path(config.out) / (stem + ".json"), serialize(b.circuit));
        write_file(fs::path(config.out) / (stem + ".cut.json"), serialize(b.cut));
    }
    return 0;
}

std::string report(const std::vector<std::string> &csv_paths) {
    struct Agg {
        std::vector<double> errors;
        double recon = 0.0;
        double opt = 0.0;
        std::size_t failed = 0;
    };
    std::map<std::pair<std::size_t, std::string>, Agg> aggs;
    std::vector<std::pair<std::size_t, std::string>> order;
    for (const auto &path : csv_paths) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open " + path);
        }
        std::string line;
        std::getline(in, line);
        if (line.rfind("seed,method,k,", 0) != 0) {
            throw std::runtime_error(path + " is not a benchmark CSV");
        }
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                f.push_back(cell);
            }
            if (f.size() < 8 || f[0].rfind("summary", 0) == 0) {
                continue;
            }
            const std::pair<std::size_t, std::string> key{std::stoul(f[2]), f[1]};
            if (aggs.find(key) == aggs.end()) {
                order.push_back(key);
            }
            auto &a = aggs[key];
            if (f.size() > 8 && !f[8].empty()) {
                ++a.failed;
                continue;
            }
            a.errors.push_back(std::stod(f[5]));
            a.recon += std::stod(f[6]);
            a.opt += std::stod(f[7]);
        }
    }
    std::sort(order.begin(), order.end());
    std::ostringstream out;
    out << "| k | method | runs | failed | mean % err | median % err | max % err | recon circuits "
           "| opt executions |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    char buf[256];
    for (const auto &key : order) {
        const auto &a = aggs.at(key);
        const double n = std::max<double>(1.0, static_cast<double>(a.errors.size()));
        double mean = 0.0;
        for (const double e : a.errors) {
            mean += e;
        }
        const double max = a.errors.empty() ? 0.0 : *std::max_element(a.errors.begin(), a.errors.end());
        std::snprintf(buf, sizeof buf, "| %zu | %s | %zu | %zu | %.4g | %.4g | %.4g | %.4g | %.4g |\n",
                      key.first, key.second.c_str(), a.errors.size(), a.failed, mean / n,
                      median(a.errors), max, a.recon / n, a.opt / n);
        out << buf;
    }
    return out.str();
}

} // namespace ricco
