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
 * @file optimizer.hpp
 * Optimization of the cut unitary: costs over upstream outcome
 * probabilities, gradients, Adam and the per-group inner loop.
 *
 * Probabilities are taken on the upstream fragment carrying U(theta), after
 * the basis change of the group's upstream word, so one computational-basis
 * setting feeds every cost below.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ricco/circuit.hpp"
#include "ricco/cut.hpp"
#include "ricco/pauli.hpp"
#include "ricco/types.hpp"

namespace ricco {

/**
 * Restricted: (1 - S)^2 with S = 2^-k sum_{Q in {I,Z}^k} <O_A (x) Q>^2.
 * S reaches its maximum exactly when the part of the cut state correlated
 * with O_A is diagonal, which zeroes the terms the diagonal basis omits.
 * Alignment: (1 - sum_x p(x)^2)^2.
 * Paper: (1 - prod_x p(x))^2.
 */
enum class CostKind { Restricted, Alignment, Paper };

std::string_view cost_name(CostKind kind);
CostKind cost_from_name(std::string_view name);

/**
 * 2^-n sum over P in {Z^{n_a}} (x) {I,Z}^{n_b} of <P>_rho * <P>_x, with
 * n = n_a + n_b and x a basis index (wire 0 = MSB). Not the outcome
 * probability of x in general. Throws when an expectation is missing.
 */
double fidelity_restricted(const std::map<PauliString, double> &expectations, std::size_t n_a,
                           std::size_t n_b, std::uint64_t basis_state);

double cost_paper(std::span<const double> p);
double cost_alignment(std::span<const double> p);

struct UpstreamProbabilities {
    std::vector<double> p;
    std::size_t n_qubits = 0;
    std::vector<std::uint64_t> cut_masks;  ///< one bit per cut wire, cut order
    std::uint64_t observable_mask = 0;     ///< bits where O_A acts
};

double cost_value(CostKind kind, const UpstreamProbabilities &probs);

/// dC/dp(x) for every outcome x.
std::vector<double> cost_gradient(CostKind kind, const UpstreamProbabilities &probs);

/// Outcome probabilities of the upstream fragment after the basis change
/// for `upstream_word` (upstream-local, I on the cut wires).
UpstreamProbabilities upstream_probabilities(const FragmentPair &fragments,
                                             const PauliString &upstream_word,
                                             const Bindings &bindings, const Mode &mode = ExactMode{},
                                             const std::optional<AngleShift> &shift = std::nullopt);

struct AdamHyper {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class AdamState {
  public:
    AdamState(std::size_t n, AdamHyper hyper = {});

    /// theta <- theta - lr * mhat / (sqrt(vhat) + eps).
    void step(std::vector<double> &theta, const std::vector<double> &grad);

    [[nodiscard]] std::size_t steps() const { return t_; }
    [[nodiscard]] const std::vector<double> &first_moment() const { return m_; }
    [[nodiscard]] const std::vector<double> &second_moment() const { return v_; }
    [[nodiscard]] const AdamHyper &hyper() const { return hyper_; }

  private:
    AdamHyper hyper_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t t_ = 0;
};

enum class GradientMethod { ParameterShift, FiniteDifference };

/**
 * @brief Cost of one observable group as a function of the ansatz angles.
 *
 * Every probability evaluation counts one execution in `ledger()`. In shots
 * mode each evaluation draws from its own seeded stream.
 */
class GroupCost {
  public:
    GroupCost(const FragmentPair &fragments_with_u, PauliString upstream_word, Bindings fixed,
              CostKind kind, Mode mode = ExactMode{});

    [[nodiscard]] std::size_t param_count() const { return fragments_.ansatz_params.size(); }

    double operator()(const std::vector<double> &theta);

    /**
     * Parameter shift evaluates each probability at angle +-pi/2 per
     * occurrence and chain-rules through dC/dp at theta, reusing the last
     * cost evaluation when it was taken at theta; it throws
     * std::invalid_argument when a parameter sits on a gate without an exact
     * shift rule. Finite differences are central with step h.
     */
    std::vector<double> gradient(const std::vector<double> &theta, GradientMethod method,
                                 double h = 1e-4);

    [[nodiscard]] const ExecutionLedger &ledger() const { return ledger_; }
    [[nodiscard]] Bindings bindings(const std::vector<double> &theta) const;

  private:
    UpstreamProbabilities probabilities(const std::vector<double> &theta,
                                        const std::optional<AngleShift> &shift);

    struct Occurrence {
        std::size_t op_index;
        std::size_t slot;
        double scale;
        bool shiftable;
    };

    FragmentPair fragments_;
    Circuit circuit_; ///< upstream fragment followed by the basis change
    PauliString word_;
    Bindings fixed_;
    CostKind kind_;
    Mode mode_;
    std::vector<std::vector<Occurrence>> occurrences_;
    std::uint64_t stream_ = 0;
    ExecutionLedger ledger_{0, 0, Phase::Optimization};
    /// Last evaluated point; parameter shift reuses its probabilities.
    std::optional<std::pair<std::vector<double>, UpstreamProbabilities>> last_;
};

struct RiccoConfig {
    CostKind cost = CostKind::Restricted;
    double tol = 1e-7;
    std::size_t max_inner_iters = 500;
    AdamHyper adam;
    GradientMethod gradient = GradientMethod::ParameterShift;
    double fd_step = 1e-4;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> warm_start;
    /// Per-group starting angles; they take precedence over chaining.
    std::map<std::string, std::vector<double>> group_warm_start;
    Mode mode = ExactMode{};
    std::size_t moving_average = 5; ///< convergence window in shots mode
};

struct OptimizationTrace {
    std::string group;
    std::vector<double> cost;                     ///< after each Adam step
    std::vector<std::uint64_t> executions_cum;    ///< after each Adam step
    double initial_cost = 0.0;
    std::vector<double> final_theta;
    bool converged = false;
    std::size_t iterations = 0;
    ExecutionLedger ledger{0, 0, Phase::Optimization};
    std::string error;
};

struct RiccoRun {
    GroupBindings bindings;
    std::vector<OptimizationTrace> groups; ///< lexicographic by key
    ExecutionLedger ledger{0, 0, Phase::Optimization};

    [[nodiscard]] bool ok() const;
};

/**
 * Runs the inner loop for one group: Adam steps until
 * |cost_prev - cost_new| <= tol or max_inner_iters. Executions: 1 for the
 * initial cost, then per step the gradient evaluations plus 1.
 */
OptimizationTrace optimize_group(GroupCost &cost, const std::vector<double> &theta0,
                                 const RiccoConfig &config);

/**
 * Optimizes U once per upstream group of `observable`, in lexicographic key
 * order. Group g starts from config.group_warm_start[key] when present, else
 * from the optimum of group g-1; the first group falls back to
 * config.warm_start or to uniform [0, 2pi) angles drawn from config.seed.
 * `fixed` binds every non-ansatz parameter of the fragments.
 */
RiccoRun ricco_optimize(const FragmentPair &fragments_with_u, const Observable &observable,
                        const RiccoAnsatz &ansatz, const Bindings &fixed,
                        const RiccoConfig &config);

/// One `{iter, cost, executions_cum}` JSON object per line.
std::string to_jsonl(const OptimizationTrace &trace);

} // namespace ricco
