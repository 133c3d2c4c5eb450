#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rlvr/advantage.hpp"
#include "rlvr/errors.hpp"
#include "rlvr/gating.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/tasks.hpp"

namespace rlvr {

struct TrainConfig {
    GateMethod method = GateMethod::maspo;
    GateParams gate{};
    int groups_per_step = 4;        // queries sampled per step (B)
    int group_size = 8;             // rollouts per query (G)
    int minibatches_per_step = 16;  // off-policy updates per collection (M)
    double learning_rate = 0.02;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.95;
    double adam_eps = 1e-8;
    double entropy_coeff = 0.0;       // beta_E; 0 disables the entropy bonus
    double adv_reweight_alpha = 0.0;  // alpha_A; 0 disables advantage reweighting
    int total_steps = 0;
    std::uint64_t seed = 0;

    void validate() const {
        gate.validate();
        if (groups_per_step < 1) throw std::invalid_argument("TrainConfig.groups_per_step must be >= 1");
        if (group_size < 2) throw std::invalid_argument("TrainConfig.group_size must be >= 2");
        if (minibatches_per_step < 1) throw std::invalid_argument("TrainConfig.minibatches_per_step must be >= 1");
        if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig.learning_rate must be > 0");
        if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) throw std::invalid_argument("TrainConfig.adam_beta1 must be in [0, 1)");
        if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) throw std::invalid_argument("TrainConfig.adam_beta2 must be in [0, 1)");
        if (!(adam_eps > 0.0)) throw std::invalid_argument("TrainConfig.adam_eps must be > 0");
        if (!(entropy_coeff >= 0.0)) throw std::invalid_argument("TrainConfig.entropy_coeff must be >= 0");
        if (!(adv_reweight_alpha >= 0.0 && adv_reweight_alpha <= 1.0)) {
            throw std::invalid_argument("TrainConfig.adv_reweight_alpha must be in [0, 1]");
        }
        if (total_steps < 0) throw std::invalid_argument("TrainConfig.total_steps must be >= 0");
    }
};

struct Rollout {
    int query;
    std::vector<int> tokens;
    std::vector<double> logprobs_old;  // per-token log-prob under the sampling policy
    int reward;
    double advantage;  // sequence advantage, broadcast to every token
};

struct Group {
    int query;
    std::vector<Rollout> rollouts;
    bool degenerate;
};

struct CollectedBatch {
    std::vector<Group> groups;
    std::int64_t policy_version;  // trainer step count at collection time
};

struct TrainerState {
    TabularPolicy policy;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::int64_t step_count = 0;    // completed training steps
    std::int64_t update_count = 0;  // optimizer updates applied
    RandomStream rng;

    TrainerState(TabularPolicy initial_policy, std::uint64_t seed)
        : policy(std::move(initial_policy)),
          first_moment(policy.param_count(), 0.0),
          second_moment(policy.param_count(), 0.0),
          rng(seed) {}
};

// Uniform-policy trainer for the given task.
inline TrainerState make_initial_state(const TaskSpec& task, const TrainConfig& config) {
    task.validate();
    config.validate();
    return TrainerState(TabularPolicy(task.num_queries, task.seq_len, task.vocab_size, 0.0),
                        config.seed);
}

// Freeze the current policy and sample B groups of G rollouts. Queries
// cycle round-robin across steps; every group draws from its own child
// random stream so collection order is immaterial.
inline CollectedBatch collect_groups(TrainerState& state, const TaskSpec& task,
                                     const TrainConfig& config) {
    CollectedBatch batch;
    batch.policy_version = state.step_count;
    batch.groups.reserve(config.groups_per_step);
    for (int b = 0; b < config.groups_per_step; ++b) {
        const int query = static_cast<int>(
            (state.step_count * config.groups_per_step + b) % task.num_queries);
        RandomStream group_rng = state.rng.split();
        Group group{query, {}, false};
        RewardGroup rewards;
        group.rollouts.reserve(config.group_size);
        for (int i = 0; i < config.group_size; ++i) {
            Rollout rollout;
            rollout.query = query;
            rollout.tokens = state.policy.sample(query, group_rng);
            rollout.logprobs_old = state.policy.log_prob(query, rollout.tokens).per_token;
            rollout.reward = verify(task, query, rollout.tokens);
            rollout.advantage = 0.0;
            rewards.rewards.push_back(rollout.reward);
            group.rollouts.push_back(std::move(rollout));
        }
        const AdvantageVector adv = group_advantages(rewards);
        group.degenerate = adv.degenerate;
        for (int i = 0; i < config.group_size; ++i) {
            group.rollouts[i].advantage = adv.values[i];
        }
        batch.groups.push_back(std::move(group));
    }
    return batch;
}

// One flattened token with everything gating needs.
struct TokenDatum {
    int query;
    int pos;
    int prev;
    int token;
    double logprob_old;
    double advantage;
};

inline std::vector<TokenDatum> flatten_batch(const CollectedBatch& batch) {
    std::vector<TokenDatum> tokens;
    for (const auto& group : batch.groups) {
        for (const auto& rollout : group.rollouts) {
            for (std::size_t t = 0; t < rollout.tokens.size(); ++t) {
                const int prev = t == 0 ? -1 : rollout.tokens[t - 1];
                tokens.push_back(TokenDatum{rollout.query, static_cast<int>(t), prev,
                                            rollout.tokens[t], rollout.logprobs_old[t],
                                            rollout.advantage});
            }
        }
    }
    return tokens;
}

// Factors captured at the evaluation point that the gradient treats as
// constants: the gate weight or clip branch, and the advantage after
// reweighting.
struct FrozenToken {
    bool dead;        // hard-clip branch with zero gradient
    double factor;    // gate weight F (gate methods) or 1 (live clip branch)
    double advantage;
    double constant;  // objective value of the dead branch
};

struct MinibatchEval {
    std::vector<double> gradient;  // ascent gradient of the mini-batch objective
    double objective = 0.0;
    double grad_norm = 0.0;
    std::vector<FrozenToken> frozen;
    std::vector<TokenStat> token_stats;
};

// Token-mean surrogate over one mini-batch plus the optional entropy bonus,
// with its exact analytic gradient.
inline MinibatchEval evaluate_minibatch(const TabularPolicy& policy,
                                        std::span<const TokenDatum> tokens,
                                        const TrainConfig& config) {
    MinibatchEval eval;
    eval.gradient.assign(policy.param_count(), 0.0);
    if (tokens.empty()) return eval;
    const double n = static_cast<double>(tokens.size());
    const int vocab = policy.vocab_size();

    for (const TokenDatum& datum : tokens) {
        const int prev = datum.prev < 0 ? vocab : datum.prev;
        const auto row = policy.softmax_row(datum.query, datum.pos, prev);
        const std::size_t base = policy.row_offset(datum.query, datum.pos, prev);

        double advantage = datum.advantage;
        if (config.adv_reweight_alpha > 0.0) {
            advantage = reweight_advantage(advantage, row.probs[datum.token],
                                           config.adv_reweight_alpha);
        }
        const TokenStep step = make_token_step(row.logps[datum.token] - datum.logprob_old,
                                               advantage, std::exp(datum.logprob_old));
        const TokenSurrogate surrogate = token_surrogate(config.method, step, config.gate);
        eval.objective += surrogate.objective / n;

        const double scale = surrogate.grad_coefficient / n;
        for (int k = 0; k < vocab; ++k) {
            eval.gradient[base + k] += scale * ((k == datum.token ? 1.0 : 0.0) - row.probs[k]);
        }
        if (config.entropy_coeff > 0.0) {
            const double h = row.entropy();
            eval.objective += config.entropy_coeff * h / n;
            const double escale = config.entropy_coeff / n;
            for (int k = 0; k < vocab; ++k) {
                eval.gradient[base + k] += escale * (-row.probs[k] * (row.logps[k] + h));
            }
        }

        const double weight = gate_weight(config.method, step, config.gate);
        const bool dead = !is_soft_gate(config.method) && surrogate.grad_coefficient == 0.0;
        eval.frozen.push_back(FrozenToken{dead, is_soft_gate(config.method) ? weight : 1.0,
                                          advantage, dead ? surrogate.objective : 0.0});
        eval.token_stats.push_back(TokenStat{step.ratio, std::abs(step.log_ratio), weight,
                                             surrogate.grad_coefficient == 0.0});
    }
    double norm_sq = 0.0;
    for (double g : eval.gradient) norm_sq += g * g;
    eval.grad_norm = std::sqrt(norm_sq);
    return eval;
}

// The mini-batch objective with gates, clip branches, and reweighting
// factors pinned at previously captured values. Smooth in the parameters;
// this is what the finite-difference check differentiates.
inline double frozen_minibatch_objective(const TabularPolicy& policy,
                                         std::span<const TokenDatum> tokens,
                                         std::span<const FrozenToken> frozen,
                                         const TrainConfig& config) {
    if (tokens.size() != frozen.size()) {
        throw std::invalid_argument("frozen_minibatch_objective: token/frozen size mismatch");
    }
    if (tokens.empty()) return 0.0;
    const double n = static_cast<double>(tokens.size());
    const int vocab = policy.vocab_size();
    double objective = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const TokenDatum& datum = tokens[i];
        const int prev = datum.prev < 0 ? vocab : datum.prev;
        const auto row = policy.softmax_row(datum.query, datum.pos, prev);
        if (frozen[i].dead) {
            objective += frozen[i].constant / n;
        } else {
            const double log_ratio = std::clamp(row.logps[datum.token] - datum.logprob_old,
                                                -kLogRatioClamp, kLogRatioClamp);
            objective += frozen[i].factor * std::exp(log_ratio) * frozen[i].advantage / n;
        }
        if (config.entropy_coeff > 0.0) {
            objective += config.entropy_coeff * row.entropy() / n;
        }
    }
    return objective;
}

// Bias-corrected adaptive-moment update. Gradients follow the minimizing
// convention: the returned delta moves parameters against the gradient.
inline void adam_update(std::vector<double>& first_moment, std::vector<double>& second_moment,
                        std::span<const double> gradient, std::int64_t t,
                        const TrainConfig& config, std::span<double> delta_out) {
    if (first_moment.size() != gradient.size() || second_moment.size() != gradient.size() ||
        delta_out.size() != gradient.size()) {
        throw std::invalid_argument("adam_update: shape mismatch");
    }
    if (t < 1) throw std::invalid_argument("adam_update: timestep must be >= 1");
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t i = 0; i < gradient.size(); ++i) {
        first_moment[i] = b1 * first_moment[i] + (1.0 - b1) * gradient[i];
        second_moment[i] = b2 * second_moment[i] + (1.0 - b2) * gradient[i] * gradient[i];
        const double mhat = first_moment[i] / corr1;
        const double vhat = second_moment[i] / corr2;
        delta_out[i] = -config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_eps);
    }
}

// One training step: shuffle the batch's tokens, split them into M
// mini-batches, and apply one optimizer update per mini-batch against the
// frozen sampling policy. Emits the step's metrics.
inline MetricsRecord train_step(TrainerState& state, const CollectedBatch& batch,
                                const TrainConfig& config) {
    if (batch.policy_version != state.step_count) {
        throw std::logic_error(
            "train_step: batch was collected under a different policy snapshot");
    }

    StepData data;
    for (const auto& group : batch.groups) {
        data.group_degenerate.push_back(group.degenerate ? 1 : 0);
        for (const auto& rollout : group.rollouts) {
            data.rollouts.push_back(RolloutStat{
                rollout.reward, state.policy.entropy(rollout.query, rollout.tokens)});
        }
    }

    std::vector<TokenDatum> tokens = flatten_batch(batch);
    std::vector<std::size_t> order(tokens.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    state.rng.shuffle(order);

    const std::size_t total = tokens.size();
    const std::size_t m = static_cast<std::size_t>(config.minibatches_per_step);
    std::vector<double> descent(state.policy.param_count());
    std::vector<double> delta(state.policy.param_count());
    double grad_norm_sum = 0.0;
    int applied = 0;

    std::size_t begin = 0;
    for (std::size_t mb = 0; mb < m; ++mb) {
        const std::size_t size = total / m + (mb < total % m ? 1 : 0);
        if (size == 0) continue;
        std::vector<TokenDatum> part;
        part.reserve(size);
        for (std::size_t i = begin; i < begin + size; ++i) part.push_back(tokens[order[i]]);
        begin += size;

        MinibatchEval eval = evaluate_minibatch(state.policy, part, config);
        for (std::size_t i = 0; i < descent.size(); ++i) descent[i] = -eval.gradient[i];
        adam_update(state.first_moment, state.second_moment, descent, ++state.update_count,
                    config, delta);
        auto params = state.policy.params();
        for (std::size_t i = 0; i < params.size(); ++i) params[i] += delta[i];

        grad_norm_sum += eval.grad_norm;
        ++applied;
        data.token_evals.insert(data.token_evals.end(), eval.token_stats.begin(),
                                eval.token_stats.end());
    }

    state.step_count += 1;
    if (!state.policy.all_finite()) {
        throw divergence_error(state.step_count, "non-finite policy parameter after update");
    }

    data.step = state.step_count;
    data.grad_norm = applied > 0 ? grad_norm_sum / applied : 0.0;
    return summarize_step(data);
}

}  // namespace rlvr
