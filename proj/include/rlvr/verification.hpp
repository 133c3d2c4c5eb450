#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rlvr/advantage.hpp"
#include "rlvr/config.hpp"
#include "rlvr/experiment.hpp"
#include "rlvr/gating.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/oracle.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/tasks.hpp"
#include "rlvr/trainer.hpp"

// Oracle and property battery behind the `verify` command and the
// acceptance suite. Each check is self-contained, prints nothing, and
// reports pass/fail plus wall time; failures carry a short diagnostic.
namespace rlvr::verification {

struct CheckResult {
    std::string name;
    bool passed = true;
    double seconds = 0.0;
    std::string detail;
};

namespace detail {

class Failure {
public:
    void fail(const std::string& message) {
        if (text_.empty()) text_ = message;
        failed_ = true;
    }
    bool failed() const { return failed_; }
    const std::string& text() const { return text_; }

private:
    bool failed_ = false;
    std::string text_;
};

inline double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double relative_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
    const double scale = std::max({norm(a), norm(b), 1e-12});
    return std::sqrt(diff) / scale;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Shared desk-scale training settings. The learning rate was pinned by a
// pilot sweep over {0.005 .. 0.05}: above 0.03 the 16 off-policy updates
// push ratios far outside the trust region, below 0.01 the two methods
// become indistinguishable; 0.02 keeps both benchmarks comfortably green.
inline constexpr double kBenchLearningRate = 0.02;
inline constexpr int kBenchSteps = 200;

inline TaskSpec bench_copy_task() {
    TaskSpec task;
    task.kind = TaskKind::copy;
    task.vocab_size = 4;
    task.seq_len = 3;
    task.num_queries = 4;
    for (int q = 0; q < 4; ++q) {
        task.copy_targets.push_back({q % 4, (q + 1) % 4, (q + 2) % 4});
    }
    return task;
}

inline TaskSpec bench_modsum_task() {
    TaskSpec task;
    task.kind = TaskKind::modsum;
    task.vocab_size = 4;
    task.seq_len = 2;
    task.num_queries = 4;
    task.modsum_residues = {0, 1, 2, 3};
    return task;
}

inline TrainConfig bench_train_config(GateMethod method, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.method = method;
    cfg.gate = GateParams{};  // sigma_base=1, alpha=0.3, beta=0.03, eps=0.2
    cfg.groups_per_step = 4;
    cfg.group_size = 8;
    cfg.minibatches_per_step = 16;
    cfg.learning_rate = kBenchLearningRate;
    cfg.total_steps = kBenchSteps;
    cfg.seed = seed;
    return cfg;
}

struct RunSummary {
    std::vector<MetricsRecord> records;
    double final_expected_reward = 0.0;
    double final_success_probability = 0.0;
    double mean_entropy_over_steps = 0.0;
    double seconds = 0.0;
};

inline RunSummary run_in_memory(const TaskSpec& task, const TrainConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    TrainerState state = make_initial_state(task, config);
    RunSummary summary;
    for (int step = 0; step < config.total_steps; ++step) {
        const CollectedBatch batch = collect_groups(state, task, config);
        summary.records.push_back(train_step(state, batch, config));
    }
    const auto report = mean_exact_expected_reward(state.policy, task);
    summary.final_expected_reward = report.expected_reward;
    summary.final_success_probability = report.success_probability;
    double entropy_sum = 0.0;
    for (const auto& rec : summary.records) entropy_sum += rec.mean_entropy;
    summary.mean_entropy_over_steps =
        summary.records.empty() ? 0.0 : entropy_sum / summary.records.size();
    summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

}  // namespace detail

// 1. Brute-force group standardization reproduces the closed forms for
//    every split of every group size up to 64, and both are strictly
//    monotone in the number of correct rollouts.
inline CheckResult check_advantage_closed_form() {
    detail::Failure f;
    for (int n = 2; n <= 64; ++n) {
        double prev_pos = std::numeric_limits<double>::infinity();
        double prev_neg = std::numeric_limits<double>::infinity();
        for (int x = 1; x < n; ++x) {
            RewardGroup group;
            group.rewards.assign(n, -1);
            for (int i = 0; i < x; ++i) group.rewards[i] = 1;
            const AdvantageVector adv = group_advantages(group);
            const ClosedFormAdvantages closed = closed_form_advantages(n, x);
            if (adv.degenerate) f.fail("unexpected degenerate group");
            for (int i = 0; i < n; ++i) {
                const double expected = i < x ? closed.positive : closed.negative;
                if (std::abs(adv.values[i] - expected) > 1e-12) {
                    f.fail("standardized advantage differs from closed form at n=" +
                           std::to_string(n) + " x=" + std::to_string(x));
                }
            }
            if (!(closed.positive < prev_pos)) f.fail("A+ not strictly decreasing in x");
            if (!(closed.negative < prev_neg)) f.fail("A- not strictly decreasing in x");
            prev_pos = closed.positive;
            prev_neg = closed.negative;
        }
    }
    return CheckResult{"advantage standardization matches closed forms (n <= 64)", !f.failed(), 0.0,
                       f.text()};
}

// 2. Gate identity and bounds on randomized draws.
inline CheckResult check_gate_identity_and_bounds() {
    detail::Failure f;
    RandomStream rng(20260810);
    for (int i = 0; i < 100000; ++i) {
        GateParams params;
        params.sigma_base = 0.1 + 1.9 * rng.next_uniform();
        params.alpha = rng.next_uniform();
        params.beta_low = 0.5 * rng.next_uniform();
        params.beta_high = 0.5 * rng.next_uniform();
        params.tau_pos = 0.5 + 1.5 * rng.next_uniform();
        params.tau_neg = 0.5 + 1.5 * rng.next_uniform();
        params.sigma_cap = std::max(params.sigma_base, 1.0) + 19.0 * rng.next_uniform();

        const double log_ratio = -20.0 + 40.0 * rng.next_uniform();
        const double advantage = -50.0 + 100.0 * rng.next_uniform();
        const double pi_old = std::exp(-18.0 * rng.next_uniform());
        const TokenStep step = make_token_step(log_ratio, advantage, pi_old);
        const TokenStep at_one = make_token_step(0.0, advantage, pi_old);

        const double gates[3] = {maspo_gate(step, params), sapo_gate(step, params, false),
                                 sapo_gate(step, params, true)};
        for (double g : gates) {
            if (!(g > 0.0 && g <= 1.0)) f.fail("gate left (0, 1]");
        }
        if (maspo_gate(at_one, params) != 1.0) f.fail("maspo gate != 1 at ratio 1");
        if (sapo_gate(at_one, params, false) != 1.0) f.fail("sapo gate != 1 at ratio 1");
        if (sapo_gate(at_one, params, true) != 1.0) f.fail("unilateral sapo gate != 1 at ratio 1");

        const double side = (advantage > 0 ? 1.0 : advantage < 0 ? -1.0 : 0.0) * (step.ratio - 1.0);
        if (side <= 0.0) {
            if (maspo_gate(step, params) != 1.0) f.fail("maspo gate attenuates a stable quadrant");
            if (sapo_gate(step, params, true) != 1.0) {
                f.fail("unilateral sapo gate attenuates a stable quadrant");
            }
        }
    }
    return CheckResult{"gate identity, bounds, and unilateral property (1e5 draws)", !f.failed(),
                       0.0, f.text()};
}

// 3. Mass-adaptivity and risk-asymmetry monotonicity on a 50x50x50 grid.
inline CheckResult check_gate_monotonicity() {
    detail::Failure f;
    const GateParams params;
    constexpr int kGrid = 50;
    auto ratio_above = [](int i) { return 1.0 + 2.0 * (i + 1) / kGrid; };
    auto ratio_below = [](int i) { return 0.02 + 0.96 * i / (kGrid - 1); };
    auto advantage_pos = [](int i) { return 0.05 + 5.0 * i / (kGrid - 1); };
    auto pi_level = [](int i) { return std::pow(10.0, -6.0 * i / (kGrid - 1)); };  // 1 down to 1e-6

    // Mass adaptivity: smaller pi_old never tightens the gate.
    for (int ri = 0; ri < kGrid; ++ri) {
        for (int ai = 0; ai < kGrid; ++ai) {
            const double rho = ratio_above(ri);
            const double adv = advantage_pos(ai);
            double prev = -1.0;
            for (int pi = 0; pi < kGrid; ++pi) {
                const TokenStep step{rho, adv, pi_level(pi), std::log(rho)};
                const double g = maspo_gate(step, params);
                if (g < prev - 1e-15) f.fail("maspo gate decreased as pi_old decreased");
                prev = g;
            }
        }
    }
    // Risk asymmetry, positive branch: larger advantage never tightens.
    for (int ri = 0; ri < kGrid; ++ri) {
        for (int pi = 0; pi < kGrid; ++pi) {
            const double rho = ratio_above(ri);
            double prev = -1.0;
            for (int ai = 0; ai < kGrid; ++ai) {
                const TokenStep step{rho, advantage_pos(ai), pi_level(pi), std::log(rho)};
                const double g = maspo_gate(step, params);
                if (g < prev - 1e-15) f.fail("maspo gate decreased in a growing positive advantage");
                prev = g;
            }
        }
    }
    // Risk asymmetry, negative branch: larger |advantage| never loosens.
    for (int ri = 0; ri < kGrid; ++ri) {
        for (int pi = 0; pi < kGrid; ++pi) {
            const double rho = ratio_below(ri);
            double prev = 2.0;
            for (int ai = 0; ai < kGrid; ++ai) {
                const TokenStep step{rho, -advantage_pos(ai), pi_level(pi), std::log(rho)};
                const double g = maspo_gate(step, params);
                if (g > prev + 1e-15) {
                    f.fail("maspo gate grew as the negative advantage grew in magnitude");
                }
                prev = g;
            }
        }
    }
    return CheckResult{"mass-adaptivity and risk-asymmetry monotonicity (50^3 grid)", !f.failed(),
                       0.0, f.text()};
}

// 4. Stability clipping of the gate widths on adversarial inputs.
inline CheckResult check_sigma_stability() {
    detail::Failure f;
    RandomStream rng(77);
    for (int i = 0; i < 2000; ++i) {
        GateParams params;
        params.sigma_base = 0.1 + 1.9 * rng.next_uniform();
        params.alpha = rng.next_uniform();
        params.beta_low = 0.5 * rng.next_uniform();
        params.beta_high = 0.5 * rng.next_uniform();
        params.sigma_cap = std::max(params.sigma_base, 10.0);
        for (double pi_old : {1e-12, 1e-6, 0.5, 1.0}) {
            for (double mag : {1e-9, 0.5, 1.0, 1e3, 1e6}) {
                const double sp = sigma_pos(pi_old, mag, params);
                const double sn = sigma_neg(pi_old, -mag, params);
                const double hi = params.sigma_cap * params.risk_cap;
                const double lo = params.sigma_base * params.risk_floor;
                if (!(sp <= hi && sp >= lo && sp > 0.0)) f.fail("sigma_pos escaped its bounds");
                if (!(sn <= hi && sn >= lo && sn > 0.0)) f.fail("sigma_neg escaped its bounds");
            }
        }
    }
    // Exact binding values with the default configuration.
    const GateParams params;
    if (std::abs(sigma_pos(1e-4, 1e-12, GateParams{.alpha = 0.5}) - 10.0) > 1e-12) {
        f.fail("sigma cap failed to bind at pi_old = 1e-4, alpha = 0.5");
    }
    if (std::abs(sigma_neg(1.0, -1000.0, params) - 0.1) > 1e-12) {
        f.fail("risk floor failed to bind at advantage -1000");
    }
    if (std::abs(sigma_pos(1e-12, 1e6, params) - 100.0) > 1e-10) {
        f.fail("sigma_pos != cap*risk_cap on the adversarial corner");
    }
    return CheckResult{"gate width stability clipping on adversarial inputs", !f.failed(), 0.0,
                       f.text()};
}

// 5. Analytic mini-batch gradients match central finite differences of the
//    frozen-gate surrogate for every method.
inline CheckResult check_gradient_correctness() {
    detail::Failure f;
    RandomStream rng(4242);
    const GateMethod methods[] = {GateMethod::grpo,          GateMethod::clip_higher,
                                  GateMethod::dac,           GateMethod::sapo,
                                  GateMethod::sapo_unilateral, GateMethod::maspo};
    for (GateMethod method : methods) {
        for (int instance = 0; instance < 20; ++instance) {
            const int seq_len = 2 + static_cast<int>(instance % 2);
            TabularPolicy sampler(1, seq_len, 4, 0.0);
            for (double& v : sampler.params()) v = -1.0 + 2.0 * rng.next_uniform();

            // Synthetic mixed-reward batch sampled from the unperturbed policy.
            CollectedBatch batch;
            batch.policy_version = 0;
            Group group{0, {}, false};
            RandomStream sample_rng = rng.split();
            const int rewards[4] = {1, 1, -1, -1};
            for (int i = 0; i < 4; ++i) {
                Rollout rollout;
                rollout.query = 0;
                rollout.tokens = sampler.sample(0, sample_rng);
                rollout.logprobs_old = sampler.log_prob(0, rollout.tokens).per_token;
                rollout.reward = rewards[i];
                rollout.advantage = rewards[i] > 0 ? 1.0 : -1.0;
                group.rollouts.push_back(std::move(rollout));
            }
            batch.groups.push_back(std::move(group));
            const std::vector<TokenDatum> tokens = flatten_batch(batch);

            TabularPolicy current = sampler;
            for (double& v : current.params()) v += -0.5 + 1.0 * rng.next_uniform();

            TrainConfig cfg;
            cfg.method = method;
            cfg.entropy_coeff = instance % 3 == 0 ? 0.05 : 0.0;
            cfg.adv_reweight_alpha = instance % 4 == 0 ? 0.1 : 0.0;

            const MinibatchEval eval = evaluate_minibatch(current, tokens, cfg);
            auto objective = [&]() {
                return frozen_minibatch_objective(current, tokens, eval.frozen, cfg);
            };
            for (double step : {1e-5, 1e-6}) {
                const std::vector<double> fd = finite_diff_grad(current, objective, step);
                const double gap = detail::relative_gap(eval.gradient, fd);
                if (!(gap < 1e-6)) {
                    f.fail("gradient mismatch for " + std::string(to_string(method)) +
                           " (relative error " + format_double(gap) + ")");
                }
            }
        }
    }
    return CheckResult{"analytic gradients match finite differences (all methods)", !f.failed(),
                       0.0, f.text()};
}

// 6. Hard-clip gradient coefficients vanish exactly in the dead zones and
//    nowhere else.
inline CheckResult check_hard_clip_zero_regions() {
    detail::Failure f;
    const GateParams params{.eps_high = 0.265};
    const GateMethod methods[] = {GateMethod::grpo, GateMethod::clip_higher, GateMethod::dac};
    for (GateMethod method : methods) {
        for (double pi_old : {0.05, 0.3, 1.0}) {
            const TokenStep probe{1.0, 1.0, pi_old, 0.0};
            const ClipBounds bounds = clip_bounds_for(method, probe, params);
            std::vector<double> ratios;
            for (int i = 0; i <= 400; ++i) ratios.push_back(0.01 + (3.0 - 0.01) * i / 400.0);
            for (double eps : {1e-9, 1e-12}) {
                ratios.push_back(bounds.lower - eps);
                ratios.push_back(bounds.lower + eps);
                ratios.push_back(bounds.upper - eps);
                ratios.push_back(bounds.upper + eps);
            }
            ratios.push_back(bounds.lower);
            ratios.push_back(bounds.upper);
            for (double rho : ratios) {
                if (!(rho > 0.0)) continue;
                for (double adv : {-2.0, -0.5, 0.5, 2.0}) {
                    const TokenStep step{rho, adv, pi_old, std::log(rho)};
                    const TokenSurrogate s = token_surrogate(method, step, params);
                    const bool dead = (adv > 0.0 && rho > bounds.upper) ||
                                      (adv < 0.0 && rho < bounds.lower);
                    if (dead && s.grad_coefficient != 0.0) {
                        f.fail("nonzero coefficient inside a clipped region");
                    }
                    if (!dead && s.grad_coefficient != rho * adv) {
                        f.fail("live coefficient differs from ratio*advantage");
                    }
                }
            }
        }
    }
    return CheckResult{"hard-clip zero-gradient regions are exact", !f.failed(), 0.0, f.text()};
}

// 7. Enumeration agrees with 100k sampled rollouts and its own internal
//    reward/probability identity.
inline CheckResult check_enumeration_consistency() {
    detail::Failure f;
    RandomStream rng(909);
    for (const TaskSpec& task : {detail::bench_copy_task(), detail::bench_modsum_task()}) {
        TabularPolicy policy(task.num_queries, task.seq_len, task.vocab_size, 0.0);
        for (double& v : policy.params()) v = -1.0 + 2.0 * rng.next_uniform();
        const int query = 1;
        const EnumerationReport report = exact_expected_reward(policy, task, query);
        if (std::abs(report.expected_reward - (2.0 * report.success_probability - 1.0)) > 1e-12) {
            f.fail("expected_reward != 2*success_probability - 1");
        }
        constexpr int kSamples = 100000;
        double total = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            total += verify(task, query, policy.sample(query, rng));
        }
        const double empirical = total / kSamples;
        const double se = std::sqrt(std::max(1.0 - report.expected_reward * report.expected_reward,
                                             1e-12) /
                                    kSamples);
        if (std::abs(empirical - report.expected_reward) > 4.0 * se) {
            f.fail("empirical mean reward beyond 4 standard errors of the exact value on " +
                   std::string(to_string(task.kind)));
        }
    }
    return CheckResult{"enumeration consistent with 100k-sample estimate", !f.failed(), 0.0,
                       f.text()};
}

// 8. Both the soft-gate and hard-clip baselines learn the copy task from the
//    uniform policy within the step budget.
inline CheckResult check_training_improvement() {
    detail::Failure f;
    const TaskSpec task = detail::bench_copy_task();
    {
        const TrainConfig cfg = detail::bench_train_config(GateMethod::maspo, 7);
        const TrainerState probe = make_initial_state(task, cfg);
        const double initial = mean_exact_expected_reward(probe.policy, task).expected_reward;
        if (std::abs(initial - (-0.96875)) > 1e-12) {
            f.fail("uniform-policy expected reward != -0.96875");
        }
    }
    for (GateMethod method : {GateMethod::maspo, GateMethod::grpo}) {
        const detail::RunSummary run =
            detail::run_in_memory(task, detail::bench_train_config(method, 7));
        if (!(run.final_success_probability >= 0.9)) {
            f.fail(std::string(to_string(method)) + " finished below 0.9 success probability (" +
                   format_double(run.final_success_probability) + ")");
        }
        if (!(run.seconds < 60.0)) {
            f.fail(std::string(to_string(method)) + " run exceeded 60 s");
        }
    }
    return CheckResult{"copy-task training reaches 0.9 success within 200 steps", !f.failed(), 0.0,
                       f.text()};
}

// 9. Across seeds on the modsum task, the soft gate retains at least as
//    much policy entropy as the hard clip without giving up final reward.
inline CheckResult check_qualitative_dynamics() {
    detail::Failure f;
    const TaskSpec task = detail::bench_modsum_task();
    constexpr int kSeeds = 5;
    int entropy_wins = 0;
    double maspo_reward = 0.0;
    double grpo_reward = 0.0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        TrainConfig maspo_cfg = detail::bench_train_config(GateMethod::maspo, seed);
        TrainConfig grpo_cfg = detail::bench_train_config(GateMethod::grpo, seed);
        const detail::RunSummary maspo_run = detail::run_in_memory(task, maspo_cfg);
        const detail::RunSummary grpo_run = detail::run_in_memory(task, grpo_cfg);
        if (maspo_run.mean_entropy_over_steps >= grpo_run.mean_entropy_over_steps) ++entropy_wins;
        maspo_reward += maspo_run.final_expected_reward / kSeeds;
        grpo_reward += grpo_run.final_expected_reward / kSeeds;
    }
    if (entropy_wins < kSeeds - 1) {
        f.fail("entropy sign test failed: " + std::to_string(entropy_wins) + "/" +
               std::to_string(kSeeds) + " seeds");
    }
    if (!(maspo_reward >= grpo_reward - 0.02)) {
        f.fail("final exact reward fell more than 0.02 below the hard-clip baseline (" +
               format_double(maspo_reward) + " vs " + format_double(grpo_reward) + ")");
    }
    return CheckResult{"soft gate keeps entropy >= hard clip at matched reward (5 seeds)",
                       !f.failed(), 0.0, f.text()};
}

// 10. Runs are byte-deterministic and the alpha sweep emits well-formed
//     metrics files.
inline CheckResult check_determinism_and_sweep(const std::filesystem::path& scratch) {
    detail::Failure f;
    ExperimentConfig cfg;
    cfg.task = detail::bench_modsum_task();
    cfg.train = detail::bench_train_config(GateMethod::maspo, 11);
    cfg.train.total_steps = 12;
    cfg.oracle_every = 5;

    cfg.output_dir = scratch / "det_a";
    run_experiment(cfg);
    cfg.output_dir = scratch / "det_b";
    run_experiment(cfg);
    const std::string a = detail::read_file(metrics_path(scratch / "det_a"));
    const std::string b = detail::read_file(metrics_path(scratch / "det_b"));
    if (a.empty() || a != b) f.fail("repeated runs produced different metrics bytes");

    cfg.output_dir.clear();
    const std::vector<double> alphas{0.1, 0.3, 0.5, 0.8};
    run_sweep(cfg, "alpha", alphas, scratch / "sweep");
    if (!std::filesystem::exists(scratch / "sweep" / "index.csv")) f.fail("sweep wrote no index");
    for (double alpha : alphas) {
        const auto file = scratch / "sweep" / ("alpha_" + format_double(alpha)) / "metrics.csv";
        const std::string text = detail::read_file(file);
        if (text.empty()) {
            f.fail("missing sweep metrics for alpha " + format_double(alpha));
            continue;
        }
        std::istringstream lines(text);
        std::string line;
        std::getline(lines, line);
        if (line != metrics_csv_header()) f.fail("sweep metrics header mismatch");
        int rows = 0;
        while (std::getline(lines, line)) {
            if (!line.empty()) ++rows;
        }
        if (rows != cfg.train.total_steps) f.fail("sweep metrics row count mismatch");
    }
    return CheckResult{"byte-identical reruns and well-formed alpha sweep", !f.failed(), 0.0,
                       f.text()};
}

inline std::vector<CheckResult> run_all(const std::filesystem::path& scratch) {
    std::filesystem::create_directories(scratch);
    struct TimedCheck {
        std::function<CheckResult()> run;
        double budget_seconds;  // 0 = unbounded
    };
    std::vector<TimedCheck> checks = {
        {[] { return check_advantage_closed_form(); }, 1.0},
        {[] { return check_gate_identity_and_bounds(); }, 5.0},
        {[] { return check_gate_monotonicity(); }, 10.0},
        {[] { return check_sigma_stability(); }, 0.0},
        {[] { return check_gradient_correctness(); }, 30.0},
        {[] { return check_hard_clip_zero_regions(); }, 0.0},
        {[] { return check_enumeration_consistency(); }, 0.0},
        {[] { return check_training_improvement(); }, 0.0},
        {[] { return check_qualitative_dynamics(); }, 0.0},
        {[&] { return check_determinism_and_sweep(scratch); }, 0.0},
    };
    std::vector<CheckResult> results;
    for (auto& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult result = check.run();
        result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (check.budget_seconds > 0.0 && result.seconds > check.budget_seconds) {
            result.passed = false;
            if (result.detail.empty()) {
                result.detail = "exceeded the " + format_double(check.budget_seconds) +
                                " s runtime budget";
            }
        }
        results.push_back(std::move(result));
    }
    return results;
}

// Prints one pass/fail line per check; returns true when everything passed.
inline bool report(const std::vector<CheckResult>& results, std::ostream& out) {
    bool all_passed = true;
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (" << format_double(r.seconds)
            << " s)";
        if (!r.passed && !r.detail.empty()) out << " -- " << r.detail;
        out << '\n';
        all_passed = all_passed && r.passed;
    }
    out << (all_passed ? "all checks passed" : "some checks FAILED") << '\n';
    return all_passed;
}

}  // namespace rlvr::verification
