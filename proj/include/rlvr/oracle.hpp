#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlvr/errors.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/tasks.hpp"

namespace rlvr {

struct EnumerationReport {
    double expected_reward;
    double success_probability;
    std::int64_t sequence_count;
};

// Exact expected reward by exhaustive enumeration. Sequences are visited in
// lexicographic order with a running log-probability accumulation, so the
// floating-point result is reproducible.
inline EnumerationReport exact_expected_reward(const TabularPolicy& policy, const TaskSpec& task,
                                               int query) {
    task.validate();
    const std::int64_t count = task.sequence_space_size();
    if (count > kEnumerationCapacity) {
        throw capacity_error("exact_expected_reward: sequence space exceeds " +
                             std::to_string(kEnumerationCapacity) + " sequences");
    }
    std::vector<int> tokens(task.seq_len, 0);
    double expected = 0.0;
    double success = 0.0;
    const int vocab = task.vocab_size;
    auto visit = [&](auto&& self, int t, double logp_acc) -> void {
        if (t == task.seq_len) {
            const double prob = std::exp(logp_acc);
            const int reward = verify(task, query, tokens);
            expected += prob * reward;
            if (reward > 0) success += prob;
            return;
        }
        const int prev = t == 0 ? vocab : tokens[t - 1];
        const auto row = policy.softmax_row(query, t, prev);
        for (int k = 0; k < vocab; ++k) {
            tokens[t] = k;
            self(self, t + 1, logp_acc + row.logps[k]);
        }
    };
    visit(visit, 0, 0.0);
    return EnumerationReport{expected, success, count};
}

// Mean exact expected reward over every query of the task.
inline EnumerationReport mean_exact_expected_reward(const TabularPolicy& policy,
                                                    const TaskSpec& task) {
    EnumerationReport mean{0.0, 0.0, 0};
    for (int q = 0; q < task.num_queries; ++q) {
        const auto report = exact_expected_reward(policy, task, q);
        mean.expected_reward += report.expected_reward;
        mean.success_probability += report.success_probability;
        mean.sequence_count = report.sequence_count;
    }
    mean.expected_reward /= task.num_queries;
    mean.success_probability /= task.num_queries;
    return mean;
}

// Central finite differences of a deterministic scalar function of the
// policy parameters. Meant for small instances (<= a few hundred
// parameters); this is the independent check the analytic gradients are
// validated against.
template <class Eval>
std::vector<double> finite_diff_grad(TabularPolicy& policy, Eval&& eval, double step) {
    if (!(step >= 1e-7 && step <= 1e-3)) {
        throw std::invalid_argument("finite_diff_grad: step must be in [1e-7, 1e-3]");
    }
    auto params = policy.params();
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + step;
        const double up = eval();
        params[i] = saved - step;
        const double down = eval();
        params[i] = saved;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

}  // namespace rlvr
