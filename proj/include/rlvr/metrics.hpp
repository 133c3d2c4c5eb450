#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rlvr {

// One training step's observability row. Column names below are the stable
// contract for the metrics file.
struct MetricsRecord {
    std::int64_t step = 0;
    double mean_reward = 0.0;
    double success_rate = 0.0;
    double mean_entropy = 0.0;  // nats
    double mean_ratio = 0.0;
    double max_abs_log_ratio = 0.0;
    double mean_gate = 0.0;
    double zero_grad_fraction = 0.0;
    double degenerate_group_fraction = 0.0;
    double grad_norm = 0.0;
    std::optional<double> exact_expected_reward;
};

inline constexpr std::array<std::string_view, 11> kMetricsColumns = {
    "step",
    "mean_reward",
    "success_rate",
    "mean_entropy",
    "mean_ratio",
    "max_abs_log_ratio",
    "mean_gate",
    "zero_grad_fraction",
    "degenerate_group_fraction",
    "grad_norm",
    "exact_expected_reward",
};

inline std::string metrics_csv_header() {
    std::string header;
    for (std::size_t i = 0; i < kMetricsColumns.size(); ++i) {
        if (i > 0) header += ',';
        header += kMetricsColumns[i];
    }
    return header;
}

// Shortest round-trip decimal form; keeps metrics files byte-reproducible.
inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

inline std::string to_csv_row(const MetricsRecord& r) {
    std::string row = std::to_string(r.step);
    for (double v : {r.mean_reward, r.success_rate, r.mean_entropy, r.mean_ratio,
                     r.max_abs_log_ratio, r.mean_gate, r.zero_grad_fraction,
                     r.degenerate_group_fraction, r.grad_norm}) {
        row += ',';
        row += format_double(v);
    }
    row += ',';
    if (r.exact_expected_reward) row += format_double(*r.exact_expected_reward);
    return row;
}

// Raw per-step data summarize_step aggregates. Every field of the record is
// a symmetric aggregation, so permuting these vectors changes nothing.
struct RolloutStat {
    int reward;
    double entropy;
};

struct TokenStat {
    double ratio;
    double abs_log_ratio;
    double gate;            // weighting factor F; {0,1} for hard-clip methods
    bool zero_coefficient;  // gradient coefficient was exactly zero
};

struct StepData {
    std::int64_t step = 0;
    std::vector<RolloutStat> rollouts;
    std::vector<TokenStat> token_evals;  // one entry per (token, mini-batch) evaluation
    std::vector<char> group_degenerate;  // one flag per group
    double grad_norm = 0.0;
    std::optional<double> exact_expected_reward;
};

inline MetricsRecord summarize_step(const StepData& data) {
    MetricsRecord rec;
    rec.step = data.step;
    rec.grad_norm = data.grad_norm;
    rec.exact_expected_reward = data.exact_expected_reward;

    if (!data.rollouts.empty()) {
        double reward_sum = 0.0;
        double entropy_sum = 0.0;
        double successes = 0.0;
        for (const auto& r : data.rollouts) {
            reward_sum += r.reward;
            entropy_sum += r.entropy;
            if (r.reward > 0) successes += 1.0;
        }
        const double n = static_cast<double>(data.rollouts.size());
        rec.mean_reward = reward_sum / n;
        rec.success_rate = successes / n;
        rec.mean_entropy = entropy_sum / n;
    }

    if (!data.token_evals.empty()) {
        double ratio_sum = 0.0;
        double gate_sum = 0.0;
        double zeros = 0.0;
        double max_alr = 0.0;
        for (const auto& t : data.token_evals) {
            ratio_sum += t.ratio;
            gate_sum += t.gate;
            if (t.zero_coefficient) zeros += 1.0;
            if (t.abs_log_ratio > max_alr) max_alr = t.abs_log_ratio;
        }
        const double n = static_cast<double>(data.token_evals.size());
        rec.mean_ratio = ratio_sum / n;
        rec.mean_gate = gate_sum / n;
        rec.zero_grad_fraction = zeros / n;
        rec.max_abs_log_ratio = max_alr;
    } else {
        rec.mean_ratio = 1.0;
        rec.mean_gate = 1.0;
    }

    if (!data.group_degenerate.empty()) {
        double degenerate = 0.0;
        for (char flag : data.group_degenerate) {
            if (flag) degenerate += 1.0;
        }
        rec.degenerate_group_fraction = degenerate / static_cast<double>(data.group_degenerate.size());
    }
    return rec;
}

}  // namespace rlvr
