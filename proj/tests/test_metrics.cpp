#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "rlvr/metrics.hpp"
#include "rlvr/rng.hpp"

using namespace rlvr;
using Catch::Matchers::WithinAbs;

namespace {

StepData mixed_step_data(std::uint64_t seed) {
    RandomStream rng(seed);
    StepData data;
    data.step = 7;
    for (int i = 0; i < 24; ++i) {
        data.rollouts.push_back(RolloutStat{rng.next_uniform() < 0.4 ? 1 : -1,
                                            0.2 + rng.next_uniform()});
    }
    for (int i = 0; i < 96; ++i) {
        const double log_ratio = -0.4 + 0.8 * rng.next_uniform();
        data.token_evals.push_back(TokenStat{std::exp(log_ratio), std::abs(log_ratio),
                                             0.5 + 0.5 * rng.next_uniform(),
                                             rng.next_uniform() < 0.2});
    }
    data.group_degenerate = {0, 1, 0};
    data.grad_norm = 0.37;
    return data;
}

}  // namespace

TEST_CASE("summarize_step aggregates the contract fields", "[metrics]") {
    SECTION("all-correct batch") {
        StepData data;
        data.step = 1;
        for (int i = 0; i < 8; ++i) data.rollouts.push_back(RolloutStat{1, 1.0});
        data.group_degenerate = {1};
        const MetricsRecord rec = summarize_step(data);
        REQUIRE(rec.success_rate == 1.0);
        REQUIRE(rec.mean_reward == 1.0);
        REQUIRE(rec.degenerate_group_fraction == 1.0);
    }
    SECTION("ratio-1 gate evaluations report a unit mean gate") {
        StepData data;
        data.step = 1;
        for (int i = 0; i < 10; ++i) data.token_evals.push_back(TokenStat{1.0, 0.0, 1.0, false});
        const MetricsRecord rec = summarize_step(data);
        REQUIRE(rec.mean_gate == 1.0);
        REQUIRE(rec.mean_ratio == 1.0);
        REQUIRE(rec.max_abs_log_ratio == 0.0);
    }
    SECTION("mean reward is re-derivable by independent summation") {
        const StepData data = mixed_step_data(10);
        const MetricsRecord rec = summarize_step(data);
        double total = 0.0;
        for (const auto& r : data.rollouts) total += r.reward;
        REQUIRE_THAT(rec.mean_reward, WithinAbs(total / data.rollouts.size(), 1e-12));
        REQUIRE_THAT(rec.mean_reward, WithinAbs(2.0 * rec.success_rate - 1.0, 1e-9));
    }
}

TEST_CASE("summarize_step is permutation invariant", "[metrics][property]") {
    const StepData data = mixed_step_data(77);
    const MetricsRecord base = summarize_step(data);
    RandomStream rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        StepData shuffled = data;
        rng.shuffle(shuffled.rollouts);
        rng.shuffle(shuffled.token_evals);
        rng.shuffle(shuffled.group_degenerate);
        const MetricsRecord rec = summarize_step(shuffled);
        REQUIRE_THAT(rec.mean_reward, WithinAbs(base.mean_reward, 1e-12));
        REQUIRE_THAT(rec.success_rate, WithinAbs(base.success_rate, 1e-12));
        REQUIRE_THAT(rec.mean_entropy, WithinAbs(base.mean_entropy, 1e-12));
        REQUIRE_THAT(rec.mean_ratio, WithinAbs(base.mean_ratio, 1e-12));
        REQUIRE(rec.max_abs_log_ratio == base.max_abs_log_ratio);
        REQUIRE_THAT(rec.mean_gate, WithinAbs(base.mean_gate, 1e-12));
        REQUIRE_THAT(rec.zero_grad_fraction, WithinAbs(base.zero_grad_fraction, 1e-12));
        REQUIRE(rec.degenerate_group_fraction == base.degenerate_group_fraction);
    }
}

TEST_CASE("metrics rows follow the stable column contract", "[metrics]") {
    REQUIRE(metrics_csv_header() ==
            "step,mean_reward,success_rate,mean_entropy,mean_ratio,max_abs_log_ratio,"
            "mean_gate,zero_grad_fraction,degenerate_group_fraction,grad_norm,"
            "exact_expected_reward");

    MetricsRecord rec;
    rec.step = 12;
    rec.mean_reward = -0.5;
    rec.success_rate = 0.25;
    rec.mean_entropy = 1.25;
    rec.mean_ratio = 1.0;
    rec.mean_gate = 1.0;
    const std::string row = to_csv_row(rec);
    REQUIRE(row == "12,-0.5,0.25,1.25,1,0,1,0,0,0,");

    rec.exact_expected_reward = -0.96875;
    REQUIRE(to_csv_row(rec) == "12,-0.5,0.25,1.25,1,0,1,0,0,0,-0.96875");

    const std::size_t columns = std::count(row.begin(), row.end(), ',') + 1;
    REQUIRE(columns == kMetricsColumns.size());
}

TEST_CASE("format_double round-trips values exactly", "[metrics]") {
    RandomStream rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double v = (rng.next_uniform() - 0.5) * std::pow(10.0, 6.0 * rng.next_uniform() - 3.0);
        REQUIRE(std::stod(format_double(v)) == v);
    }
}
