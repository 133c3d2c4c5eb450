#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rlvr {

// One query's binary rewards (+1 correct, -1 incorrect).
struct RewardGroup {
    std::vector<int> rewards;

    void validate() const {
        if (rewards.size() < 2) {
            throw std::domain_error("RewardGroup: group size must be >= 2");
        }
        for (int r : rewards) {
            if (r != 1 && r != -1) {
                throw std::domain_error("RewardGroup: rewards must be +1 or -1");
            }
        }
    }
};

// Group-standardized advantages; degenerate when all rewards agree, in
// which case every value is exactly zero.
struct AdvantageVector {
    std::vector<double> values;
    bool degenerate = false;
};

inline constexpr double kDegenerateStd = 1e-8;

// (r - mean) / std with population statistics (divide by G). The closed
// forms below are derived with population variance, so this choice makes
// them an exact oracle.
inline AdvantageVector group_advantages(const RewardGroup& group) {
    group.validate();
    const double n = static_cast<double>(group.rewards.size());
    double mean = 0.0;
    for (int r : group.rewards) mean += r;
    mean /= n;
    double var = 0.0;
    for (int r : group.rewards) var += (r - mean) * (r - mean);
    var /= n;
    const double sd = std::sqrt(var);

    AdvantageVector out;
    out.values.assign(group.rewards.size(), 0.0);
    if (sd < kDegenerateStd) {
        out.degenerate = true;
        return out;
    }
    for (std::size_t i = 0; i < group.rewards.size(); ++i) {
        out.values[i] = (group.rewards[i] - mean) / sd;
    }
    return out;
}

struct ClosedFormAdvantages {
    double positive;  // advantage of each correct rollout
    double negative;  // advantage of each incorrect rollout
};

// With x of n rollouts correct: A+ = sqrt((n-x)/x), A- = -sqrt(x/(n-x)).
// Degenerate splits (x = 0 or x = n) have no standardized form.
inline ClosedFormAdvantages closed_form_advantages(int n, int x) {
    if (x <= 0 || x >= n) {
        throw std::domain_error("closed_form_advantages: x must be in (0, n)");
    }
    const double xd = static_cast<double>(x);
    const double nd = static_cast<double>(n);
    return ClosedFormAdvantages{std::sqrt((nd - xd) / xd), -std::sqrt(xd / (nd - xd))};
}

// [alpha_a * pi_theta + (1 - alpha_a)] * advantage: shrinks the advantage
// of low-probability tokens, never grows the magnitude.
inline double reweight_advantage(double advantage, double pi_theta, double alpha_a) {
    if (!(alpha_a >= 0.0 && alpha_a <= 1.0)) {
        throw std::invalid_argument("reweight_advantage: alpha_a must be in [0, 1]");
    }
    if (!(pi_theta > 0.0 && pi_theta <= 1.0)) {
        throw std::domain_error("reweight_advantage: pi_theta must be in (0, 1]");
    }
    return (alpha_a * pi_theta + (1.0 - alpha_a)) * advantage;
}

}  // namespace rlvr
