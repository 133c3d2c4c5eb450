#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rlvr {

// Hyperparameters shared by every gradient-weighting scheme. Defaults are
// the recommended baseline configuration.
struct GateParams {
    double sigma_base = 1.0;  // baseline gate width
    double alpha = 0.3;       // mass-adaptation exponent, in [0, 1]
    double beta_low = 0.03;   // risk coefficient, negative-advantage branch
    double beta_high = 0.03;  // risk coefficient, positive-advantage branch
    double eps_low = 0.2;     // hard-clip half-widths
    double eps_high = 0.2;
    double tau_pos = 1.0;     // sigmoid-gate temperatures by advantage sign
    double tau_neg = 1.05;
    double sigma_cap = 10.0;  // stability bounds on the gate width
    double risk_floor = 0.1;
    double risk_cap = 10.0;

    void validate() const {
        if (!(sigma_base > 0.0)) throw std::invalid_argument("GateParams.sigma_base must be > 0");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("GateParams.alpha must be in [0, 1]");
        if (!(beta_low >= 0.0)) throw std::invalid_argument("GateParams.beta_low must be >= 0");
        if (!(beta_high >= 0.0)) throw std::invalid_argument("GateParams.beta_high must be >= 0");
        if (!(eps_low >= 0.0)) throw std::invalid_argument("GateParams.eps_low must be >= 0");
        if (!(eps_high >= 0.0)) throw std::invalid_argument("GateParams.eps_high must be >= 0");
        if (!(tau_pos > 0.0)) throw std::invalid_argument("GateParams.tau_pos must be > 0");
        if (!(tau_neg > 0.0)) throw std::invalid_argument("GateParams.tau_neg must be > 0");
        if (!(sigma_cap >= sigma_base)) throw std::invalid_argument("GateParams.sigma_cap must be >= sigma_base");
        if (!(risk_floor < 1.0 && risk_floor > 0.0)) throw std::invalid_argument("GateParams.risk_floor must be in (0, 1)");
        if (!(risk_cap > 1.0)) throw std::invalid_argument("GateParams.risk_cap must be > 1");
    }
};

enum class GateMethod { grpo, clip_higher, dac, sapo, sapo_unilateral, maspo };

inline std::string_view to_string(GateMethod method) {
    switch (method) {
        case GateMethod::grpo: return "grpo";
        case GateMethod::clip_higher: return "clip_higher";
        case GateMethod::dac: return "dac";
        case GateMethod::sapo: return "sapo";
        case GateMethod::sapo_unilateral: return "sapo_unilateral";
        case GateMethod::maspo: return "maspo";
    }
    throw std::invalid_argument("unknown gate method tag");
}

inline GateMethod parse_gate_method(std::string_view name) {
    if (name == "grpo") return GateMethod::grpo;
    if (name == "clip_higher") return GateMethod::clip_higher;
    if (name == "dac") return GateMethod::dac;
    if (name == "sapo") return GateMethod::sapo;
    if (name == "sapo_unilateral") return GateMethod::sapo_unilateral;
    if (name == "maspo") return GateMethod::maspo;
    throw std::invalid_argument("unknown gate method: " + std::string(name));
}

// Soft-gate family (weight in (0,1], stop-gradient) vs. hard-clip family.
inline bool is_soft_gate(GateMethod method) {
    return method == GateMethod::maspo || method == GateMethod::sapo ||
           method == GateMethod::sapo_unilateral;
}

// One token's inputs to the weighting functions.
struct TokenStep {
    double ratio;      // current over old probability of the sampled token
    double advantage;
    double pi_old;     // old probability, in (0, 1]
    double log_ratio;  // ln(ratio), carried to avoid overflow
};

// Log-ratios are clamped here before exponentiation; degenerate policies
// can otherwise push exp() past the double range.
inline constexpr double kLogRatioClamp = 20.0;

inline TokenStep make_token_step(double log_ratio, double advantage, double pi_old) {
    if (!(pi_old > 0.0 && pi_old <= 1.0)) {
        throw std::domain_error("TokenStep.pi_old must be in (0, 1]");
    }
    const double clamped = std::clamp(log_ratio, -kLogRatioClamp, kLogRatioClamp);
    return TokenStep{std::exp(clamped), advantage, pi_old, clamped};
}

// min(sigma_base / pi_old^alpha, sigma_cap): wider widths for rare tokens,
// capped for stability.
inline double mass_scale(double pi_old, const GateParams& params) {
    if (!(pi_old > 0.0 && pi_old <= 1.0)) {
        throw std::domain_error("mass_scale: pi_old must be in (0, 1]");
    }
    return std::min(params.sigma_base / std::pow(pi_old, params.alpha), params.sigma_cap);
}

// Gate width for positive advantages: the risk factor expands the trust
// region linearly in the advantage.
inline double sigma_pos(double pi_old, double advantage, const GateParams& params) {
    const double risk = std::clamp(1.0 + params.beta_high * advantage,
                                   params.risk_floor, params.risk_cap);
    return mass_scale(pi_old, params) * risk;
}

// Gate width for negative advantages: the inverse risk factor shrinks the
// trust region as the advantage grows more negative.
inline double sigma_neg(double pi_old, double advantage, const GateParams& params) {
    const double risk = std::clamp(1.0 / (1.0 - params.beta_low * advantage),
                                   params.risk_floor, params.risk_cap);
    return mass_scale(pi_old, params) * risk;
}

// Smallest positive gate value; exp() underflows to 0 for extreme ratios
// and the gate must stay strictly positive.
inline constexpr double kGateFloor = std::numeric_limits<double>::min();

// Gaussian confidence gate. Attenuates only the two destabilizing
// quadrants (overshooting winners, collapsing losers); everywhere else the
// token passes at full weight. The returned value is treated as a constant
// by gradient computation.
inline double maspo_gate(const TokenStep& step, const GateParams& params) {
    double sigma;
    if (step.advantage > 0.0 && step.ratio > 1.0) {
        sigma = sigma_pos(step.pi_old, step.advantage, params);
    } else if (step.advantage < 0.0 && step.ratio < 1.0) {
        sigma = sigma_neg(step.pi_old, step.advantage, params);
    } else {
        return 1.0;
    }
    const double d = step.ratio - 1.0;
    return std::max(std::exp(-d * d / (2.0 * sigma * sigma)), kGateFloor);
}

// Sigmoid-derivative gate 4p(1-p) with p = sigmoid(tau (ratio - 1)).
// Bilateral by default; the unilateral variant passes tokens outside the
// destabilizing quadrants at full weight.
inline double sapo_gate(const TokenStep& step, const GateParams& params, bool unilateral) {
    if (unilateral && !((step.advantage > 0.0 && step.ratio > 1.0) ||
                        (step.advantage < 0.0 && step.ratio < 1.0))) {
        return 1.0;
    }
    const double tau = step.advantage > 0.0 ? params.tau_pos : params.tau_neg;
    const double x = tau * (step.ratio - 1.0);
    // 4p(1-p) == 2 / (1 + cosh(x)); the asymptotic form avoids overflow.
    const double ax = std::abs(x);
    const double gate = ax > 700.0 ? 4.0 * std::exp(-ax)
                                   : 4.0 / (2.0 + std::exp(ax) + std::exp(-ax));
    return std::max(gate, kGateFloor);
}

struct ClipBounds {
    double lower;
    double upper;
};

// Probability-adaptive clip bounds: rare tokens receive a wider interval.
// Always satisfies lower <= 1 <= upper.
inline ClipBounds dac_bounds(double pi_old, const GateParams& params) {
    if (!(pi_old > 0.0 && pi_old <= 1.0)) {
        throw std::domain_error("dac_bounds: pi_old must be in (0, 1]");
    }
    const double lower = 0.5 + 0.5 * std::sqrt(std::max(1.0 - 4.0 * params.eps_low / pi_old, 0.0));
    const double upper = 0.5 + 0.5 * std::sqrt(1.0 + 4.0 * params.eps_high / pi_old);
    return ClipBounds{lower, upper};
}

inline ClipBounds clip_bounds_for(GateMethod method, const TokenStep& step,
                                  const GateParams& params) {
    switch (method) {
        case GateMethod::grpo:
            return ClipBounds{1.0 - params.eps_low, 1.0 + params.eps_low};
        case GateMethod::clip_higher:
            return ClipBounds{1.0 - params.eps_low, 1.0 + params.eps_high};
        case GateMethod::dac:
            return dac_bounds(step.pi_old, params);
        default:
            throw std::invalid_argument("clip_bounds_for: not a hard-clip method");
    }
}

// Hard-clip dead zone: the min() in the clipped surrogate selects the
// constant branch exactly when the ratio overshoots the bound on the side
// the advantage is pushing toward.
inline bool clip_gradient_dead(const TokenStep& step, const ClipBounds& bounds) {
    return (step.advantage > 0.0 && step.ratio > bounds.upper) ||
           (step.advantage < 0.0 && step.ratio < bounds.lower);
}

// Gradient weighting factor F of the generalized surrogate: the soft gate
// for gate methods, the {0,1} trust-region indicator for clip methods.
inline double gate_weight(GateMethod method, const TokenStep& step, const GateParams& params) {
    switch (method) {
        case GateMethod::maspo:
            return maspo_gate(step, params);
        case GateMethod::sapo:
            return sapo_gate(step, params, false);
        case GateMethod::sapo_unilateral:
            return sapo_gate(step, params, true);
        default:
            return clip_gradient_dead(step, clip_bounds_for(method, step, params)) ? 0.0 : 1.0;
    }
}

struct TokenSurrogate {
    double objective;         // per-token surrogate value
    double grad_coefficient;  // scalar multiplying grad log pi in the gradient
};

// Per-token surrogate and its analytic gradient coefficient. Gate methods
// use F * ratio * advantage with F held constant; clip methods use the
// clipped-minimum objective whose gradient vanishes in the dead zone.
inline TokenSurrogate token_surrogate(GateMethod method, const TokenStep& step,
                                      const GateParams& params) {
    const double rho_adv = step.ratio * step.advantage;
    if (is_soft_gate(method)) {
        const double f = gate_weight(method, step, params);
        return TokenSurrogate{f * rho_adv, f * rho_adv};
    }
    const ClipBounds bounds = clip_bounds_for(method, step, params);
    const double clipped = std::clamp(step.ratio, bounds.lower, bounds.upper) * step.advantage;
    const double objective = std::min(rho_adv, clipped);
    return TokenSurrogate{objective, clip_gradient_dead(step, bounds) ? 0.0 : rho_adv};
}

}  // namespace rlvr
