#pragma once

// Exp4.MP: multiple-play bandit with expert advice. Keeps one weight per
// underlying expert, mixes their advice into arm weights, caps, samples
// m arms with dependent rounding and applies an upper-confidence
// exponential update.

#include <cstddef>
#include <span>
#include <vector>

#include "mabmp/core.hpp"
#include "mabmp/feedback.hpp"

namespace mabmp {

struct Exp4MPParams {
    double eta = 0.0;
    double gamma = 0.0;
    double c = 0.0;
    std::size_t arms = 0;    // K
    std::size_t m = 0;
    std::size_t horizon = 0; // T
    std::size_t experts = 0; // N_r
    /// False when T is below the horizon the high-probability bound needs.
    bool horizon_condition_met = true;

    /// c / sqrt(K T)
    double confidence_scale() const;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// Parameters for uniform priors w_i(1) = 1.
Exp4MPParams params_uniform(std::size_t arms, std::size_t m, std::size_t horizon, double delta,
                            std::size_t experts);

/// Vanilla K-armed configuration: N_r = K indicator experts.
Exp4MPParams vanilla_params(std::size_t arms, std::size_t m, std::size_t horizon, double delta);

/// High-probability regret bound against the best actual expert under
/// params_uniform.
double bound_uniform(std::size_t arms, std::size_t m, std::size_t horizon, double delta,
                     std::size_t experts);

struct ExpertStatistics {
    std::vector<double> gain;       ///< y_hat
    std::vector<double> confidence; ///< u_hat
};

/// y_hat_i = sum_{j not capped} zeta^i_j x_hat_j,
/// u_hat_i = sum_{j not capped} zeta^i_j / p_j.
ExpertStatistics expert_statistics(const AdviceMatrix& advice, std::span<const double> x_hat,
                                   std::span<const double> marginals,
                                   std::span<const std::size_t> capped);

class Exp4MP {
public:
    /// Uniform priors w_i(1) = 1.
    explicit Exp4MP(const Exp4MPParams& params);
    Exp4MP(const Exp4MPParams& params, std::span<const double> priors);

    const Exp4MPParams& params() const { return params_; }

    /// 1-based index of the next round to play.
    std::size_t round() const { return round_; }

    /// Expert weights. Their common scale may be reset between rounds; only
    /// ratios carry meaning after the first update.
    std::vector<double> weights() const;

    /// v_j = sum_i w_i zeta^i_j / sum_l w_l
    std::vector<double> arm_weights(const AdviceMatrix& advice) const;

    /// Arm weights -> capping -> marginals -> dependent rounding.
    RoundOutcome select(const AdviceMatrix& advice, Rng& rng) const;

    /// w_i <- w_i exp(eta (y_hat_i + c/sqrt(KT) u_hat_i)). Returns false when
    /// some exponent exceeded 1, which the regret analysis rules out.
    bool update(std::span<const double> gain, std::span<const double> confidence);

    /// Estimates gains from feedback on the played arms and applies update().
    bool observe(const AdviceMatrix& advice, RoundOutcome& outcome, const FeedbackView& feedback);

    std::size_t bound_violations() const { return bound_violations_; }

private:
    void check_advice(const AdviceMatrix& advice) const;

    Exp4MPParams params_;
    std::vector<double> log_weights_;
    std::size_t round_ = 1;
    std::size_t bound_violations_ = 0;
};

} // namespace mabmp
