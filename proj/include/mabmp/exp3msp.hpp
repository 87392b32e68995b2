#pragma once

// Exp3.MSP: tracks the best switching m-arm strategy with K normalized arm
// weights and a fixed-share style mixing step after each exponential update.

#include <cstddef>
#include <span>
#include <vector>

#include "mabmp/core.hpp"
#include "mabmp/feedback.hpp"

namespace mabmp {

struct Exp3MSPParams {
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double c = 0.0;
    std::size_t arms = 0;     // K
    std::size_t m = 0;
    std::size_t horizon = 0;  // T
    std::size_t segments = 1; // S
    bool horizon_condition_met = true;

    double confidence_scale() const;
    void validate() const;
};

/// Parameters tuned for a comparator with S segments; S = 1 falls back to the
/// vanilla Exp4.MP configuration with beta = 0.
Exp3MSPParams params_switching(std::size_t arms, std::size_t m, std::size_t horizon,
                               std::size_t segments, double delta);

/// High-probability regret bound against the best S-segment m-arm strategy.
/// For S = 1 this is the vanilla Exp4.MP bound.
double bound_switching(std::size_t arms, std::size_t m, std::size_t horizon,
                       std::size_t segments, double delta);

/// v_tilde_j = v_j exp(eta (x_hat_j + c / (p_j sqrt(KT)))) off the capped set,
/// v_j on it. Returned up to a common positive factor.
std::vector<double> boosted_weights(std::span<const double> weights, std::span<const double> x_hat,
                                    std::span<const double> marginals,
                                    std::span<const std::size_t> capped,
                                    const Exp3MSPParams& params);

/// v_j = ((1 - beta) vt_j + beta/(K-1) sum_{i != j} vt_i) / sum_l vt_l
std::vector<double> share_weights(std::span<const double> boosted, double beta);

class Exp3MSP {
public:
    explicit Exp3MSP(const Exp3MSPParams& params);

    const Exp3MSPParams& params() const { return params_; }
    std::size_t round() const { return round_; }
    const std::vector<double>& weights() const { return weights_; }

    RoundOutcome select(Rng& rng) const;

    /// Boost, then share. x_hat and marginals come from this round's select().
    void share_update(std::span<const double> x_hat, std::span<const double> marginals,
                      std::span<const std::size_t> capped);

    void observe(RoundOutcome& outcome, const FeedbackView& feedback);

private:
    Exp3MSPParams params_;
    std::vector<double> weights_;
    std::size_t round_ = 1;
};

} // namespace mabmp
