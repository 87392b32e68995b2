#include "mabmp/exp3msp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mabmp/capping.hpp"
#include "mabmp/exp4mp.hpp"
#include "mabmp/sampling.hpp"

namespace mabmp {

double Exp3MSPParams::confidence_scale() const
{
    return c / std::sqrt(static_cast<double>(arms) * static_cast<double>(horizon));
}

void Exp3MSPParams::validate() const
{
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0,1]");
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be nonnegative");
    if (m == 0 || m >= arms) throw std::invalid_argument("need 1 <= m < K");
    if (horizon == 0) throw std::invalid_argument("T must be positive");
    if (segments == 0 || segments > horizon) throw std::invalid_argument("need 1 <= S <= T");
}

Exp3MSPParams params_switching(std::size_t arms, std::size_t m, std::size_t horizon,
                               std::size_t segments, double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
    if (segments == 0) throw std::invalid_argument("S must be at least 1");

    Exp3MSPParams p;
    p.arms = arms;
    p.m = m;
    p.horizon = horizon;
    p.segments = segments;

    if (segments == 1) {
        const Exp4MPParams vanilla = vanilla_params(arms, m, horizon, delta);
        p.eta = vanilla.eta;
        p.gamma = vanilla.gamma;
        p.c = vanilla.c;
        p.beta = 0.0;
        p.horizon_condition_met = vanilla.horizon_condition_met;
        p.validate();
        return p;
    }
    if (segments >= horizon) throw std::invalid_argument("need S < T when S > 1");
    if (m == 0 || m >= arms) throw std::invalid_argument("need 1 <= m < K");

    const double K = static_cast<double>(arms);
    const double md = static_cast<double>(m);
    const double T = static_cast<double>(horizon);
    const double S = static_cast<double>(segments);
    const double switch_log = std::log(std::numbers::e * K * (T - 1.0) / (S - 1.0));
    const double log_conf = switch_log - std::log(delta);

    p.beta = (S - 1.0) / (T - 1.0);
    p.c = std::sqrt(md * S * log_conf);
    p.gamma = std::min(0.5, std::sqrt(K * S * switch_log / (md * T)));
    p.eta = md * p.gamma / (2.0 * K);
    p.horizon_condition_met = md * S * log_conf / ((std::numbers::e - 2.0) * K) <= T;
    p.validate();
    return p;
}

double bound_switching(std::size_t arms, std::size_t m, std::size_t horizon,
                       std::size_t segments, double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0,1]");
    if (segments == 0) throw std::invalid_argument("S must be at least 1");
    if (segments == 1) {
        return bound_uniform(arms, m, horizon, delta, arms);
    }
    const double K = static_cast<double>(arms);
    const double md = static_cast<double>(m);
    const double T = static_cast<double>(horizon);
    const double S = static_cast<double>(segments);
    const double log_conf = std::log(std::numbers::e * K * (T - 1.0) / ((S - 1.0) * delta));
    return 6.0 * std::sqrt(md * S * K * T * log_conf) + md * S * log_conf;
}

std::vector<double> boosted_weights(std::span<const double> weights, std::span<const double> x_hat,
                                    std::span<const double> marginals,
                                    std::span<const std::size_t> capped,
                                    const Exp3MSPParams& params)
{
    const std::size_t K = weights.size();
    if (x_hat.size() != K || marginals.size() != K) {
        throw std::invalid_argument("boosted_weights: dimension mismatch");
    }
    std::vector<double> exponent(K, 0.0);
    std::vector<bool> is_capped(K, false);
    for (std::size_t arm : capped) {
        is_capped.at(arm) = true;
    }
    const double scale = params.confidence_scale();
    for (std::size_t j = 0; j < K; ++j) {
        if (!is_capped[j]) {
            exponent[j] = params.eta * (x_hat[j] + scale / marginals[j]);
        }
    }
    // Only shift huge exponents; the sharing step is scale-invariant.
    double top = *std::max_element(exponent.begin(), exponent.end());
    if (top < 500.0) {
        top = 0.0;
    }
    std::vector<double> boosted(K);
    for (std::size_t j = 0; j < K; ++j) {
        boosted[j] = weights[j] * std::exp(exponent[j] - top);
    }
    return boosted;
}

std::vector<double> share_weights(std::span<const double> boosted, double beta)
{
    const std::size_t K = boosted.size();
    if (K < 2) throw std::invalid_argument("share_weights: need at least two arms");
    const double total = std::accumulate(boosted.begin(), boosted.end(), 0.0);
    const double spread = beta / static_cast<double>(K - 1);
    std::vector<double> shared(K);
    for (std::size_t j = 0; j < K; ++j) {
        shared[j] = ((1.0 - beta) * boosted[j] + spread * (total - boosted[j])) / total;
    }
    return shared;
}

Exp3MSP::Exp3MSP(const Exp3MSPParams& params) : params_(params)
{
    params_.validate();
    weights_.assign(params_.arms, 1.0 / static_cast<double>(params_.arms));
}

RoundOutcome Exp3MSP::select(Rng& rng) const
{
    if (round_ > params_.horizon) {
        throw std::logic_error("Exp3MSP: all " + std::to_string(params_.horizon) +
                               " rounds already played");
    }
    CapResult cap = cap_weights(weights_, params_.m, params_.gamma);
    RoundOutcome outcome;
    outcome.marginals = marginals(cap, params_.gamma, params_.m);
    outcome.capped = std::move(cap.capped);
    outcome.selection = depround(params_.m, outcome.marginals, rng);
    return outcome;
}

void Exp3MSP::share_update(std::span<const double> x_hat, std::span<const double> marginals,
                           std::span<const std::size_t> capped)
{
    weights_ = share_weights(boosted_weights(weights_, x_hat, marginals, capped, params_),
                             params_.beta);
    ++round_;
}

void Exp3MSP::observe(RoundOutcome& outcome, const FeedbackView& feedback)
{
    const std::vector<double> observed = feedback.observed();
    outcome.x_hat = estimate_gains(outcome.selection, observed, outcome.marginals);
    share_update(outcome.x_hat, outcome.marginals, outcome.capped);
}

} // namespace mabmp
