#include "mabmp/exp4mp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mabmp/capping.hpp"
#include "mabmp/sampling.hpp"

namespace mabmp {

namespace {

// Rebase log-weights once they drift this far from zero.
constexpr double kLogRebase = 600.0;

void check_delta(double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1]");
    }
}

} // namespace

double Exp4MPParams::confidence_scale() const
{
    return c / std::sqrt(static_cast<double>(arms) * static_cast<double>(horizon));
}

void Exp4MPParams::validate() const
{
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0,1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0,1)");
    if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be nonnegative");
    if (m == 0 || m >= arms) throw std::invalid_argument("need 1 <= m < K");
    if (horizon == 0) throw std::invalid_argument("T must be positive");
    if (experts == 0) throw std::invalid_argument("N_r must be positive");
}

Exp4MPParams params_uniform(std::size_t arms, std::size_t m, std::size_t horizon, double delta,
                            std::size_t experts)
{
    check_delta(delta);
    if (m == 0 || m >= arms) throw std::invalid_argument("need 1 <= m < K");
    if (experts < m) throw std::invalid_argument("need N_r >= m");
    if (horizon == 0) throw std::invalid_argument("T must be positive");

    const double K = static_cast<double>(arms);
    const double md = static_cast<double>(m);
    const double T = static_cast<double>(horizon);
    const double log_conf = std::log(static_cast<double>(experts) / delta);

    Exp4MPParams p;
    p.arms = arms;
    p.m = m;
    p.horizon = horizon;
    p.experts = experts;
    p.c = std::sqrt(md * log_conf);
    p.gamma = std::min(0.5, std::sqrt(K * std::log(static_cast<double>(experts) / md) / (md * T)));
    p.eta = md * p.gamma / (2.0 * K);
    p.horizon_condition_met = md * log_conf / (K * (std::numbers::e - 2.0)) <= T;
    return p;
}

Exp4MPParams vanilla_params(std::size_t arms, std::size_t m, std::size_t horizon, double delta)
{
    return params_uniform(arms, m, horizon, delta, arms);
}

double bound_uniform(std::size_t arms, std::size_t m, std::size_t horizon, double delta,
                     std::size_t experts)
{
    check_delta(delta);
    const double scale = static_cast<double>(m) * static_cast<double>(arms) *
                         static_cast<double>(horizon);
    const double log_conf = std::log(static_cast<double>(experts) / delta);
    const double log_mix = std::log(static_cast<double>(experts) / static_cast<double>(m));
    return 2.0 * std::sqrt(scale * log_conf) + 4.0 * std::sqrt(scale * log_mix) +
           static_cast<double>(m) * log_conf;
}

ExpertStatistics expert_statistics(const AdviceMatrix& advice, std::span<const double> x_hat,
                                   std::span<const double> marginals,
                                   std::span<const std::size_t> capped)
{
    const std::size_t K = advice.arms();
    if (x_hat.size() != K || marginals.size() != K) {
        throw std::invalid_argument("expert_statistics: dimension mismatch");
    }
    std::vector<bool> is_capped(K, false);
    for (std::size_t arm : capped) {
        is_capped.at(arm) = true;
    }

    ExpertStatistics stats{std::vector<double>(advice.experts(), 0.0),
                           std::vector<double>(advice.experts(), 0.0)};
    for (std::size_t i = 0; i < advice.experts(); ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            const double z = advice(i, j);
            if (is_capped[j] || z == 0.0) {
                continue;
            }
            if (!(marginals[j] > 0.0)) {
                throw std::logic_error("expert_statistics: advised arm " + std::to_string(j + 1) +
                                       " has zero probability");
            }
            stats.gain[i] += z * x_hat[j];
            stats.confidence[i] += z / marginals[j];
        }
    }
    return stats;
}

Exp4MP::Exp4MP(const Exp4MPParams& params)
    : Exp4MP(params, std::vector<double>(params.experts, 1.0))
{
}

Exp4MP::Exp4MP(const Exp4MPParams& params, std::span<const double> priors) : params_(params)
{
    params_.validate();
    if (priors.size() != params_.experts) {
        throw std::invalid_argument("Exp4MP: expected one prior per underlying expert");
    }
    log_weights_.reserve(priors.size());
    for (double w : priors) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("Exp4MP: priors must be positive");
        }
        log_weights_.push_back(std::log(w));
    }
}

std::vector<double> Exp4MP::weights() const
{
    std::vector<double> w(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), w.begin(),
                   [](double lw) { return std::exp(lw); });
    return w;
}

void Exp4MP::check_advice(const AdviceMatrix& advice) const
{
    if (advice.experts() != params_.experts || advice.arms() != params_.arms) {
        throw std::invalid_argument("Exp4MP: advice is " + std::to_string(advice.experts()) + "x" +
                                    std::to_string(advice.arms()) + ", expected " +
                                    std::to_string(params_.experts) + "x" +
                                    std::to_string(params_.arms));
    }
}

std::vector<double> Exp4MP::arm_weights(const AdviceMatrix& advice) const
{
    check_advice(advice);
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    std::vector<double> scaled(log_weights_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        scaled[i] = std::exp(log_weights_[i] - top);
        total += scaled[i];
    }
    std::vector<double> v(params_.arms, 0.0);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const double share = scaled[i] / total;
        for (std::size_t j = 0; j < params_.arms; ++j) {
            v[j] += share * advice(i, j);
        }
    }
    return v;
}

RoundOutcome Exp4MP::select(const AdviceMatrix& advice, Rng& rng) const
{
    if (round_ > params_.horizon) {
        throw std::logic_error("Exp4MP: all " + std::to_string(params_.horizon) +
                               " rounds already played");
    }
    if (auto bad = advice.validate()) {
        throw std::invalid_argument("Exp4MP: invalid advice: " + bad->message);
    }
    CapResult cap = cap_weights(arm_weights(advice), params_.m, params_.gamma);
    RoundOutcome outcome;
    outcome.marginals = marginals(cap, params_.gamma, params_.m);
    outcome.capped = std::move(cap.capped);
    outcome.selection = depround(params_.m, outcome.marginals, rng);
    return outcome;
}

bool Exp4MP::update(std::span<const double> gain, std::span<const double> confidence)
{
    if (gain.size() != params_.experts || confidence.size() != params_.experts) {
        throw std::invalid_argument("Exp4MP::update: expected one statistic per expert");
    }
    const double scale = params_.confidence_scale();
    bool bounded = true;
    for (std::size_t i = 0; i < log_weights_.size(); ++i) {
        const double exponent = params_.eta * (gain[i] + scale * confidence[i]);
        if (exponent > 1.0 + 1e-12) {
            bounded = false;
        }
        log_weights_[i] += exponent;
    }
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    if (std::abs(top) > kLogRebase) {
        for (double& lw : log_weights_) {
            lw -= top;
        }
    }
    if (!bounded) {
        ++bound_violations_;
    }
    ++round_;
    return bounded;
}

bool Exp4MP::observe(const AdviceMatrix& advice, RoundOutcome& outcome,
                     const FeedbackView& feedback)
{
    check_advice(advice);
    const std::vector<double> observed = feedback.observed();
    outcome.x_hat = estimate_gains(outcome.selection, observed, outcome.marginals);
    const ExpertStatistics stats =
        expert_statistics(advice, outcome.x_hat, outcome.marginals, outcome.capped);
    return update(stats.gain, stats.confidence);
}

} // namespace mabmp
