#include "mabmp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mabmp {

namespace {

void check_m(const GainMatrix& gains, std::size_t m)
{
    if (m == 0 || m > gains.arms()) {
        throw std::invalid_argument("oracle: need 1 <= m <= K");
    }
}

double top_m_sum(std::span<const double> row, std::size_t m)
{
    std::vector<double> values(row.begin(), row.end());
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m - 1),
                     values.end(), std::greater<>());
    return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
}

SegmentSolution segment_dp(const GainMatrix& gains, std::size_t m, std::size_t segments,
                           bool keep_trace)
{
    check_m(gains, m);
    const std::size_t T = gains.rounds();
    if (segments == 0 || segments > T) {
        throw std::invalid_argument("best_s_segment: need 1 <= S <= T");
    }
    const std::size_t count = binomial(gains.arms(), m);
    if (count > kMaxCombinations) {
        throw OracleGuardError("best_s_segment: C(K,m) = " + std::to_string(count) +
                               " exceeds the enumeration guard");
    }
    const std::vector<ArmSet> combos = enumerate_combinations(gains.arms(), m);
    const std::size_t C = combos.size();
    const std::size_t S = segments;
    constexpr double kNone = -std::numeric_limits<double>::infinity();

    // back[t][s][c]: combination held at round t-1 on the best path into
    // (t, s, c); the segment count at t-1 follows from whether it equals c.
    std::vector<std::uint32_t> back;
    if (keep_trace) {
        back.assign(T * S * C, 0);
    }

    std::vector<double> row_gain(C);
    auto fill_row_gain = [&](std::size_t t) {
        for (std::size_t c = 0; c < C; ++c) {
            double g = 0.0;
            for (std::size_t arm : combos[c]) g += gains(t, arm);
            row_gain[c] = g;
        }
    };

    std::vector<double> dp(S * C, kNone), next(S * C, kNone);
    fill_row_gain(0);
    for (std::size_t c = 0; c < C; ++c) dp[c] = row_gain[c];

    for (std::size_t t = 1; t < T; ++t) {
        fill_row_gain(t);
        // best value and argmax over combinations for each segment count
        std::vector<double> best(S, kNone);
        std::vector<std::uint32_t> arg(S, 0);
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t c = 0; c < C; ++c) {
                if (dp[s * C + c] > best[s]) {
                    best[s] = dp[s * C + c];
                    arg[s] = static_cast<std::uint32_t>(c);
                }
            }
        }
        for (std::size_t s = 0; s < S; ++s) {
            for (std::size_t c = 0; c < C; ++c) {
                double stay = dp[s * C + c];
                double jump = s > 0 ? best[s - 1] : kNone;
                double from;
                std::uint32_t prev;
                if (stay >= jump) {
                    from = stay;
                    prev = static_cast<std::uint32_t>(c);
                } else {
                    from = jump;
                    prev = arg[s - 1];
                }
                next[s * C + c] = from == kNone ? kNone : from + row_gain[c];
                if (keep_trace) back[(t * S + s) * C + c] = prev;
            }
        }
        std::swap(dp, next);
    }

    SegmentSolution solution;
    std::size_t best_s = 0, best_c = 0;
    solution.gain = kNone;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t c = 0; c < C; ++c) {
            if (dp[s * C + c] > solution.gain) {
                solution.gain = dp[s * C + c];
                best_s = s;
                best_c = c;
            }
        }
    }
    if (keep_trace) {
        solution.trace.resize(T);
        std::size_t s = best_s, c = best_c;
        for (std::size_t t = T; t-- > 0;) {
            solution.trace[t] = combos[c];
            if (t == 0) break;
            const std::size_t prev = back[(t * S + s) * C + c];
            if (prev != c) --s;
            c = prev;
        }
    }
    return solution;
}

} // namespace

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::size_t numer = n - k + i;
        // result * numer / i stays integral at every step
        if (result > std::numeric_limits<std::size_t>::max() / numer) {
            return std::numeric_limits<std::size_t>::max();
        }
        result = result * numer / i;
    }
    return result;
}

std::vector<ArmSet> enumerate_combinations(std::size_t arms, std::size_t m)
{
    std::vector<ArmSet> combos;
    if (m > arms) return combos;
    std::vector<std::size_t> current(m);
    std::iota(current.begin(), current.end(), std::size_t{0});
    while (true) {
        combos.emplace_back(current);
        std::size_t i = m;
        while (i > 0 && current[i - 1] == arms - m + (i - 1)) --i;
        if (i == 0) break;
        ++current[i - 1];
        for (std::size_t j = i; j < m; ++j) current[j] = current[j - 1] + 1;
    }
    return combos;
}

FixedArmSolution best_fixed_marm(const GainMatrix& gains, std::size_t m)
{
    check_m(gains, m);
    std::vector<double> totals(gains.arms(), 0.0);
    for (std::size_t t = 0; t < gains.rounds(); ++t) {
        for (std::size_t j = 0; j < gains.arms(); ++j) {
            totals[j] += gains(t, j);
        }
    }
    std::vector<std::size_t> order(gains.arms());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });
    order.resize(m);
    double gain = 0.0;
    for (std::size_t arm : order) gain += totals[arm];
    return {ArmSet(std::move(order)), gain};
}

double best_unconstrained(const GainMatrix& gains, std::size_t m)
{
    check_m(gains, m);
    double total = 0.0;
    for (std::size_t t = 0; t < gains.rounds(); ++t) {
        total += top_m_sum(gains.row(t), m);
    }
    return total;
}

double best_s_segment(const GainMatrix& gains, std::size_t m, std::size_t segments)
{
    return segment_dp(gains, m, segments, false).gain;
}

SegmentSolution best_s_segment_trace(const GainMatrix& gains, std::size_t m, std::size_t segments)
{
    return segment_dp(gains, m, segments, true);
}

double best_expert_combination(const GainMatrix& gains, std::span<const AdviceMatrix> advice,
                               std::size_t m)
{
    if (advice.size() != gains.rounds()) {
        throw std::invalid_argument("best_expert_combination: one advice matrix per round expected");
    }
    const std::size_t experts = advice.front().experts();
    if (m == 0 || m > experts) {
        throw std::invalid_argument("best_expert_combination: need 1 <= m <= N_r");
    }
    std::vector<double> totals(experts, 0.0);
    for (std::size_t t = 0; t < gains.rounds(); ++t) {
        const AdviceMatrix& a = advice[t];
        if (a.experts() != experts || a.arms() != gains.arms()) {
            throw std::invalid_argument("best_expert_combination: advice dimension mismatch");
        }
        for (std::size_t i = 0; i < experts; ++i) {
            for (std::size_t j = 0; j < gains.arms(); ++j) {
                totals[i] += a(i, j) * gains(t, j);
            }
        }
    }
    return top_m_sum(totals, m);
}

double prior_factor(std::size_t previous, std::size_t next, std::size_t arms, double beta)
{
    return previous == next ? 1.0 - beta : beta / static_cast<double>(arms - 1);
}

double prior_weight(std::span<const std::size_t> sequence, std::size_t arms, double beta)
{
    if (sequence.empty()) {
        throw std::invalid_argument("prior_weight: empty sequence");
    }
    if (arms < 2) {
        throw std::invalid_argument("prior_weight: need K >= 2");
    }
    for (std::size_t arm : sequence) {
        if (arm >= arms) throw std::invalid_argument("prior_weight: arm index out of range");
    }
    double weight = 1.0 / static_cast<double>(arms);
    for (std::size_t t = 1; t < sequence.size(); ++t) {
        weight *= prior_factor(sequence[t - 1], sequence[t], arms, beta);
    }
    return weight;
}

std::vector<std::vector<double>> hypothetical_exp4mp(const TraceLog& trace,
                                                     const Exp3MSPParams& params)
{
    const std::size_t K = params.arms;
    const std::size_t T = trace.size();
    if (K < 2) throw std::invalid_argument("hypothetical_exp4mp: need K >= 2");
    if (T == 0) throw std::invalid_argument("hypothetical_exp4mp: empty trace");

    std::size_t sequences = 1;
    for (std::size_t t = 0; t < T; ++t) {
        if (sequences > kMaxSequences / K) {
            throw OracleGuardError("hypothetical_exp4mp: K^T exceeds the enumeration guard");
        }
        sequences *= K;
    }

    const double scale = params.confidence_scale();
    std::vector<std::vector<double>> arm_weights;
    arm_weights.reserve(T);

    // Weights of every length-(t+1) sequence, indexed as base-K numbers whose
    // last digit is the arm played at round t+1.
    std::vector<double> weights(K, 1.0 / static_cast<double>(K));
    for (std::size_t t = 0;; ++t) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::vector<double> v(K, 0.0);
        for (std::size_t idx = 0; idx < weights.size(); ++idx) {
            v[idx % K] += weights[idx] / total;
        }
        arm_weights.push_back(std::move(v));
        if (t + 1 == T) break;

        const TraceRound& round = trace[t];
        if (round.marginals.size() != K || round.observed.size() != round.selection.size()) {
            throw std::invalid_argument("hypothetical_exp4mp: malformed trace round " +
                                        std::to_string(t + 1));
        }
        std::vector<double> log_boost(K, 0.0);
        std::vector<bool> capped(K, false);
        for (std::size_t arm : round.capped) capped.at(arm) = true;
        std::vector<double> x_hat(K, 0.0);
        std::size_t k = 0;
        for (std::size_t arm : round.selection) {
            x_hat.at(arm) = round.observed[k++] / round.marginals[arm];
        }
        for (std::size_t j = 0; j < K; ++j) {
            if (!capped[j]) {
                log_boost[j] = params.eta * (x_hat[j] + scale / round.marginals[j]);
            }
        }
        // a common factor cancels in the normalization
        const double top = *std::max_element(log_boost.begin(), log_boost.end());
        std::vector<double> boost(K);
        for (std::size_t j = 0; j < K; ++j) boost[j] = std::exp(log_boost[j] - top);

        std::vector<double> extended(weights.size() * K);
        for (std::size_t idx = 0; idx < weights.size(); ++idx) {
            const std::size_t last = idx % K;
            const double carried = weights[idx] / total * boost[last];
            for (std::size_t b = 0; b < K; ++b) {
                extended[idx * K + b] = carried * prior_factor(last, b, K, params.beta);
            }
        }
        weights = std::move(extended);
    }
    return arm_weights;
}

} // namespace mabmp
