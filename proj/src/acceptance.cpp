#include "mabmp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "mabmp/capping.hpp"
#include "mabmp/core.hpp"
#include "mabmp/environments.hpp"
#include "mabmp/exp3msp.hpp"
#include "mabmp/exp4mp.hpp"
#include "mabmp/harness.hpp"
#include "mabmp/oracles.hpp"
#include "mabmp/sampling.hpp"

namespace mabmp {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240601;

std::string str(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", x);
    return buffer;
}

CriterionResult equivalence()
{
    constexpr std::size_t K = 3, m = 2, T = 6, traces = 50;
    double worst = 0.0;
    for (std::size_t trial = 0; trial < traces; ++trial) {
        Rng rng(derive_seed(kSuiteSeed, 100 + trial));
        Exp3MSPParams params;
        params.arms = K;
        params.m = m;
        params.horizon = T;
        params.segments = 1;
        params.eta = rng.uniform();
        params.gamma = 0.95 * rng.uniform();
        params.beta = rng.uniform();
        params.c = 3.0 * rng.uniform();

        GainMatrix gains(T, K);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < K; ++j) gains.set(t, j, rng.uniform());

        Exp3MSP learner(params);
        TraceLog log;
        std::vector<std::vector<double>> shared;
        for (std::size_t t = 0; t < T; ++t) {
            shared.push_back(learner.weights());
            RoundOutcome outcome = learner.select(rng);
            const FeedbackView feedback(gains, t, outcome.selection);
            log.push_back({outcome.marginals, outcome.selection, outcome.capped, feedback.observed()});
            learner.observe(outcome, feedback);
        }
        const auto enumerated = hypothetical_exp4mp(log, params);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < K; ++j)
                worst = std::max(worst, std::abs(enumerated[t][j] - shared[t][j]));
    }
    return {1, "", worst <= kEquivalenceTolerance,
            "max |v_shared - v_enumerated| = " + str(worst) + " over 50 traces (tol 1e-9)"};
}

CriterionResult depround_marginals()
{
    const std::vector<double> p{0.9, 0.6, 0.5};
    constexpr std::size_t m = 2, draws = 100000;
    Rng rng(derive_seed(kSuiteSeed, 2));
    std::vector<double> hits(p.size(), 0.0);
    bool sizes_ok = true, sums_ok = true;
    auto observer = [&](std::span<const double> work) {
        double s = 0.0;
        for (double x : work) {
            s += x;
            if (x < 0.0 || x > 1.0) sums_ok = false;
        }
        if (std::abs(s - static_cast<double>(m)) > kSumTolerance) sums_ok = false;
    };
    for (std::size_t d = 0; d < draws; ++d) {
        const ArmSet chosen = depround(m, p, rng, observer);
        if (chosen.size() != m) sizes_ok = false;
        for (std::size_t arm : chosen) hits[arm] += 1.0;
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        worst = std::max(worst, std::abs(hits[j] / draws - p[j]));
    }
    std::ostringstream detail;
    detail << "freq=[" << str(hits[0] / draws) << "," << str(hits[1] / draws) << ","
           << str(hits[2] / draws) << "] max dev " << str(worst) << " (tol 0.01); sizes "
           << (sizes_ok ? "ok" : "BAD") << "; working sum " << (sums_ok ? "ok" : "BAD");
    return {2, "", sizes_ok && sums_ok && worst <= kMarginalTolerance, detail.str()};
}

CriterionResult capping_cases()
{
    constexpr std::size_t cases = 10000;
    Rng rng(derive_seed(kSuiteSeed, 3));
    std::size_t triggered = 0, failures = 0;
    double worst_sum = 0.0, worst_max = 0.0, worst_residual = 0.0;
    std::string first_failure;

    for (std::size_t n = 0; n < cases; ++n) {
        const std::size_t K = 2 + rng.below(11);
        const std::size_t m = 1 + rng.below(K - 1);
        const double gamma = 0.9 * rng.uniform();
        const double skew = 1.0 + 5.0 * rng.uniform();
        std::vector<double> v(K);
        double total = 0.0;
        for (double& x : v) {
            x = std::pow(-std::log(1.0 - rng.uniform()), skew) + 1e-12;
            total += x;
        }
        for (double& x : v) x /= total;

        const CapResult cap = cap_weights(v, m, gamma);
        const std::vector<double> p = marginals(cap, gamma, m);
        const double bound = cap_bound(K, m, gamma);

        bool ok = true;
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        worst_sum = std::max(worst_sum, std::abs(sum - static_cast<double>(m)));
        if (std::abs(sum - static_cast<double>(m)) > kCapTolerance) ok = false;
        const double top = *std::max_element(p.begin(), p.end());
        worst_max = std::max(worst_max, top - 1.0);
        if (top > 1.0 + kCapTolerance) ok = false;
        if (cap.capped.size() >= m) ok = false;

        // brute force over every candidate cap count
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        std::vector<std::size_t> valid;
        std::vector<double> valid_alpha;
        for (std::size_t i = 1; i < K; ++i) {
            const double denom = 1.0 - static_cast<double>(i) * bound;
            if (denom <= 0.0) break;
            double rest = 0.0;
            for (std::size_t k = i; k < K; ++k) rest += sorted[k];
            const double alpha = bound * rest / denom;
            if (sorted[i - 1] >= alpha * (1.0 - 1e-9) && sorted[i] < alpha * (1.0 - 1e-9)) {
                valid.push_back(i);
                valid_alpha.push_back(alpha);
            }
        }

        if (cap.alpha) {
            ++triggered;
            const double alpha = *cap.alpha;
            double denom = 0.0;
            for (std::size_t j = 0; j < K; ++j) {
                const bool is_capped =
                    std::find(cap.capped.begin(), cap.capped.end(), j) != cap.capped.end();
                denom += is_capped ? alpha : v[j];
            }
            const double residual = std::abs(alpha / denom - bound);
            worst_residual = std::max(worst_residual, residual);
            if (residual > kCapTolerance) ok = false;
            if (valid.size() != 1 || valid[0] != cap.capped.size() ||
                std::abs(valid_alpha[0] - alpha) > 1e-12 * std::max(1.0, alpha))
                ok = false;
        } else if (sorted[0] >= bound) {
            ok = false;
        }
        if (!ok) {
            ++failures;
            if (first_failure.empty()) first_failure = " first failure at case " + std::to_string(n);
        }
    }
    std::ostringstream detail;
    detail << triggered << "/" << cases << " triggered capping; max |sum p - m| " << str(worst_sum)
           << ", max p - 1 " << str(worst_max) << ", max residual " << str(worst_residual)
           << "; failures " << failures << first_failure;
    return {3, "", failures == 0, detail.str()};
}

CriterionResult estimator_unbiased()
{
    constexpr std::size_t K = 10, m = 5, rounds = 100000;
    Rng rng(derive_seed(kSuiteSeed, 4));
    std::vector<double> v(K);
    double total = 0.0;
    for (double& x : v) {
        x = std::pow(rng.uniform() + 0.05, 3.0);
        total += x;
    }
    for (double& x : v) x /= total;
    const std::vector<double> p = marginals(cap_weights(v, m, 0.1), 0.1, m);
    std::vector<double> x(K);
    for (double& g : x) g = rng.uniform();

    std::vector<double> sum(K, 0.0), sum_sq(K, 0.0);
    for (std::size_t r = 0; r < rounds; ++r) {
        const ArmSet chosen = depround(m, p, rng);
        for (std::size_t arm : chosen) {
            const double est = x[arm] / p[arm];
            sum[arm] += est;
            sum_sq[arm] += est * est;
        }
    }
    bool ok = true;
    double worst_z = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        const double n = static_cast<double>(rounds);
        const double mean = sum[j] / n;
        const double var = std::max(0.0, (sum_sq[j] - n * mean * mean) / (n - 1.0));
        const double band = 3.0 * std::sqrt(var) / std::sqrt(n);
        const double dev = std::abs(mean - x[j]);
        if (dev > band + 1e-12) ok = false;
        if (band > 0.0) worst_z = std::max(worst_z, dev / (band / 3.0));
    }
    return {4, "", ok, "max |mean(x_hat) - x| / sigma_hat_mean = " + str(worst_z) + " (limit 3)"};
}

CriterionResult prior_normalization()
{
    constexpr std::size_t K = 3;
    double worst_sum = 0.0, worst_product = 0.0;
    for (double beta : {0.0, 0.3, 1.0}) {
        for (std::size_t len = 1; len <= 5; ++len) {
            std::size_t count = 1;
            for (std::size_t i = 0; i < len; ++i) count *= K;
            double total = 0.0;
            std::vector<std::size_t> seq(len);
            for (std::size_t code = 0; code < count; ++code) {
                std::size_t c = code, switches = 0;
                for (std::size_t i = len; i-- > 0;) {
                    seq[i] = c % K;
                    c /= K;
                }
                for (std::size_t i = 1; i < len; ++i) switches += seq[i] != seq[i - 1];
                const double w = prior_weight(seq, K, beta);
                const double stays = static_cast<double>(len - 1 - switches);
                const double product = (1.0 / K) * std::pow(1.0 - beta, stays) *
                                       std::pow(beta / (K - 1), static_cast<double>(switches));
                worst_product = std::max(worst_product, std::abs(w - product));
                total += w;
            }
            worst_sum = std::max(worst_sum, std::abs(total - 1.0));
        }
    }
    const bool ok = worst_sum <= 1e-12 && worst_product <= 1e-15;
    return {5, "", ok,
            "max |sum prior - 1| = " + str(worst_sum) + ", max |recursion - product| = " +
                str(worst_product)};
}

CriterionResult sudden_change_tracking()
{
    ExperimentConfig config;
    config.game = GameFamily::sudden_change;
    config.algorithm = Algorithm::exp3msp;
    config.arms = 10;
    config.m = 5;
    config.horizon = 10000;
    config.segments = 3;
    config.delta = 0.01;
    ExperimentConfig chance = config;
    chance.algorithm = Algorithm::chance;

    const double bound = bound_switching(10, 5, 10000, 3, 0.01);
    const GameInstance game = make_game(config, 0);
    std::vector<std::size_t> segment_ends;
    for (std::size_t t = 1; t < config.horizon; ++t)
        if (game.comparator[t] != game.comparator[t - 1]) segment_ends.push_back(t);
    segment_ends.push_back(config.horizon);

    constexpr std::size_t trials = 20;
    std::size_t beat_chance = 0, under_bound = 0;
    double worst_regret = 0.0, best_chance = 1e300;
    std::vector<double> window_mass(segment_ends.size(), 0.0);
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t seed = trial_seed(kSuiteSeed + 6, i);
        const TrialRecord ours = play(config, game, seed);
        const TrialRecord base = play(chance, game, derive_seed(seed, 7));
        const double r = ours.final_regret(), rc = base.final_regret();
        worst_regret = std::max(worst_regret, r);
        best_chance = std::min(best_chance, rc);
        beat_chance += r < rc;
        under_bound += r < bound;
        for (std::size_t s = 0; s < segment_ends.size(); ++s) {
            const std::size_t end = segment_ends[s];
            double mass = 0.0;
            for (std::size_t t = end - kTrackingWindow; t < end; ++t) mass += ours.comparator_mass[t];
            window_mass[s] += mass / kTrackingWindow / trials;
        }
    }
    const double target = kChanceArmMass + kTrackingMargin;
    const double weakest = *std::min_element(window_mass.begin(), window_mass.end());
    std::ostringstream detail;
    detail << "beat chance " << beat_chance << "/20, under bound (" << str(bound) << ") "
           << under_bound << "/20, worst regret " << str(worst_regret) << " vs best chance "
           << str(best_chance) << "; late-segment optimum mass [";
    for (std::size_t s = 0; s < window_mass.size(); ++s) detail << (s ? "," : "") << str(window_mass[s]);
    detail << "] need >= " << str(target);
    const bool ok = beat_chance == trials && under_bound == trials && weakest >= target;
    return {6, "", ok, detail.str()};
}

CriterionResult bernoulli_bound()
{
    ExperimentConfig config;
    config.game = GameFamily::bernoulli_shift;
    config.algorithm = Algorithm::exp4mp;
    config.arms = 10;
    config.m = 5;
    config.horizon = 10000;
    config.epsilon = 0.1;
    config.delta = 0.01;
    config.trials = 100;
    config.seed = kSuiteSeed + 7;
    const double bound = bound_uniform(10, 5, 10000, 0.01, 10);
    const ExperimentSummary summary = run_experiment(config);
    std::size_t within = 0;
    for (const TrialSummary& t : summary.trials) within += t.regret <= bound;
    std::ostringstream detail;
    detail << within << "/100 trials with regret <= " << str(bound) << " (need "
           << kBoundPassesRequired << "); regret mean " << str(summary.regret.mean) << ", max "
           << str(summary.regret.max);
    return {7, "", within >= kBoundPassesRequired, detail.str()};
}

CriterionResult expert_trend()
{
    std::vector<double> per_round;
    std::ostringstream detail;
    detail << "per-round regret by m:";
    for (std::size_t m : {5, 10, 15, 20, 25}) {
        ExperimentConfig config;
        config.game = GameFamily::experts;
        config.algorithm = Algorithm::exp4mp;
        config.arms = 30;
        config.m = m;
        config.horizon = 10000;
        config.delta = 0.01;
        config.trials = 25;
        config.seed = kSuiteSeed + 8 + m;
        const ExperimentSummary summary = run_experiment(config);
        per_round.push_back(summary.regret.mean / static_cast<double>(config.horizon));
        detail << " m=" << m << ":" << str(per_round.back());
    }
    const double hi = *std::max_element(per_round.begin(), per_round.end());
    const double lo = *std::min_element(per_round.begin(), per_round.end());
    const double ratio = lo > 0.0 ? hi / lo : INFINITY;
    detail << "; max/min " << str(ratio) << " (limit 2)";
    return {8, "", ratio <= kTrendFactor, detail.str()};
}

CriterionResult oracle_ordering()
{
    Rng rng(derive_seed(kSuiteSeed, 9));
    std::size_t failures = 0;
    for (std::size_t n = 0; n < 100; ++n) {
        const std::size_t K = 2 + rng.below(7);
        const std::size_t m = 1 + rng.below(std::min<std::size_t>(3, K));
        const std::size_t T = 1 + rng.below(20);
        GainMatrix gains(T, K);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < K; ++j) gains.set(t, j, rng.uniform());

        const double fixed = best_fixed_marm(gains, m).gain;
        const double free = best_unconstrained(gains, m);
        const double tol = 1e-9;
        double previous = fixed;
        bool ok = true;
        for (std::size_t S = 1; S <= T; ++S) {
            const SegmentSolution dp = best_s_segment_trace(gains, m, S);
            if (dp.gain < previous - tol || dp.gain > free + tol) ok = false;
            if (S == 1 && std::abs(dp.gain - fixed) > tol) ok = false;
            if (S == T && std::abs(dp.gain - free) > tol) ok = false;
            if (std::abs(total_gain(dp.trace, gains) - dp.gain) > tol) ok = false;
            if (count_segments(dp.trace) > S) ok = false;
            previous = dp.gain;
        }
        failures += !ok;
    }
    return {9, "", failures == 0, std::to_string(100 - failures) + "/100 random games ordered"};
}

CriterionResult sharing_normalization()
{
    const Exp3MSPParams params = params_switching(10, 5, 10000, 3, 0.01);
    const PlantedGame game = sudden_change(10, 5, 10000);
    Exp3MSP learner(params);
    Rng rng(derive_seed(kSuiteSeed, 10));
    double drift = 0.0, smallest = 1.0;
    for (std::size_t t = 0; t < params.horizon; ++t) {
        RoundOutcome outcome = learner.select(rng);
        learner.observe(outcome, FeedbackView(game.gains, t, outcome.selection));
        const auto& v = learner.weights();
        drift = std::max(drift, std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0));
        smallest = std::min(smallest, *std::min_element(v.begin(), v.end()));
    }
    return {10, "", drift <= kDriftTolerance && smallest > 0.0,
            "max |sum v - 1| = " + str(drift) + ", min v = " + str(smallest)};
}

} // namespace

std::vector<Criterion> acceptance_criteria()
{
    return {
        {1, "weight sharing equals enumerated sequence experts", equivalence},
        {2, "dependent rounding preserves marginals", depround_marginals},
        {3, "capping invariants on random cases", capping_cases},
        {4, "gain estimates are unbiased", estimator_unbiased},
        {5, "sequence priors normalize", prior_normalization},
        {6, "sudden change: tracking beats chance", sudden_change_tracking},
        {7, "bernoulli shift: regret under bound", bernoulli_bound},
        {8, "expert game: regret flat in m", expert_trend},
        {9, "oracle ordering", oracle_ordering},
        {10, "weight sharing stays normalized", sharing_normalization},
    };
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& report)
{
    std::vector<CriterionResult> results;
    for (const Criterion& c : acceptance_criteria()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {c.id, "", false, std::string("exception: ") + e.what()};
        }
        r.id = c.id;
        r.name = c.name;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (report) report(r);
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const CriterionResult& r)
{
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d %-48s (%.1fs) ", r.passed ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    return head + r.detail;
}

} // namespace mabmp
