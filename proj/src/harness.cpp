#include "mabmp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <variant>

#include "mabmp/exp3msp.hpp"
#include "mabmp/exp4mp.hpp"
#include "mabmp/feedback.hpp"
#include "mabmp/oracles.hpp"

namespace mabmp {

namespace {

// Fixed-format number so identical runs give byte-identical files.
std::string fmt(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

Exp4MPParams exp4mp_params(const ExperimentConfig& config, std::size_t experts)
{
    Exp4MPParams p = experts == config.arms
                         ? vanilla_params(config.arms, config.m, config.horizon, config.delta)
                         : params_uniform(config.arms, config.m, config.horizon, config.delta,
                                          experts);
    if (config.overrides.eta) p.eta = *config.overrides.eta;
    if (config.overrides.gamma) p.gamma = *config.overrides.gamma;
    if (config.overrides.c) p.c = *config.overrides.c;
    p.validate();
    return p;
}

Exp3MSPParams exp3msp_params(const ExperimentConfig& config)
{
    Exp3MSPParams p =
        params_switching(config.arms, config.m, config.horizon, config.segments, config.delta);
    if (config.overrides.eta) p.eta = *config.overrides.eta;
    if (config.overrides.gamma) p.gamma = *config.overrides.gamma;
    if (config.overrides.beta) p.beta = *config.overrides.beta;
    if (config.overrides.c) p.c = *config.overrides.c;
    p.validate();
    return p;
}

StrategyTrace repeat(const ArmSet& arms, std::size_t rounds)
{
    return StrategyTrace(rounds, arms);
}

// Learner behind a common select/observe interface for the play loop.
class Learner {
public:
    Learner(const ExperimentConfig& config, const GameInstance& game) : config_(config)
    {
        switch (config.algorithm) {
        case Algorithm::exp4mp: {
            const std::size_t experts =
                game.advice ? game.advice->front().experts() : config.arms;
            if (!game.advice) indicators_ = AdviceMatrix::indicators(config.arms);
            state_.emplace<Exp4MP>(exp4mp_params(config, experts));
            break;
        }
        case Algorithm::exp3msp:
            state_.emplace<Exp3MSP>(exp3msp_params(config));
            break;
        case Algorithm::chance:
            break;
        }
    }

    RoundOutcome select(const GameInstance& game, std::size_t t, Rng& rng) const
    {
        if (auto* exp4 = std::get_if<Exp4MP>(&state_)) {
            return exp4->select(advice(game, t), rng);
        }
        if (auto* exp3 = std::get_if<Exp3MSP>(&state_)) {
            return exp3->select(rng);
        }
        RoundOutcome outcome;
        outcome.selection = chance_policy(config_.arms, config_.m, rng);
        outcome.marginals.assign(config_.arms, static_cast<double>(config_.m) /
                                                   static_cast<double>(config_.arms));
        return outcome;
    }

    void observe(const GameInstance& game, std::size_t t, RoundOutcome& outcome,
                 const FeedbackView& feedback)
    {
        if (auto* exp4 = std::get_if<Exp4MP>(&state_)) {
            exp4->observe(advice(game, t), outcome, feedback);
        } else if (auto* exp3 = std::get_if<Exp3MSP>(&state_)) {
            exp3->observe(outcome, feedback);
        }
    }

    std::size_t bound_violations() const
    {
        if (auto* exp4 = std::get_if<Exp4MP>(&state_)) return exp4->bound_violations();
        return 0;
    }

private:
    const AdviceMatrix& advice(const GameInstance& game, std::size_t t) const
    {
        return game.advice ? (*game.advice)[t] : indicators_;
    }

    const ExperimentConfig& config_;
    std::variant<std::monostate, Exp4MP, Exp3MSP> state_;
    AdviceMatrix indicators_;
};

} // namespace

GameFamily parse_game_family(const std::string& name)
{
    if (name == "bernoulli" || name == "bernoulli_shift") return GameFamily::bernoulli_shift;
    if (name == "experts") return GameFamily::experts;
    if (name == "sudden" || name == "sudden_change") return GameFamily::sudden_change;
    if (name == "random" || name == "random_change") return GameFamily::random_change;
    if (name == "latency") return GameFamily::latency;
    throw std::invalid_argument("unknown game family '" + name + "'");
}

Algorithm parse_algorithm(const std::string& name)
{
    if (name == "exp4mp") return Algorithm::exp4mp;
    if (name == "exp3msp") return Algorithm::exp3msp;
    if (name == "chance") return Algorithm::chance;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(GameFamily family)
{
    switch (family) {
    case GameFamily::bernoulli_shift: return "bernoulli";
    case GameFamily::experts: return "experts";
    case GameFamily::sudden_change: return "sudden";
    case GameFamily::random_change: return "random";
    case GameFamily::latency: return "latency";
    }
    return "?";
}

std::string to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::exp4mp: return "exp4mp";
    case Algorithm::exp3msp: return "exp3msp";
    case Algorithm::chance: return "chance";
    }
    return "?";
}

void ExperimentConfig::validate() const
{
    if (m == 0 || m >= arms) throw std::invalid_argument("config: need 1 <= m < K");
    if (horizon == 0) throw std::invalid_argument("config: T must be positive");
    if (segments == 0 || segments > horizon) throw std::invalid_argument("config: need 1 <= S <= T");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("config: delta must lie in (0,1]");
    if (trials == 0) throw std::invalid_argument("config: trials must be at least 1");
    if (game == GameFamily::latency && latency_file.empty()) {
        throw std::invalid_argument("config: the latency game needs a latency file");
    }
}

GameInstance make_game(const ExperimentConfig& config, std::uint64_t game_seed,
                       const LatencyTable* latencies)
{
    Rng rng(game_seed);
    switch (config.game) {
    case GameFamily::bernoulli_shift: {
        GainMatrix gains = bernoulli_shift(config.arms, config.m, config.horizon, config.epsilon, rng);
        StrategyTrace comparator = repeat(best_fixed_marm(gains, config.m).arms, config.horizon);
        return {std::move(gains), std::nullopt, std::move(comparator)};
    }
    case GameFamily::experts: {
        ExpertGame game = underlying_expert_game(config.arms, config.m, config.horizon, rng);
        StrategyTrace comparator = repeat(best_fixed_marm(game.gains, config.m).arms, config.horizon);
        return {std::move(game.gains), std::move(game.advice), std::move(comparator)};
    }
    case GameFamily::sudden_change: {
        PlantedGame game = sudden_change(config.arms, config.m, config.horizon);
        return {std::move(game.gains), std::nullopt, std::move(game.optimum)};
    }
    case GameFamily::random_change: {
        PlantedGame game = random_change(config.arms, config.m, config.horizon, config.segments, rng);
        return {std::move(game.gains), std::nullopt, std::move(game.optimum)};
    }
    case GameFamily::latency: {
        LatencyTable loaded;
        if (!latencies) {
            std::ifstream in(config.latency_file);
            if (!in) throw std::runtime_error("cannot open latency table " + config.latency_file.string());
            loaded = parse_latency_table(in);
            latencies = &loaded;
        }
        GainMatrix gains = latency_games(*latencies, config.arms, config.m, 1, game_seed).front();
        StrategyTrace comparator = best_s_segment_trace(gains, config.m, config.segments).trace;
        return {std::move(gains), std::nullopt, std::move(comparator)};
    }
    }
    throw std::logic_error("make_game: unhandled family");
}

ArmSet chance_policy(std::size_t arms, std::size_t m, Rng& rng)
{
    return random_subset(arms, m, rng);
}

TrialRecord play(const ExperimentConfig& config, const GameInstance& game, std::uint64_t seed)
{
    const std::size_t T = game.gains.rounds();
    if (game.gains.arms() != config.arms) {
        throw std::invalid_argument("play: game has " + std::to_string(game.gains.arms()) +
                                    " arms, config says " + std::to_string(config.arms));
    }
    if (T != config.horizon) {
        throw std::invalid_argument("play: game has " + std::to_string(T) +
                                    " rounds, config says " + std::to_string(config.horizon));
    }
    Rng rng(seed);
    Learner learner(config, game);

    TrialRecord record;
    record.seed = seed;
    record.algorithm_cumulative.reserve(T);
    record.comparator_cumulative.reserve(T);
    record.comparator_mass.reserve(T);

    double algorithm_total = 0.0, comparator_total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        try {
            RoundOutcome outcome = learner.select(game, t, rng);
            const FeedbackView feedback(game.gains, t, outcome.selection);
            for (double g : feedback.observed()) algorithm_total += g;
            learner.observe(game, t, outcome, feedback);

            double mass = 0.0;
            for (std::size_t arm : game.comparator[t]) {
                comparator_total += game.gains(t, arm);
                mass += outcome.marginals[arm];
            }
            record.algorithm_cumulative.push_back(algorithm_total);
            record.comparator_cumulative.push_back(comparator_total);
            record.comparator_mass.push_back(mass / static_cast<double>(game.comparator[t].size()));
            if (config.record_marginals) record.marginals.push_back(std::move(outcome.marginals));
        } catch (const std::exception& e) {
            throw std::runtime_error("round " + std::to_string(t + 1) + ": " + e.what());
        }
    }
    record.bound_violations = learner.bound_violations();
    return record;
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t seed,
                      const LatencyTable* latencies)
{
    config.validate();
    const GameInstance game = make_game(config, derive_seed(seed, 0), latencies);
    return play(config, game, derive_seed(seed, 1));
}

SummaryStats summarize(std::vector<double> values)
{
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    SummaryStats s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    return s;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t index)
{
    return derive_seed(master, index);
}

void write_trajectory(std::ostream& out, const TrialRecord& record)
{
    const bool with_marginals = !record.marginals.empty();
    out << "round,alg_gain_cum,comp_gain_cum,regret";
    if (with_marginals) {
        for (std::size_t j = 0; j < record.marginals.front().size(); ++j) out << ",p_" << j + 1;
    }
    out << '\n';
    for (std::size_t t = 0; t < record.algorithm_cumulative.size(); ++t) {
        const double alg = record.algorithm_cumulative[t];
        const double comp = record.comparator_cumulative[t];
        out << t + 1 << ',' << fmt(alg) << ',' << fmt(comp) << ',' << fmt(regret(comp, alg));
        if (with_marginals) {
            for (double p : record.marginals[t]) out << ',' << fmt(p);
        }
        out << '\n';
    }
}

void write_trials(std::ostream& out, const ExperimentSummary& summary)
{
    out << "trial,seed,alg_gain,comp_gain,regret,bound_violations\n";
    for (const TrialSummary& t : summary.trials) {
        out << t.index + 1 << ',' << t.seed << ',' << fmt(t.algorithm_gain) << ','
            << fmt(t.comparator_gain) << ',' << fmt(t.regret) << ',' << t.bound_violations << '\n';
    }
}

void write_summary(std::ostream& out, const ExperimentSummary& summary)
{
    const SummaryStats& r = summary.regret;
    const SummaryStats& g = summary.algorithm_gain;
    out << "statistic,final_regret,final_alg_gain\n";
    out << "mean," << fmt(r.mean) << ',' << fmt(g.mean) << '\n';
    out << "min," << fmt(r.min) << ',' << fmt(g.min) << '\n';
    out << "q1," << fmt(r.q1) << ',' << fmt(g.q1) << '\n';
    out << "median," << fmt(r.median) << ',' << fmt(g.median) << '\n';
    out << "q3," << fmt(r.q3) << ',' << fmt(g.q3) << '\n';
    out << "max," << fmt(r.max) << ',' << fmt(g.max) << '\n';
}

ExperimentSummary run_experiment(const ExperimentConfig& config)
{
    config.validate();

    std::optional<LatencyTable> latencies;
    if (config.game == GameFamily::latency) {
        std::ifstream in(config.latency_file);
        if (!in) throw std::runtime_error("cannot open latency table " + config.latency_file.string());
        latencies = parse_latency_table(in);
    }
    if (!config.out.empty()) {
        std::filesystem::create_directories(config.out);
    }

    ExperimentSummary summary;
    summary.trials.resize(config.trials);

    std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, config.trials);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < config.trials; i = next++) {
            try {
                const std::uint64_t seed = trial_seed(config.seed, i);
                const TrialRecord record =
                    run_trial(config, seed, latencies ? &*latencies : nullptr);
                if (!config.out.empty()) {
                    char name[32];
                    std::snprintf(name, sizeof name, "trial_%04zu.csv", i + 1);
                    std::ofstream file(config.out / name);
                    if (!file) throw std::runtime_error("cannot write " + (config.out / name).string());
                    write_trajectory(file, record);
                }
                TrialSummary& s = summary.trials[i];
                s.index = i;
                s.seed = seed;
                s.algorithm_gain = record.algorithm_cumulative.back();
                s.comparator_gain = record.comparator_cumulative.back();
                s.regret = record.final_regret();
                s.bound_violations = record.bound_violations;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = config.trials;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> regrets, gains;
    for (const TrialSummary& t : summary.trials) {
        regrets.push_back(t.regret);
        gains.push_back(t.algorithm_gain);
    }
    summary.regret = summarize(regrets);
    summary.algorithm_gain = summarize(gains);

    if (!config.out.empty()) {
        std::ofstream trials_file(config.out / "trials.csv");
        std::ofstream summary_file(config.out / "summary.csv");
        if (!trials_file || !summary_file) {
            throw std::runtime_error("cannot write summary files under " + config.out.string());
        }
        write_trials(trials_file, summary);
        write_summary(summary_file, summary);
    }
    return summary;
}

} // namespace mabmp
