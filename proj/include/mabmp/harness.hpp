#pragma once

// Seeded multi-trial experiment runner: builds a game, plays a learner
// against it under semi-bandit feedback, scores it against the family's
// comparator and writes CSV trajectories.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mabmp/core.hpp"
#include "mabmp/environments.hpp"

namespace mabmp {

enum class GameFamily { bernoulli_shift, experts, sudden_change, random_change, latency };
enum class Algorithm { exp4mp, exp3msp, chance };

GameFamily parse_game_family(const std::string& name);
Algorithm parse_algorithm(const std::string& name);
std::string to_string(GameFamily family);
std::string to_string(Algorithm algorithm);

struct ParameterOverrides {
    std::optional<double> eta;
    std::optional<double> gamma;
    std::optional<double> beta;
    std::optional<double> c;
};

struct ExperimentConfig {
    GameFamily game = GameFamily::sudden_change;
    Algorithm algorithm = Algorithm::exp3msp;
    std::size_t arms = 10;
    std::size_t m = 5;
    std::size_t horizon = 10000;
    std::size_t segments = 3;
    double delta = 0.01;
    double epsilon = 0.1;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::filesystem::path out;          ///< empty: no files written
    std::filesystem::path latency_file; ///< latency family only
    ParameterOverrides overrides;
    bool record_marginals = false;
    std::size_t threads = 0; ///< 0: one per hardware thread

    void validate() const;
};

/// A game instance plus the comparator strategy it is scored against.
struct GameInstance {
    GainMatrix gains;
    std::optional<AdviceStream> advice;
    StrategyTrace comparator;
};

GameInstance make_game(const ExperimentConfig& config, std::uint64_t game_seed,
                       const LatencyTable* latencies = nullptr);

struct TrialRecord {
    std::uint64_t seed = 0;
    std::vector<double> algorithm_cumulative;
    std::vector<double> comparator_cumulative;
    /// Mean marginal over the comparator's arms, per round.
    std::vector<double> comparator_mass;
    /// Per-round marginals; empty unless requested.
    std::vector<std::vector<double>> marginals;
    std::size_t bound_violations = 0;

    double final_regret() const
    {
        return comparator_cumulative.back() - algorithm_cumulative.back();
    }
};

/// Uniformly random m-subset of the K arms.
ArmSet chance_policy(std::size_t arms, std::size_t m, Rng& rng);

/// Plays one game on an already-built instance.
TrialRecord play(const ExperimentConfig& config, const GameInstance& game, std::uint64_t seed);

/// Builds the game from `trial_seed` and plays it.
TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial_seed,
                      const LatencyTable* latencies = nullptr);

struct SummaryStats {
    double mean = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quartiles use linear interpolation between order statistics.
SummaryStats summarize(std::vector<double> values);

struct TrialSummary {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double algorithm_gain = 0.0;
    double comparator_gain = 0.0;
    double regret = 0.0;
    std::size_t bound_violations = 0;
};

struct ExperimentSummary {
    std::vector<TrialSummary> trials;
    SummaryStats regret;
    SummaryStats algorithm_gain;
};

/// Seed of trial i under a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

/// Runs every trial (concurrently when threads != 1). With a non-empty
/// config.out, writes trial_NNNN.csv per trial plus trials.csv and summary.csv.
ExperimentSummary run_experiment(const ExperimentConfig& config);

void write_trajectory(std::ostream& out, const TrialRecord& record);
void write_trials(std::ostream& out, const ExperimentSummary& summary);
void write_summary(std::ostream& out, const ExperimentSummary& summary);

} // namespace mabmp
