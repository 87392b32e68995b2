#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mabmp/acceptance.hpp"
#include "mabmp/environments.hpp"
#include "mabmp/harness.hpp"
#include "mabmp/oracles.hpp"

namespace {

void print_stats(const char* label, const mabmp::SummaryStats& s)
{
    std::printf("%-9s mean %.6g  min %.6g  q1 %.6g  median %.6g  q3 %.6g  max %.6g\n", label,
                s.mean, s.min, s.q1, s.median, s.q3, s.max);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adversarial multiple-play bandit simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key=value file; a [run] section takes the run flags by long name");

    // run
    auto* run = app.add_subcommand("run", "Run seeded trials of one algorithm on one game family");
    std::string game = "sudden", alg = "exp3msp";
    mabmp::ExperimentConfig config;
    std::string out, latency;
    std::optional<double> eta, gamma, beta, c;
    run->add_option("--game", game, "bernoulli | experts | sudden | random | latency")->capture_default_str();
    run->add_option("--alg", alg, "exp4mp | exp3msp | chance")->capture_default_str();
    run->add_option("--K", config.arms, "Number of arms")->capture_default_str();
    run->add_option("--m", config.m, "Arms played per round")->capture_default_str();
    run->add_option("--T", config.horizon, "Rounds")->capture_default_str();
    run->add_option("--S", config.segments, "Segments of the switching comparator")->capture_default_str();
    run->add_option("--delta", config.delta, "Confidence level")->capture_default_str();
    run->add_option("--epsilon", config.epsilon, "Gap of the Bernoulli game")->capture_default_str();
    run->add_option("--trials", config.trials, "Independent trials")->capture_default_str();
    run->add_option("--seed", config.seed, "Master seed")->capture_default_str();
    run->add_option("--out", out, "Output directory for CSV files");
    run->add_option("--latency-file", latency, "Latency table (CSV or TSV) for --game latency");
    run->add_option("--eta", eta, "Override learning rate");
    run->add_option("--gamma", gamma, "Override exploration rate");
    run->add_option("--beta", beta, "Override sharing rate");
    run->add_option("--c", c, "Override confidence coefficient");
    run->add_flag("--marginals", config.record_marginals, "Write per-arm marginals p_1..p_K");
    run->add_option("--threads", config.threads, "Worker threads (0 = all cores)")->capture_default_str();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Compute comparator gains for a gain table");
    std::string gains_path;
    std::size_t oracle_m = 1, oracle_s = 1;
    oracle->add_option("gains", gains_path, "CSV gain table, one row per round")->required();
    oracle->add_option("--m", oracle_m, "Arms per round")->capture_default_str();
    oracle->add_option("--S", oracle_s, "Segments for the switching comparator")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
    std::vector<int> ids;
    verify->add_option("--only", ids, "Criterion ids to run (default all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            config.game = mabmp::parse_game_family(game);
            config.algorithm = mabmp::parse_algorithm(alg);
            config.out = out;
            config.latency_file = latency;
            config.overrides = {eta, gamma, beta, c};
            const mabmp::ExperimentSummary summary = mabmp::run_experiment(config);
            std::printf("%s on %s: K=%zu m=%zu T=%zu trials=%zu seed=%llu\n",
                        mabmp::to_string(config.algorithm).c_str(),
                        mabmp::to_string(config.game).c_str(), config.arms, config.m,
                        config.horizon, config.trials,
                        static_cast<unsigned long long>(config.seed));
            print_stats("regret", summary.regret);
            print_stats("gain", summary.algorithm_gain);
            if (!out.empty()) std::printf("wrote %s\n", out.c_str());
        } else if (*oracle) {
            const mabmp::GainMatrix gains = mabmp::load_gain_table(gains_path);
            const auto fixed = mabmp::best_fixed_marm(gains, oracle_m);
            std::printf("rounds %zu arms %zu m %zu\n", gains.rounds(), gains.arms(), oracle_m);
            std::printf("best_fixed %.10g arms", fixed.gain);
            for (std::size_t arm : fixed.arms) std::printf(" %zu", arm + 1);
            std::printf("\n");
            std::printf("best_unconstrained %.10g\n", mabmp::best_unconstrained(gains, oracle_m));
            std::printf("best_s_segment S=%zu %.10g\n", oracle_s,
                        mabmp::best_s_segment(gains, oracle_m, oracle_s));
        } else if (*verify) {
            bool all = true;
            mabmp::run_acceptance(ids, [&](const mabmp::CriterionResult& r) {
                std::printf("%s\n", mabmp::format_result(r).c_str());
                std::fflush(stdout);
                all = all && r.passed;
            });
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mabmp: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
