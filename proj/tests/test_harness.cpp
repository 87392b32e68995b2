#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mabmp/feedback.hpp"
#include "mabmp/harness.hpp"

using namespace mabmp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig quick(GameFamily game, Algorithm alg)
{
    ExperimentConfig c;
    c.game = game;
    c.algorithm = alg;
    c.arms = 6;
    c.m = 2;
    c.horizon = 300;
    c.segments = 3;
    c.trials = 3;
    c.seed = 42;
    return c;
}

} // namespace

TEST_CASE("chance frequencies")
{
    Rng rng(1);
    std::vector<double> hits(10, 0.0);
    const int rounds = 100000;
    for (int r = 0; r < rounds; ++r)
        for (std::size_t arm : chance_policy(10, 5, rng)) hits[arm] += 1;
    for (double h : hits) CHECK(std::abs(h / rounds - 0.5) <= 0.01);
    CHECK(chance_policy(4, 4, rng) == ArmSet{0, 1, 2, 3});
    int first = 0;
    for (int r = 0; r < rounds; ++r) first += chance_policy(2, 1, rng).contains(0);
    CHECK(std::abs(first / double(rounds) - 0.5) <= 0.01);
}

TEST_CASE("feedback is limited to played arms")
{
    const GainMatrix g(1, 3, {0.1, 0.2, 0.3});
    const ArmSet played{0, 2};
    const FeedbackView view(g, 0, played);
    CHECK(view.gain(2) == doctest::Approx(0.3));
    CHECK_THROWS_AS(view.gain(1), FeedbackViolation);
    CHECK(view.observed() == std::vector<double>{0.1, 0.3});
}

TEST_CASE("zero-gain game")
{
    ExperimentConfig c = quick(GameFamily::sudden_change, Algorithm::exp3msp);
    c.horizon = 20;
    GameInstance game{GainMatrix(20, 6), std::nullopt, StrategyTrace(20, ArmSet{0, 1})};
    const TrialRecord r = play(c, game, 3);
    CHECK(r.algorithm_cumulative.back() == 0.0);
    CHECK(r.final_regret() == r.comparator_cumulative.back());
}

TEST_CASE("planted comparator collects the full game")
{
    ExperimentConfig c = quick(GameFamily::sudden_change, Algorithm::chance);
    const TrialRecord r = run_trial(c, 5);
    CHECK(r.comparator_cumulative.back() == 2.0 * 300);
    for (std::size_t t = 1; t < r.algorithm_cumulative.size(); ++t)
        CHECK(r.algorithm_cumulative[t] >= r.algorithm_cumulative[t - 1]);
}

TEST_CASE("component errors carry the round")
{
    ExperimentConfig c = quick(GameFamily::experts, Algorithm::exp4mp);
    c.horizon = 5;
    AdviceStream advice(5, AdviceMatrix::indicators(6));
    advice[2](0, 0) = 0.5;
    GameInstance game{GainMatrix(5, 6), advice, StrategyTrace(5, ArmSet{0, 1})};
    try {
        play(c, game, 1);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).rfind("round 3:", 0) == 0);
    }
}

TEST_CASE("every family runs")
{
    for (GameFamily g : {GameFamily::bernoulli_shift, GameFamily::experts, GameFamily::sudden_change,
                         GameFamily::random_change})
        for (Algorithm a : {Algorithm::exp4mp, Algorithm::exp3msp, Algorithm::chance}) {
            ExperimentConfig c = quick(g, a);
            if (g == GameFamily::bernoulli_shift) c.epsilon = 0.1;
            const ExperimentSummary s = run_experiment(c);
            CHECK(s.trials.size() == 3);
            CHECK(std::isfinite(s.regret.mean));
        }
}

TEST_CASE("latency family")
{
    const fs::path dir = fs::temp_directory_path() / "mabmp_latency_test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "lat.csv");
        out << "s1,s2,s3,s4\n";
        for (int t = 0; t < 40; ++t) out << (t < 20 ? 100 : 900) << ",500," << (t < 20 ? 900 : 100) << ",\n";
    }
    ExperimentConfig c = quick(GameFamily::latency, Algorithm::exp3msp);
    c.arms = 3;
    c.m = 1;
    c.horizon = 40;
    c.segments = 2;
    c.latency_file = dir / "lat.csv";
    const ExperimentSummary s = run_experiment(c);
    CHECK(s.trials.size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("summary statistics")
{
    const SummaryStats s = summarize({4, 1, 3, 2});
    CHECK(s.mean == 2.5);
    CHECK(s.min == 1);
    CHECK(s.max == 4);
    CHECK(s.q1 == doctest::Approx(1.75));
    CHECK(s.median == doctest::Approx(2.5));
    CHECK(s.q3 == doctest::Approx(3.25));
    CHECK_THROWS(summarize({}));
}

TEST_CASE("csv output is reproducible and independent of thread count")
{
    const fs::path base = fs::temp_directory_path() / "mabmp_csv_test";
    fs::remove_all(base);
    ExperimentConfig c = quick(GameFamily::random_change, Algorithm::exp3msp);
    c.record_marginals = true;
    c.out = base / "a";
    c.threads = 1;
    run_experiment(c);
    c.out = base / "b";
    c.threads = 3;
    run_experiment(c);
    for (const char* name : {"trial_0001.csv", "trial_0003.csv", "trials.csv", "summary.csv"}) {
        CHECK(fs::exists(base / "a" / name));
        CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
    }
    const std::string head = slurp(base / "a" / "trial_0001.csv").substr(0, 60);
    CHECK(head.rfind("round,alg_gain_cum,comp_gain_cum,regret,p_1", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("config validation")
{
    ExperimentConfig c;
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.delta = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ExperimentConfig{};
    c.game = GameFamily::latency;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS(parse_algorithm("exp3"));
    CHECK(parse_game_family("sudden") == GameFamily::sudden_change);
}
