#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mabmp/environments.hpp"
#include "mabmp/exp3msp.hpp"
#include "mabmp/oracles.hpp"

using namespace mabmp;

TEST_CASE("best fixed m-arm")
{
    GainMatrix g(4, 5);
    for (std::size_t t = 0; t < 4; ++t)
        for (std::size_t j = 0; j < 2; ++j) g.set(t, j, 1.0);
    const auto fixed = best_fixed_marm(g, 2);
    CHECK(fixed.arms == ArmSet{0, 1});
    CHECK(fixed.gain == 8.0);

    CHECK(best_fixed_marm(GainMatrix(1, 3, {0.2, 0.9, 0.5}), 2).arms == ArmSet{1, 2});

    const auto small = best_fixed_marm(GainMatrix(2, 2, {0.9, 0.1, 0.2, 0.3}), 1);
    CHECK(small.arms == ArmSet{0});
    CHECK(small.gain == doctest::Approx(1.1));
}

TEST_CASE("best unconstrained")
{
    const GainMatrix constant(3, 3, {0.1, 0.5, 0.7, 0.1, 0.5, 0.7, 0.1, 0.5, 0.7});
    CHECK(best_unconstrained(constant, 2) == doctest::Approx(best_fixed_marm(constant, 2).gain));
    CHECK(best_unconstrained(GainMatrix(2, 2, {1, 0, 0, 1}), 1) == 2.0);
    CHECK(best_unconstrained(GainMatrix(2, 3, {0.5, 0.4, 0.1, 0.2, 0.3, 0.9}), 2) ==
          doctest::Approx(2.1));
}

TEST_CASE("segment dynamic program")
{
    Rng rng(11);
    GainMatrix g(7, 4);
    for (std::size_t t = 0; t < 7; ++t)
        for (std::size_t j = 0; j < 4; ++j) g.set(t, j, rng.uniform());
    CHECK(best_s_segment(g, 2, 1) == doctest::Approx(best_fixed_marm(g, 2).gain));
    CHECK(best_s_segment(g, 2, 7) == doctest::Approx(best_unconstrained(g, 2)));

    const PlantedGame sudden = sudden_change(10, 5, 10000);
    const SegmentSolution dp = best_s_segment_trace(sudden.gains, 5, 3);
    CHECK(dp.gain == 50000.0);
    CHECK(count_segments(dp.trace) == 3);
    CHECK(total_gain(dp.trace, sudden.gains) == 50000.0);
}

TEST_CASE("segment dynamic program against enumeration")
{
    Rng rng(12);
    for (int n = 0; n < 20; ++n) {
        const std::size_t K = 3, m = 1 + rng.below(2), T = 4;
        GainMatrix g(T, K);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < K; ++j) g.set(t, j, rng.uniform());
        const auto combos = enumerate_combinations(K, m);
        const std::size_t C = combos.size();
        for (std::size_t S = 1; S <= T; ++S) {
            double best = 0.0;
            std::size_t total = 1;
            for (std::size_t t = 0; t < T; ++t) total *= C;
            for (std::size_t code = 0; code < total; ++code) {
                StrategyTrace trace;
                for (std::size_t c = code, t = 0; t < T; ++t, c /= C) trace.push_back(combos[c % C]);
                if (count_segments(trace) <= S) best = std::max(best, total_gain(trace, g));
            }
            CHECK(best_s_segment(g, m, S) == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle guard")
{
    CHECK(binomial(30, 15) == 155117520);
    CHECK_THROWS_AS(best_s_segment(GainMatrix(2, 30), 15, 2), OracleGuardError);
    CHECK(enumerate_combinations(4, 2).size() == 6);
}

TEST_CASE("best expert combination")
{
    const GainMatrix g(2, 2, {1, 0, 0.5, 0.5});
    const std::vector<AdviceMatrix> advice(2, AdviceMatrix(3, 2, {1, 0, 0, 1, 0.5, 0.5}));
    // expert totals: 1.5, 0.5, 1.0
    CHECK(best_expert_combination(g, advice, 1) == doctest::Approx(1.5));
    CHECK(best_expert_combination(g, advice, 2) == doctest::Approx(2.5));
}

TEST_CASE("sequence priors")
{
    CHECK(prior_weight(std::vector<std::size_t>{2}, 4, 0.3) == doctest::Approx(0.25));
    CHECK(prior_weight(std::vector<std::size_t>{0, 0, 1}, 4, 0.3) == doctest::Approx(0.0175));
    CHECK(prior_weight(std::vector<std::size_t>{0, 1}, 3, 0.0) == 0.0);
}

TEST_CASE("enumerated learner")
{
    Exp3MSPParams p;
    p.arms = 2;
    p.m = 1;
    p.horizon = 2;
    p.eta = 0.0;
    p.gamma = 0.1;
    p.beta = 0.4;
    TraceLog log{{{0.5, 0.5}, ArmSet{0}, {}, {0.8}}, {{0.5, 0.5}, ArmSet{1}, {}, {0.2}}};
    const auto v = hypothetical_exp4mp(log, p);
    REQUIRE(v.size() == 2);
    CHECK(v[0][0] == doctest::Approx(0.5));
    CHECK(v[1][0] == doctest::Approx(0.5));
    CHECK(v[1][1] == doctest::Approx(0.5));

    TraceLog too_long(20, log[0]);
    CHECK_THROWS_AS(hypothetical_exp4mp(too_long, p), OracleGuardError);
}
