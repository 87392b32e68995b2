#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mabmp/core.hpp"
#include "mabmp/sampling.hpp"

using namespace mabmp;

TEST_CASE("integral marginals are returned as is")
{
    Rng rng(1);
    for (int i = 0; i < 20; ++i) CHECK(depround(2, std::vector<double>{1, 0, 1}, rng) == ArmSet{0, 2});
}

TEST_CASE("m = 1 on a fair coin")
{
    Rng rng(2);
    int first = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const ArmSet s = depround(1, std::vector<double>{0.5, 0.5}, rng);
        REQUIRE(s.size() == 1);
        first += s.contains(0);
    }
    CHECK(std::abs(first / double(draws) - 0.5) <= 0.01);
}

TEST_CASE("pair step preserves expectation")
{
    for (auto [pi, pj] : {std::pair{0.3, 0.4}, {0.9, 0.6}, {0.2, 0.9}, {0.5, 0.5}}) {
        const PairStep s = pair_step(pi, pj);
        const double q = s.prob_first;
        const double expect_i = q * (pi + s.alpha) + (1 - q) * (pi - s.beta);
        const double expect_j = q * (pj - s.alpha) + (1 - q) * (pj + s.beta);
        CHECK(expect_i == doctest::Approx(pi).epsilon(1e-14));
        CHECK(expect_j == doctest::Approx(pj).epsilon(1e-14));
        // one branch drives an entry to 0 or 1
        const bool a_hits = std::abs(pi + s.alpha - 1) < 1e-12 || std::abs(pj - s.alpha) < 1e-12;
        const bool b_hits = std::abs(pi - s.beta) < 1e-12 || std::abs(pj + s.beta - 1) < 1e-12;
        CHECK(a_hits);
        CHECK(b_hits);
    }
}

TEST_CASE("working vector keeps its sum and range")
{
    Rng rng(4);
    const std::vector<double> p{0.3, 0.7, 0.25, 0.75, 0.5, 0.5};
    int steps = 0;
    for (int i = 0; i < 1000; ++i) {
        steps = 0;
        const ArmSet s = depround(3, p, rng, [&](std::span<const double> w) {
            double total = 0;
            for (double x : w) {
                CHECK(x >= -1e-12);
                CHECK(x <= 1 + 1e-12);
                total += x;
            }
            CHECK(total == doctest::Approx(3.0).epsilon(1e-9));
            ++steps;
        });
        CHECK(s.size() == 3);
        CHECK(steps <= static_cast<int>(p.size()));
    }
}

TEST_CASE("invalid marginals are rejected")
{
    Rng rng(1);
    CHECK_THROWS_AS(depround(2, std::vector<double>{0.5, 0.5, 0.5}, rng), std::invalid_argument);
    CHECK_THROWS_AS(depround(1, std::vector<double>{1.5, -0.5}, rng), std::invalid_argument);
    CHECK_THROWS_AS(depround(3, std::vector<double>{1, 1}, rng), std::invalid_argument);
}
