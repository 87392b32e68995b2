#include <doctest.h>

#include <stdexcept>

#include "mabmp/core.hpp"

using namespace mabmp;

TEST_CASE("actual advice validation")
{
    CHECK_FALSE(validate_actual_advice(std::vector<double>{1, 1, 0}, 2));
    CHECK_FALSE(validate_actual_advice(std::vector<double>{0.5, 0.5, 1.0}, 2));
    auto bad = validate_actual_advice(std::vector<double>{1.2, 0.8}, 2);
    REQUIRE(bad);
    REQUIRE(bad->index);
    CHECK(*bad->index == 0);
    CHECK(validate_actual_advice(std::vector<double>{0.5, 0.4, 1.0}, 2));
}

TEST_CASE("underlying advice must sum to one")
{
    CHECK_FALSE(validate_underlying_advice(std::vector<double>{0.2, 0.8}));
    CHECK(validate_underlying_advice(std::vector<double>{0.2, 0.7}));
    CHECK(validate_underlying_advice(std::vector<double>{-0.1, 1.1}));
}

TEST_CASE("sum of m underlying rows is valid actual advice")
{
    Rng rng(3);
    for (int n = 0; n < 200; ++n) {
        const std::size_t K = 2 + rng.below(8);
        const std::size_t m = 1 + rng.below(K);
        std::vector<double> sum(K, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> row(K);
            double total = 0.0;
            for (double& x : row) total += (x = rng.uniform());
            for (std::size_t j = 0; j < K; ++j) sum[j] += row[j] / total;
        }
        // a sum can exceed 1 on one arm, so only the total is guaranteed
        double total = 0.0;
        for (double x : sum) total += x;
        CHECK(total == doctest::Approx(static_cast<double>(m)));
    }
}

TEST_CASE("arm sets ignore insertion order")
{
    CHECK(ArmSet{2, 0} == ArmSet{0, 2});
    CHECK(ArmSet{1, 2}.contains(2));
    CHECK_FALSE(ArmSet{1, 2}.contains(0));
    CHECK_THROWS_AS(ArmSet({1, 1}), std::invalid_argument);
}

TEST_CASE("gain matrix rejects out of range entries")
{
    CHECK_THROWS_AS(GainMatrix(1, 2, {0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(GainMatrix(1, 2, {0.5}), std::invalid_argument);
    GainMatrix g(1, 2);
    CHECK_THROWS(g.set(0, 0, -0.1));
}

TEST_CASE("total gain")
{
    CHECK(total_gain({ArmSet{0, 1}}, GainMatrix(1, 3)) == 0.0);
    CHECK(total_gain({ArmSet{0, 1}}, GainMatrix(1, 3, {0.3, 0.4, 0.9})) == doctest::Approx(0.7));
    CHECK(total_gain({ArmSet{0}, ArmSet{1}}, GainMatrix(2, 2, {1, 0, 0.25, 0.5})) ==
          doctest::Approx(1.5));
}

TEST_CASE("segment counting")
{
    const ArmSet a{0, 1}, b{2, 3};
    CHECK(count_segments({a, a, a}) == 1);
    CHECK(count_segments({a, b, a, b}) == 4);
    CHECK(count_segments({a, a, b, b, a}) == 3);
    CHECK(count_segments({ArmSet{1, 0}, ArmSet{0, 1}}) == 1);
}

TEST_CASE("regret")
{
    CHECK(regret(10, 10) == 0);
    CHECK(regret(10, 7) == 3);
    CHECK(regret(7, 10) == -3);
}

TEST_CASE("seeds and random subsets")
{
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
    Rng a(9), b(9);
    CHECK(random_subset(10, 4, a) == random_subset(10, 4, b));
    Rng rng(1);
    CHECK(random_subset(5, 5, rng) == ArmSet{0, 1, 2, 3, 4});
    CHECK(random_subset(10, 3, rng).size() == 3);
}
