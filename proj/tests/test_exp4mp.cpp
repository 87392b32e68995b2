#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mabmp/exp4mp.hpp"

using namespace mabmp;

namespace {

Exp4MPParams small(std::size_t K, std::size_t m, std::size_t experts, double gamma, double eta = 0.1)
{
    Exp4MPParams p;
    p.arms = K;
    p.m = m;
    p.experts = experts;
    p.horizon = 100;
    p.gamma = gamma;
    p.eta = eta;
    p.c = 0.0;
    return p;
}

AdviceMatrix two_indicators() { return AdviceMatrix::indicators(2); }

} // namespace

TEST_CASE("priors")
{
    Exp4MP uniform(small(3, 1, 3, 0.1));
    CHECK(uniform.weights() == std::vector<double>{1, 1, 1});
    Exp4MP given(small(2, 1, 2, 0.1), std::vector<double>{0.2, 0.8});
    CHECK(given.weights()[0] == doctest::Approx(0.2));
    CHECK(given.weights()[1] == doctest::Approx(0.8));
    CHECK_THROWS_AS(Exp4MP(small(2, 1, 2, 0.1), std::vector<double>{0, 1}), std::invalid_argument);
}

TEST_CASE("arm weights mix the advice")
{
    Exp4MP single(small(2, 1, 1, 0.1));
    const auto v1 = single.arm_weights(AdviceMatrix(1, 2, {0.2, 0.8}));
    CHECK(v1[0] == doctest::Approx(0.2));
    CHECK(v1[1] == doctest::Approx(0.8));

    Exp4MP even(small(2, 1, 2, 0.1));
    CHECK(even.arm_weights(two_indicators())[0] == doctest::Approx(0.5));

    Exp4MP skewed(small(2, 1, 2, 0.1), std::vector<double>{3, 1});
    const auto v = skewed.arm_weights(two_indicators());
    CHECK(v[0] == doctest::Approx(0.75));
    CHECK(v[1] == doctest::Approx(0.25));
}

TEST_CASE("select")
{
    Rng rng(1);
    Exp4MP sym(small(4, 2, 4, 0.0));
    for (double p : sym.select(AdviceMatrix::indicators(4), rng).marginals) CHECK(p == doctest::Approx(0.5));

    AdviceMatrix dominant(1, 3, {1, 0, 0});
    Exp4MP one(small(3, 1, 1, 0.0));
    const RoundOutcome out = one.select(dominant, rng);
    CHECK(out.marginals[0] == doctest::Approx(1.0));
    CHECK(out.marginals[1] == doctest::Approx(0.0));
    CHECK(out.selection == ArmSet{0});

    Exp4MP skewed(small(2, 1, 2, 0.1), std::vector<double>{3, 1});
    const RoundOutcome o = skewed.select(two_indicators(), rng);
    CHECK(o.marginals[0] == doctest::Approx(0.725));
    CHECK(o.marginals[1] == doctest::Approx(0.275));
}

TEST_CASE("gain estimates")
{
    const auto x = estimate_gains(ArmSet{0, 2}, std::vector<double>{0.5, 0.7},
                                  std::vector<double>{0.25, 0.5, 1.0});
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == 0.0);
    CHECK(x[2] == doctest::Approx(0.7));
    CHECK_THROWS_AS(estimate_gains(ArmSet{0}, std::vector<double>{0.5}, std::vector<double>{0.0, 1.0}),
                    std::logic_error);
}

TEST_CASE("expert statistics")
{
    const std::vector<std::size_t> none;
    {
        AdviceMatrix a(1, 2, {1, 0});
        const std::vector<std::size_t> capped{0};
        const auto s = expert_statistics(a, std::vector<double>{0.7, 0}, std::vector<double>{1, 0.5}, capped);
        CHECK(s.gain[0] == 0.0);
        CHECK(s.confidence[0] == 0.0);
    }
    {
        AdviceMatrix a(1, 2, {1, 0});
        const auto s = expert_statistics(a, std::vector<double>{2, 0}, std::vector<double>{0.25, 0.75}, none);
        CHECK(s.gain[0] == doctest::Approx(2));
        CHECK(s.confidence[0] == doctest::Approx(4));
    }
    {
        AdviceMatrix a(1, 2, {0.5, 0.5});
        const auto s = expert_statistics(a, std::vector<double>{2, 0}, std::vector<double>{0.25, 0.75}, none);
        CHECK(s.gain[0] == doctest::Approx(1));
        CHECK(s.confidence[0] == doctest::Approx(2.6667).epsilon(1e-4));
    }
}

TEST_CASE("update")
{
    {
        Exp4MP alg(small(2, 1, 2, 0.1, 0.0));
        alg.update(std::vector<double>{1, 0.3}, std::vector<double>{2, 1});
        const auto w = alg.weights();
        CHECK(w[0] / w[1] == doctest::Approx(1.0));
    }
    {
        Exp4MP alg(small(2, 1, 1, 0.1, 0.5));
        CHECK(alg.update(std::vector<double>{1}, std::vector<double>{0}));
        CHECK(alg.weights()[0] == doctest::Approx(1.6487).epsilon(1e-4));
    }
    {
        // c / sqrt(KT) = 0.05 with K = 2, T = 100
        Exp4MPParams p = small(2, 1, 2, 0.1, 0.1);
        p.c = 0.05 * std::sqrt(200.0);
        Exp4MP alg(p);
        CHECK(alg.update(std::vector<double>{1, 0}, std::vector<double>{2, 0}));
        const auto w = alg.weights();
        CHECK(w[0] / w[1] == doctest::Approx(std::exp(0.11)));
        CHECK(w[0] / w[1] == doctest::Approx(1.1163).epsilon(1e-4));
    }
    {
        Exp4MP alg(small(2, 1, 1, 0.1, 0.5));
        CHECK_FALSE(alg.update(std::vector<double>{3}, std::vector<double>{0}));
        CHECK(alg.bound_violations() == 1);
    }
}

TEST_CASE("uniform-prior parameters")
{
    const Exp4MPParams p = params_uniform(10, 5, 10000, 0.01, 10);
    CHECK(p.c == doctest::Approx(5.877).epsilon(1e-3));
    CHECK(p.gamma == doctest::Approx(0.011774).epsilon(1e-4));
    CHECK(p.eta == doctest::Approx(0.0029434).epsilon(1e-4));
    CHECK(p.eta == doctest::Approx(5 * p.gamma / 20));
    CHECK(p.horizon_condition_met);

    CHECK(params_uniform(2, 1, 100, 1.0, 1).c == 0.0);
    CHECK(params_uniform(10, 5, 1, 0.01, 10).gamma == 0.5);

    const Exp4MPParams v = vanilla_params(10, 5, 10000, 0.01);
    CHECK(v.gamma == p.gamma);
    CHECK(v.c == p.c);
    const Exp4MPParams tiny = vanilla_params(2, 1, 4, 1.0);
    CHECK(tiny.gamma == 0.5);
    CHECK(tiny.c == doctest::Approx(0.8326).epsilon(1e-4));
    CHECK_THROWS_AS(vanilla_params(3, 3, 10, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(params_uniform(3, 1, 10, 0.0, 3), std::invalid_argument);
}

TEST_CASE("uniform-prior bound")
{
    CHECK(bound_uniform(10, 5, 10000, 0.01, 10) == doctest::Approx(6106.1).epsilon(1e-4));
    CHECK(bound_uniform(2, 1, 100, 1.0, 1) == 0.0);
}

TEST_CASE("a short run keeps weights finite and positive")
{
    const Exp4MPParams p = params_uniform(4, 2, 200, 0.1, 4);
    Exp4MP alg(p);
    Rng rng(5);
    GainMatrix gains(200, 4);
    for (std::size_t t = 0; t < 200; ++t)
        for (std::size_t j = 0; j < 4; ++j) gains.set(t, j, j == 3 ? 1.0 : 0.1);
    const AdviceMatrix advice = AdviceMatrix::indicators(4);
    for (std::size_t t = 0; t < 200; ++t) {
        RoundOutcome out = alg.select(advice, rng);
        CHECK(out.selection.size() == 2);
        alg.observe(advice, out, FeedbackView(gains, t, out.selection));
    }
    const auto v = alg.arm_weights(advice);
    CHECK(v[3] > 0.5);
    CHECK_THROWS_AS(alg.select(advice, rng), std::logic_error);
}
