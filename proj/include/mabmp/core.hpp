#pragma once

// Shared domain types for the multiple-play bandit library.
//
// Arms are stored 0-based (arm 0 .. K-1). Anything printed for humans
// (CSV column names, CLI output) uses 1-based labels.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mabmp {

/// Tolerance for every simplex-style sum (advice, marginals, arm weights).
inline constexpr double kSumTolerance = 1e-9;

/// Which constraint an advice or marginal vector broke.
struct Violation {
    std::string message;
    std::optional<std::size_t> index;
};

/// A set of distinct arm indices, kept sorted so that equality ignores
/// the order in which arms were inserted.
class ArmSet {
public:
    ArmSet() = default;
    explicit ArmSet(std::vector<std::size_t> members);
    ArmSet(std::initializer_list<std::size_t> members);

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::size_t arm) const;

    const std::vector<std::size_t>& members() const { return members_; }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend bool operator==(const ArmSet&, const ArmSet&) = default;

private:
    std::vector<std::size_t> members_;
};

/// T x K table of gains in [0,1]; row t is the adversary's gain vector at round t.
class GainMatrix {
public:
    GainMatrix() = default;
    GainMatrix(std::size_t rounds, std::size_t arms);
    GainMatrix(std::size_t rounds, std::size_t arms, std::vector<double> values);

    std::size_t rounds() const { return rounds_; }
    std::size_t arms() const { return arms_; }

    double operator()(std::size_t t, std::size_t arm) const { return data_[t * arms_ + arm]; }
    void set(std::size_t t, std::size_t arm, double gain);

    std::span<const double> row(std::size_t t) const;
    std::span<double> mutable_row(std::size_t t);

private:
    std::size_t rounds_ = 0;
    std::size_t arms_ = 0;
    std::vector<double> data_;
};

/// N_r x K matrix of underlying advice for one round; row i is expert i.
class AdviceMatrix {
public:
    AdviceMatrix() = default;
    AdviceMatrix(std::size_t experts, std::size_t arms);
    AdviceMatrix(std::size_t experts, std::size_t arms, std::vector<double> values);

    /// One indicator expert per arm.
    static AdviceMatrix indicators(std::size_t arms);

    std::size_t experts() const { return experts_; }
    std::size_t arms() const { return arms_; }

    double operator()(std::size_t expert, std::size_t arm) const
    {
        return data_[expert * arms_ + arm];
    }
    double& operator()(std::size_t expert, std::size_t arm) { return data_[expert * arms_ + arm]; }

    std::span<const double> row(std::size_t expert) const;

    /// First offending row, if any row is not valid underlying advice.
    std::optional<Violation> validate() const;

private:
    std::size_t experts_ = 0;
    std::size_t arms_ = 0;
    std::vector<double> data_;
};

/// A deterministic m-arm strategy: one selection per round.
using StrategyTrace = std::vector<ArmSet>;

/// Actual advice / marginal vectors: entries in [0,1], summing to m.
std::optional<Violation> validate_actual_advice(std::span<const double> advice, std::size_t m);

/// Underlying advice: entries in [0,1], summing to 1.
std::optional<Violation> validate_underlying_advice(std::span<const double> advice);

double total_gain(const StrategyTrace& trace, const GainMatrix& gains);

/// 1 + number of rounds whose selection differs from the previous round's.
std::size_t count_segments(const StrategyTrace& trace);

inline double regret(double comparator_gain, double algorithm_gain)
{
    return comparator_gain - algorithm_gain;
}

/// Seeded pseudo-random stream (mt19937_64). Reproducible within this
/// implementation only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform draw in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n)
    {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Independent child seed for stream `index` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniformly random m-subset of [0, K).
ArmSet random_subset(std::size_t arms, std::size_t m, Rng& rng);

} // namespace mabmp
