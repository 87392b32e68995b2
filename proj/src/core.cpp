#include "mabmp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mabmp {

ArmSet::ArmSet(std::vector<std::size_t> members) : members_(std::move(members))
{
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw std::invalid_argument("ArmSet: duplicate arm index");
    }
}

ArmSet::ArmSet(std::initializer_list<std::size_t> members)
    : ArmSet(std::vector<std::size_t>(members))
{
}

bool ArmSet::contains(std::size_t arm) const
{
    return std::binary_search(members_.begin(), members_.end(), arm);
}

GainMatrix::GainMatrix(std::size_t rounds, std::size_t arms)
    : rounds_(rounds), arms_(arms), data_(rounds * arms, 0.0)
{
    if (rounds == 0 || arms == 0) {
        throw std::invalid_argument("GainMatrix: dimensions must be positive");
    }
}

GainMatrix::GainMatrix(std::size_t rounds, std::size_t arms, std::vector<double> values)
    : rounds_(rounds), arms_(arms), data_(std::move(values))
{
    if (rounds == 0 || arms == 0) {
        throw std::invalid_argument("GainMatrix: dimensions must be positive");
    }
    if (data_.size() != rounds * arms) {
        throw std::invalid_argument("GainMatrix: value count does not match T*K");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!(data_[i] >= 0.0 && data_[i] <= 1.0)) {
            throw std::invalid_argument("GainMatrix: gain outside [0,1] at round " +
                                        std::to_string(i / arms + 1) + ", arm " +
                                        std::to_string(i % arms + 1));
        }
    }
}

void GainMatrix::set(std::size_t t, std::size_t arm, double gain)
{
    if (!(gain >= 0.0 && gain <= 1.0)) {
        throw std::invalid_argument("GainMatrix: gain outside [0,1]");
    }
    data_.at(t * arms_ + arm) = gain;
}

std::span<const double> GainMatrix::row(std::size_t t) const
{
    return std::span<const double>(data_).subspan(t * arms_, arms_);
}

std::span<double> GainMatrix::mutable_row(std::size_t t)
{
    return std::span<double>(data_).subspan(t * arms_, arms_);
}

AdviceMatrix::AdviceMatrix(std::size_t experts, std::size_t arms)
    : experts_(experts), arms_(arms), data_(experts * arms, 0.0)
{
    if (experts == 0 || arms == 0) {
        throw std::invalid_argument("AdviceMatrix: dimensions must be positive");
    }
}

AdviceMatrix::AdviceMatrix(std::size_t experts, std::size_t arms, std::vector<double> values)
    : experts_(experts), arms_(arms), data_(std::move(values))
{
    if (experts == 0 || arms == 0) {
        throw std::invalid_argument("AdviceMatrix: dimensions must be positive");
    }
    if (data_.size() != experts * arms) {
        throw std::invalid_argument("AdviceMatrix: value count does not match N_r*K");
    }
}

AdviceMatrix AdviceMatrix::indicators(std::size_t arms)
{
    AdviceMatrix advice(arms, arms);
    for (std::size_t j = 0; j < arms; ++j) {
        advice(j, j) = 1.0;
    }
    return advice;
}

std::span<const double> AdviceMatrix::row(std::size_t expert) const
{
    return std::span<const double>(data_).subspan(expert * arms_, arms_);
}

std::optional<Violation> AdviceMatrix::validate() const
{
    for (std::size_t i = 0; i < experts_; ++i) {
        if (auto bad = validate_underlying_advice(row(i))) {
            bad->message = "expert " + std::to_string(i) + ": " + bad->message;
            bad->index = i;
            return bad;
        }
    }
    return std::nullopt;
}

namespace {

std::optional<Violation> check_simplex(std::span<const double> values, double target)
{
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!(values[j] >= 0.0)) {
            return Violation{"entry " + std::to_string(j) + " is negative", j};
        }
        if (!(values[j] <= 1.0)) {
            return Violation{"entry " + std::to_string(j) + " exceeds 1", j};
        }
    }
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    if (std::abs(sum - target) > kSumTolerance) {
        return Violation{"entries sum to " + std::to_string(sum) + ", expected " +
                             std::to_string(target),
                         std::nullopt};
    }
    return std::nullopt;
}

} // namespace

std::optional<Violation> validate_actual_advice(std::span<const double> advice, std::size_t m)
{
    if (advice.empty()) {
        return Violation{"advice vector is empty", std::nullopt};
    }
    return check_simplex(advice, static_cast<double>(m));
}

std::optional<Violation> validate_underlying_advice(std::span<const double> advice)
{
    if (advice.empty()) {
        return Violation{"advice vector is empty", std::nullopt};
    }
    return check_simplex(advice, 1.0);
}

double total_gain(const StrategyTrace& trace, const GainMatrix& gains)
{
    if (trace.size() != gains.rounds()) {
        throw std::invalid_argument("total_gain: trace length " + std::to_string(trace.size()) +
                                    " does not match T=" + std::to_string(gains.rounds()));
    }
    double total = 0.0;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        for (std::size_t arm : trace[t]) {
            if (arm >= gains.arms()) {
                throw std::invalid_argument("total_gain: arm index out of range");
            }
            total += gains(t, arm);
        }
    }
    return total;
}

std::size_t count_segments(const StrategyTrace& trace)
{
    if (trace.empty()) {
        throw std::invalid_argument("count_segments: empty trace");
    }
    std::size_t segments = 1;
    for (std::size_t t = 1; t < trace.size(); ++t) {
        if (trace[t] != trace[t - 1]) {
            ++segments;
        }
    }
    return segments;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ArmSet random_subset(std::size_t arms, std::size_t m, Rng& rng)
{
    if (m > arms) {
        throw std::invalid_argument("random_subset: m exceeds K");
    }
    std::vector<std::size_t> pool(arms);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // partial Fisher-Yates
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t pick = i + rng.below(arms - i);
        std::swap(pool[i], pool[pick]);
    }
    pool.resize(m);
    return ArmSet(std::move(pool));
}

} // namespace mabmp
