#pragma once

// Dependent rounding: draw exactly m distinct arms so that arm j is
// included with probability p_j.

#include <cstddef>
#include <functional>
#include <span>

#include "mabmp/core.hpp"

namespace mabmp {

/// Entries within this distance of 0 or 1 count as resolved.
inline constexpr double kIntegralTolerance = 1e-9;

/// Step sizes and branch probability of one pair update on (p_i, p_j).
/// With probability `prob_first` the pair moves to (p_i + alpha, p_j - alpha),
/// otherwise to (p_i - beta, p_j + beta).
struct PairStep {
    double alpha;
    double beta;
    double prob_first;
};

PairStep pair_step(double p_i, double p_j);

/// Called after every pair update with the current working vector.
using DepRoundObserver = std::function<void(std::span<const double>)>;

/// Throws std::invalid_argument when p is not a valid marginal vector for m.
ArmSet depround(std::size_t m, std::span<const double> marginals, Rng& rng,
                const DepRoundObserver& observer = {});

} // namespace mabmp
