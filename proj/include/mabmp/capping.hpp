#pragma once

// Weight capping: keeps every marginal probability at most 1 by flattening
// the heaviest arm weights to a common threshold alpha.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mabmp {

struct CapResult {
    std::optional<double> alpha;     ///< absent when no arm needed capping
    std::vector<std::size_t> capped; ///< sorted indices of capped arms
    std::vector<double> weights;     ///< capped weights v'
};

/// ((1/m) - (gamma/K)) / (1 - gamma): the largest normalized weight an arm
/// can carry without its marginal exceeding 1.
double cap_bound(std::size_t arms, std::size_t m, double gamma);

/// Caps a weight vector summing to 1. Sorts once, then grows the number of
/// capped arms until the largest uncapped weight falls below the threshold.
/// Weights tied with the threshold (relative difference below 1e-9) are capped.
CapResult cap_weights(std::span<const double> weights, std::size_t m, double gamma);

/// p_j = m((1-gamma) v'_j / sum v' + gamma/K). Capped arms get exactly 1.
std::vector<double> marginals(const CapResult& cap, double gamma, std::size_t m);

} // namespace mabmp
