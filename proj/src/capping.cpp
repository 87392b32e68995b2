#include "mabmp/capping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mabmp/core.hpp"

namespace mabmp {

double cap_bound(std::size_t arms, std::size_t m, double gamma)
{
    return (1.0 / static_cast<double>(m) - gamma / static_cast<double>(arms)) / (1.0 - gamma);
}

CapResult cap_weights(std::span<const double> weights, std::size_t m, double gamma)
{
    const std::size_t K = weights.size();
    if (m == 0 || m >= K) {
        throw std::invalid_argument("cap_weights: need 1 <= m < K");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("cap_weights: gamma must lie in [0,1)");
    }
    for (std::size_t j = 0; j < K; ++j) {
        if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
            throw std::invalid_argument("cap_weights: weight " + std::to_string(j) +
                                        " is negative or not finite");
        }
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw std::invalid_argument("cap_weights: weights sum to " + std::to_string(sum) +
                                    ", expected 1");
    }

    CapResult result;
    result.weights.assign(weights.begin(), weights.end());
    for (double& w : result.weights) {
        w /= sum;
    }
    const std::vector<double>& v = result.weights;
    const double bound = cap_bound(K, m, gamma);

    if (*std::max_element(v.begin(), v.end()) < bound) {
        return result;
    }

    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

    // suffix[i] = mass of the K-i lightest arms, summed smallest first.
    std::vector<double> suffix(K + 1, 0.0);
    for (std::size_t i = K; i-- > 0;) {
        suffix[i] = suffix[i + 1] + v[order[i]];
    }

    // With the i heaviest arms capped at alpha and R the remaining mass,
    // alpha / (i*alpha + R) = bound  gives  alpha = bound*R / (1 - i*bound).
    for (std::size_t i = 1; i < K; ++i) {
        const double denom = 1.0 - static_cast<double>(i) * bound;
        if (denom <= 0.0) {
            break;
        }
        const double alpha = bound * suffix[i] / denom;
        if (alpha > 0.0 && v[order[i]] < alpha * (1.0 - kSumTolerance)) {
            result.alpha = alpha;
            result.capped.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i));
            std::sort(result.capped.begin(), result.capped.end());
            for (std::size_t arm : result.capped) {
                result.weights[arm] = alpha;
            }
            return result;
        }
    }
    // top weight sitting exactly on the bound already maps to p <= 1
    if (v[order[0]] <= bound * (1.0 + kSumTolerance)) {
        return result;
    }
    throw std::domain_error("cap_weights: no threshold exists; fewer than m arms carry "
                            "positive weight");
}

std::vector<double> marginals(const CapResult& cap, double gamma, std::size_t m)
{
    const std::size_t K = cap.weights.size();
    const double total = std::accumulate(cap.weights.begin(), cap.weights.end(), 0.0);
    const double md = static_cast<double>(m);
    std::vector<double> p(K);
    for (std::size_t j = 0; j < K; ++j) {
        p[j] = std::min(1.0, md * ((1.0 - gamma) * cap.weights[j] / total +
                                   gamma / static_cast<double>(K)));
    }
    for (std::size_t arm : cap.capped) {
        p[arm] = 1.0;
    }
    return p;
}

} // namespace mabmp
