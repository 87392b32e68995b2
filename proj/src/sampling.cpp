#include "mabmp/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mabmp {

namespace {

bool is_fractional(double p)
{
    return p > kIntegralTolerance && p < 1.0 - kIntegralTolerance;
}

double snap(double p)
{
    if (p <= kIntegralTolerance) return 0.0;
    if (p >= 1.0 - kIntegralTolerance) return 1.0;
    return p;
}

// Index of the first fractional entry at or after `from`, or size() if none.
std::size_t next_fractional(const std::vector<double>& p, std::size_t from)
{
    while (from < p.size() && !is_fractional(p[from])) {
        ++from;
    }
    return from;
}

} // namespace

PairStep pair_step(double p_i, double p_j)
{
    const double alpha = std::min(1.0 - p_i, p_j);
    const double beta = std::min(p_i, 1.0 - p_j);
    const double total = alpha + beta;
    return {alpha, beta, total > 0.0 ? beta / total : 0.0};
}

ArmSet depround(std::size_t m, std::span<const double> marginals, Rng& rng,
                const DepRoundObserver& observer)
{
    if (auto bad = validate_actual_advice(marginals, m)) {
        throw std::invalid_argument("depround: invalid marginals: " + bad->message);
    }

    std::vector<double> p(marginals.begin(), marginals.end());
    for (double& x : p) {
        x = snap(x);
    }

    std::size_t i = next_fractional(p, 0);
    while (i < p.size()) {
        std::size_t j = next_fractional(p, i + 1);
        if (j == p.size()) {
            // A lone fractional entry is rounding residue; the sum is integral.
            p[i] = std::round(p[i]);
            break;
        }
        const PairStep step = pair_step(p[i], p[j]);
        if (step.alpha + step.beta > 0.0) {
            if (rng.uniform() < step.prob_first) {
                p[i] += step.alpha;
                p[j] -= step.alpha;
            } else {
                p[i] -= step.beta;
                p[j] += step.beta;
            }
        }
        p[i] = snap(p[i]);
        p[j] = snap(p[j]);
        if (observer) {
            observer(p);
        }
        i = next_fractional(p, i);
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(m);
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] > 0.5) {
            chosen.push_back(k);
        }
    }
    if (chosen.size() != m) {
        throw std::logic_error("depround: rounded to " + std::to_string(chosen.size()) +
                               " arms, expected " + std::to_string(m));
    }
    return ArmSet(std::move(chosen));
}

} // namespace mabmp
