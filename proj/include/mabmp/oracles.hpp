#pragma once

// Brute-force and closed-form comparators used to score the learners and to
// certify the weight-sharing shortcut against exhaustive enumeration.

#include <cstddef>
#include <span>
#include <vector>

#include "mabmp/core.hpp"
#include "mabmp/exp3msp.hpp"

namespace mabmp {

/// Largest C(K,m) the segment DP will enumerate.
inline constexpr std::size_t kMaxCombinations = 1'000'000;
/// Largest K^T the hypothetical sequence run will enumerate.
inline constexpr std::size_t kMaxSequences = 1'000'000;

/// Thrown when an exhaustive oracle would exceed its enumeration guard.
class OracleGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct FixedArmSolution {
    ArmSet arms;
    double gain = 0.0;
};

/// The m arms with the largest column sums (ties go to the lower index).
FixedArmSolution best_fixed_marm(const GainMatrix& gains, std::size_t m);

/// Sum over rounds of the m largest gains in that round.
double best_unconstrained(const GainMatrix& gains, std::size_t m);

struct SegmentSolution {
    double gain = 0.0;
    StrategyTrace trace;
};

/// Best total gain of an m-arm strategy with at most S segments.
double best_s_segment(const GainMatrix& gains, std::size_t m, std::size_t segments);

/// Same optimum, with a strategy that attains it.
SegmentSolution best_s_segment_trace(const GainMatrix& gains, std::size_t m, std::size_t segments);

/// Best sum of m underlying experts' total gains, max over A of sum_{i in A} G_i
/// with G_i = sum_t zeta^i(t) . x(t).
double best_expert_combination(const GainMatrix& gains, std::span<const AdviceMatrix> advice,
                               std::size_t m);

/// Prior of a single-arm sequence: 1/K for the first arm, then (1 - beta)
/// per stay and beta/(K-1) per switch.
double prior_weight(std::span<const std::size_t> sequence, std::size_t arms, double beta);

/// Factor that extends a prior by one more arm.
double prior_factor(std::size_t previous, std::size_t next, std::size_t arms, double beta);

/// One logged round of a capped learner, enough to replay its estimates.
struct TraceRound {
    std::vector<double> marginals;
    ArmSet selection;
    std::vector<std::size_t> capped;
    std::vector<double> observed; ///< aligned with selection.members()
};

using TraceLog = std::vector<TraceRound>;

/// Arm weights of Exp4.MP run over all K^T single-arm sequences with the
/// sequential prior, replaying `trace`. Entry t (0-based) is the weight vector
/// used at round t + 1. Requires K^T <= kMaxSequences.
std::vector<std::vector<double>> hypothetical_exp4mp(const TraceLog& trace,
                                                     const Exp3MSPParams& params);

/// All m-subsets of [0, K) in lexicographic order.
std::vector<ArmSet> enumerate_combinations(std::size_t arms, std::size_t m);

/// C(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

} // namespace mabmp
