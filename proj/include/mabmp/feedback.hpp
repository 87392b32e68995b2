#pragma once

// Semi-bandit feedback: what a learner sees after choosing its m arms.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mabmp/core.hpp"

namespace mabmp {

/// One round of a capped exponential-weights learner.
struct RoundOutcome {
    ArmSet selection;
    std::vector<double> marginals;
    std::vector<std::size_t> capped;
    std::vector<double> x_hat; ///< filled in once gains are observed
};

/// Thrown when a learner asks for the gain of an arm it did not play.
class FeedbackViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Read access to one round's gains, restricted to the selected arms.
class FeedbackView {
public:
    FeedbackView(const GainMatrix& gains, std::size_t round, const ArmSet& selection)
        : gains_(gains), round_(round), selection_(selection)
    {
    }

    double gain(std::size_t arm) const;

    /// Gains of the selected arms, in the order of selection.members().
    std::vector<double> observed() const;

    const ArmSet& selection() const { return selection_; }

private:
    const GainMatrix& gains_;
    std::size_t round_;
    const ArmSet& selection_;
};

/// x_hat_j = x_j / p_j for played arms, 0 elsewhere. `observed` is aligned
/// with selection.members().
std::vector<double> estimate_gains(const ArmSet& selection, std::span<const double> observed,
                                   std::span<const double> marginals);

} // namespace mabmp
