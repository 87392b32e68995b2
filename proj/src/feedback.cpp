#include "mabmp/feedback.hpp"

#include <string>

namespace mabmp {

double FeedbackView::gain(std::size_t arm) const
{
    if (!selection_.contains(arm)) {
        throw FeedbackViolation("gain of unplayed arm " + std::to_string(arm + 1) +
                                " requested at round " + std::to_string(round_ + 1));
    }
    return gains_(round_, arm);
}

std::vector<double> FeedbackView::observed() const
{
    std::vector<double> values;
    values.reserve(selection_.size());
    for (std::size_t arm : selection_) {
        values.push_back(gain(arm));
    }
    return values;
}

std::vector<double> estimate_gains(const ArmSet& selection, std::span<const double> observed,
                                   std::span<const double> marginals)
{
    if (observed.size() != selection.size()) {
        throw std::invalid_argument("estimate_gains: one observation per selected arm expected");
    }
    std::vector<double> x_hat(marginals.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t arm : selection) {
        if (arm >= marginals.size()) {
            throw std::invalid_argument("estimate_gains: arm index out of range");
        }
        if (!(marginals[arm] > 0.0)) {
            throw std::logic_error("estimate_gains: arm " + std::to_string(arm + 1) +
                                   " was played with zero probability");
        }
        x_hat[arm] = observed[k++] / marginals[arm];
    }
    return x_hat;
}

} // namespace mabmp
