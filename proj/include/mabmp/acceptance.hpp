#pragma once

// End-to-end acceptance checks. Each criterion runs at its full stated scale
// and tolerance and reports a single pass/fail line.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace mabmp {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id;
    std::string name;
    std::function<CriterionResult()> run;
};

/// All criteria in order (1..10).
std::vector<Criterion> acceptance_criteria();

/// Runs the criteria whose ids are listed (all when empty), calling
/// `report` after each one.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& report);

std::string format_result(const CriterionResult& result);

// Pinned thresholds.
inline constexpr double kEquivalenceTolerance = 1e-9;
inline constexpr double kMarginalTolerance = 0.01;
inline constexpr double kCapTolerance = 1e-9;
inline constexpr double kTrackingMargin = 0.2;
inline constexpr double kChanceArmMass = 0.5;
inline constexpr std::size_t kTrackingWindow = 500;
inline constexpr std::size_t kBoundPassesRequired = 99;
inline constexpr double kTrendFactor = 2.0;
inline constexpr double kDriftTolerance = 1e-9;

} // namespace mabmp
