#pragma once

// Adversarial game generators and latency-table ingestion.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <vector>

#include "mabmp/core.hpp"

namespace mabmp {

/// Per-round advice for an expert game; entry t is round t's N_r x K matrix.
using AdviceStream = std::vector<AdviceMatrix>;

/// Bernoulli gains whose best m-arm flips halfway: the first m arms have mean
/// 0.5 + eps then 0.5 - eps, the others 0.5 - eps then 0.5 + 4 eps.
GainMatrix bernoulli_shift(std::size_t arms, std::size_t m, std::size_t horizon, double epsilon,
                           Rng& rng);

struct PlantedGame {
    GainMatrix gains;
    StrategyTrace optimum;
};

/// Deterministic 0/1 game in three blocks: the first m arms pay 1, then the
/// last m arms, then the first m again. Block ends sit at rounds 3333 and
/// 6666 of 10^4, scaled with T.
PlantedGame sudden_change(std::size_t arms, std::size_t m, std::size_t horizon);

/// Uniform [0,1] gains with S planted segments. Within each segment the
/// planted m-arm receives the round's m largest values (in index order) by
/// swapping them with whatever arms held them.
PlantedGame random_change(std::size_t arms, std::size_t m, std::size_t horizon,
                          std::size_t segments, Rng& rng);

struct ExpertGame {
    GainMatrix gains;
    AdviceStream advice;
};

/// Arms 0..m-1 always pay 1, the rest 0. Underlying experts 0..m-1 are
/// indicators of those arms; experts m and m+1 put zero mass on them and a
/// fresh random split of unit mass on the remaining arms every round.
ExpertGame underlying_expert_game(std::size_t arms, std::size_t m, std::size_t horizon, Rng& rng);

/// Latency at or above which a request counts as timed out.
inline constexpr double kLatencyTimeoutMs = 1000.0;

/// Rows = probe epochs, columns = sources, values in milliseconds.
struct LatencyTable {
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::vector<double> latency_ms; ///< row-major; missing cells hold the timeout
};

/// Comma- or tab-delimited table with an optional header row. Empty cells
/// are timeouts.
LatencyTable parse_latency_table(std::istream& in);

/// gain = 1 - min(latency, 1000) / 1000
double latency_gain(double latency_ms);

/// `games` gain matrices, each built from K distinct columns drawn with `seed`.
std::vector<GainMatrix> latency_games(const LatencyTable& table, std::size_t arms, std::size_t m,
                                      std::size_t games, std::uint64_t seed);

std::vector<GainMatrix> ingest_latencies(const std::filesystem::path& path, std::size_t arms,
                                         std::size_t m, std::size_t games, std::uint64_t seed);

/// Plain CSV of gains, one row per round, no header.
GainMatrix read_gain_table(std::istream& in);
GainMatrix load_gain_table(const std::filesystem::path& path);
void write_gain_table(std::ostream& out, const GainMatrix& gains);

} // namespace mabmp
