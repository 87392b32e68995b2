#include "mabmp/environments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mabmp {

namespace {

void check_arms(std::size_t arms, std::size_t m)
{
    if (m == 0 || m >= arms) {
        throw std::invalid_argument("need 1 <= m < K");
    }
}

ArmSet first_arms(std::size_t m)
{
    std::vector<std::size_t> arms(m);
    std::iota(arms.begin(), arms.end(), std::size_t{0});
    return ArmSet(std::move(arms));
}

ArmSet last_arms(std::size_t arms, std::size_t m)
{
    std::vector<std::size_t> chosen(m);
    std::iota(chosen.begin(), chosen.end(), arms - m);
    return ArmSet(std::move(chosen));
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        cells.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell)
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

} // namespace

GainMatrix bernoulli_shift(std::size_t arms, std::size_t m, std::size_t horizon, double epsilon,
                           Rng& rng)
{
    check_arms(arms, m);
    if (!(epsilon > 0.0 && epsilon <= 0.125)) {
        throw std::invalid_argument("bernoulli_shift: epsilon must lie in (0, 0.125]");
    }
    if (horizon == 0 || horizon % 2 != 0) {
        throw std::invalid_argument("bernoulli_shift: T must be positive and even");
    }
    GainMatrix gains(horizon, arms);
    const std::size_t half = horizon / 2;
    for (std::size_t t = 0; t < horizon; ++t) {
        const bool first_half = t < half;
        const double lead = first_half ? 0.5 + epsilon : 0.5 - epsilon;
        const double rest = first_half ? 0.5 - epsilon : 0.5 + 4.0 * epsilon;
        for (std::size_t j = 0; j < arms; ++j) {
            const double mean = j < m ? lead : rest;
            gains.set(t, j, rng.uniform() < mean ? 1.0 : 0.0);
        }
    }
    return gains;
}

PlantedGame sudden_change(std::size_t arms, std::size_t m, std::size_t horizon)
{
    check_arms(arms, m);
    const std::size_t first_end = horizon * 3333 / 10000;
    const std::size_t second_end = horizon * 6666 / 10000;
    if (first_end == 0 || second_end <= first_end || horizon <= second_end) {
        throw std::invalid_argument("sudden_change: T too small for three blocks");
    }
    const ArmSet lead = first_arms(m);
    const ArmSet tail = last_arms(arms, m);

    PlantedGame game{GainMatrix(horizon, arms), StrategyTrace(horizon)};
    for (std::size_t t = 0; t < horizon; ++t) {
        const bool middle = t >= first_end && t < second_end;
        const ArmSet& best = middle ? tail : lead;
        for (std::size_t arm : best) {
            game.gains.set(t, arm, 1.0);
        }
        game.optimum[t] = best;
    }
    return game;
}

PlantedGame random_change(std::size_t arms, std::size_t m, std::size_t horizon,
                          std::size_t segments, Rng& rng)
{
    check_arms(arms, m);
    if (segments == 0 || segments > horizon) {
        throw std::invalid_argument("random_change: need 1 <= S <= T");
    }

    // switch instants: S-1 distinct rounds among 1..T-1 (0-based)
    std::vector<std::size_t> candidates(horizon - 1);
    std::iota(candidates.begin(), candidates.end(), std::size_t{1});
    for (std::size_t i = 0; i + 1 < segments; ++i) {
        const std::size_t pick = i + rng.below(candidates.size() - i);
        std::swap(candidates[i], candidates[pick]);
    }
    std::vector<std::size_t> switches(candidates.begin(),
                                      candidates.begin() + static_cast<std::ptrdiff_t>(segments - 1));
    std::sort(switches.begin(), switches.end());

    std::vector<ArmSet> planted;
    planted.push_back(random_subset(arms, m, rng));
    while (planted.size() < segments) {
        ArmSet next = random_subset(arms, m, rng);
        if (next != planted.back()) {
            planted.push_back(std::move(next));
        }
    }

    PlantedGame game{GainMatrix(horizon, arms), StrategyTrace(horizon)};
    std::size_t segment = 0;
    std::vector<std::size_t> order(arms);
    for (std::size_t t = 0; t < horizon; ++t) {
        if (segment + 1 < segments && t == switches[segment]) {
            ++segment;
        }
        const ArmSet& best = planted[segment];
        game.optimum[t] = best;

        std::span<double> row = game.gains.mutable_row(t);
        for (double& g : row) g = rng.uniform();

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
        std::vector<bool> in_top(arms, false);
        for (std::size_t k = 0; k < m; ++k) in_top[order[k]] = true;

        // swap top values held outside the planted set with planted arms outside the top
        std::vector<std::size_t> donors, receivers;
        for (std::size_t j = 0; j < arms; ++j) {
            if (in_top[j] && !best.contains(j)) donors.push_back(j);
            if (!in_top[j] && best.contains(j)) receivers.push_back(j);
        }
        for (std::size_t k = 0; k < donors.size(); ++k) {
            std::swap(row[donors[k]], row[receivers[k]]);
        }
        std::vector<double> top;
        for (std::size_t arm : best) top.push_back(row[arm]);
        std::sort(top.begin(), top.end(), std::greater<>());
        std::size_t k = 0;
        for (std::size_t arm : best) row[arm] = top[k++];
    }
    return game;
}

ExpertGame underlying_expert_game(std::size_t arms, std::size_t m, std::size_t horizon, Rng& rng)
{
    check_arms(arms, m);
    if (horizon == 0) throw std::invalid_argument("underlying_expert_game: T must be positive");

    const std::size_t experts = m + 2;
    ExpertGame game{GainMatrix(horizon, arms), {}};
    game.advice.reserve(horizon);
    std::exponential_distribution<double> unit(1.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t j = 0; j < m; ++j) game.gains.set(t, j, 1.0);

        AdviceMatrix advice(experts, arms);
        for (std::size_t i = 0; i < m; ++i) advice(i, i) = 1.0;
        for (std::size_t i = m; i < experts; ++i) {
            // flat Dirichlet over the K - m remaining arms
            double total = 0.0;
            for (std::size_t j = m; j < arms; ++j) {
                advice(i, j) = unit(rng.engine());
                total += advice(i, j);
            }
            for (std::size_t j = m; j < arms; ++j) advice(i, j) /= total;
        }
        game.advice.push_back(std::move(advice));
    }
    return game;
}

LatencyTable parse_latency_table(std::istream& in)
{
    LatencyTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const char delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
        const auto cells = split(line, delimiter);

        if (first_row) {
            first_row = false;
            table.columns = cells.size();
            const bool header = std::any_of(cells.begin(), cells.end(), [](std::string_view c) {
                return !c.empty() && !parse_number(c);
            });
            if (header) continue;
        }
        if (cells.size() != table.columns) {
            throw std::runtime_error("latency table line " + std::to_string(line_no) + ": " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.columns));
        }
        for (std::size_t col = 0; col < cells.size(); ++col) {
            if (cells[col].empty()) {
                table.latency_ms.push_back(kLatencyTimeoutMs);
                continue;
            }
            const auto value = parse_number(cells[col]);
            if (!value || *value < 0.0) {
                throw std::runtime_error("latency table line " + std::to_string(line_no) +
                                         ", column " + std::to_string(col + 1) +
                                         ": not a nonnegative number");
            }
            table.latency_ms.push_back(*value);
        }
        ++table.rows;
    }
    if (table.rows == 0) {
        throw std::runtime_error("latency table has no data rows");
    }
    return table;
}

double latency_gain(double latency_ms)
{
    return 1.0 - std::min(latency_ms, kLatencyTimeoutMs) / kLatencyTimeoutMs;
}

std::vector<GainMatrix> latency_games(const LatencyTable& table, std::size_t arms, std::size_t m,
                                      std::size_t games, std::uint64_t seed)
{
    check_arms(arms, m);
    if (table.columns < arms) {
        throw std::invalid_argument("latency table has " + std::to_string(table.columns) +
                                    " columns, fewer than K=" + std::to_string(arms));
    }
    Rng rng(seed);
    std::vector<GainMatrix> result;
    result.reserve(games);
    for (std::size_t g = 0; g < games; ++g) {
        const ArmSet columns = random_subset(table.columns, arms, rng);
        GainMatrix gains(table.rows, arms);
        for (std::size_t t = 0; t < table.rows; ++t) {
            std::size_t j = 0;
            for (std::size_t col : columns) {
                gains.set(t, j++, latency_gain(table.latency_ms[t * table.columns + col]));
            }
        }
        result.push_back(std::move(gains));
    }
    return result;
}

std::vector<GainMatrix> ingest_latencies(const std::filesystem::path& path, std::size_t arms,
                                         std::size_t m, std::size_t games, std::uint64_t seed)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open latency table " + path.string());
    }
    return latency_games(parse_latency_table(in), arms, m, games, seed);
}

GainMatrix read_gain_table(std::istream& in)
{
    std::vector<double> values;
    std::size_t columns = 0, rows = 0, line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, line.find('\t') != std::string::npos ? '\t' : ',');
        if (rows == 0) columns = cells.size();
        if (cells.size() != columns) {
            throw std::runtime_error("gain table line " + std::to_string(line_no) +
                                     ": inconsistent column count");
        }
        for (std::string_view cell : cells) {
            const auto value = parse_number(cell);
            if (!value) {
                throw std::runtime_error("gain table line " + std::to_string(line_no) +
                                         ": malformed value '" + std::string(cell) + "'");
            }
            values.push_back(*value);
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("gain table is empty");
    return GainMatrix(rows, columns, std::move(values));
}

GainMatrix load_gain_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open gain table " + path.string());
    }
    return read_gain_table(in);
}

void write_gain_table(std::ostream& out, const GainMatrix& gains)
{
    out << std::setprecision(17);
    for (std::size_t t = 0; t < gains.rounds(); ++t) {
        for (std::size_t j = 0; j < gains.arms(); ++j) {
            if (j) out << ',';
            out << gains(t, j);
        }
        out << '\n';
    }
}

} // namespace mabmp
