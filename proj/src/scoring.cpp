#include "motivetrap/scoring.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "motivetrap/errors.hpp"

namespace motivetrap {

int position_score(int p, int n) {
    if (n < 2) throw ValidationError("position_score: n must be >= 2");
    if (p < 1 || p > n) throw ValidationError("position_score: p out of range [1, n]");
    const long num = 200L * (n - p) + (n - 1);
    const long den = 2L * (n - 1);
    return static_cast<int>(num / den);
}

AccessLog::AccessLog(std::vector<std::string> hashes) {
    for (auto& h : hashes)
        if (!record(std::move(h))) throw ValidationError("access log contains a repeated hash");
}

bool AccessLog::record(std::string loc_hash) {
    if (contains(loc_hash)) return false;
    hashes_.push_back(std::move(loc_hash));
    return true;
}

bool AccessLog::contains(std::string_view loc_hash) const noexcept {
    return std::find(hashes_.begin(), hashes_.end(), loc_hash) != hashes_.end();
}

namespace {

Motive resolve_motive(const Registry& registry, const std::string& hash) {
    const auto record = registry.lookup(hash);
    if (!record) throw StateError("access log hash not in registry: " + hash);
    return record->motive();
}

}  // namespace

ScoreBoard score_environment(const AccessLog& log, const Registry& registry,
                             std::span<const Motive> active, int n) {
    if (log.size() > static_cast<std::size_t>(n))
        throw ValidationError("access log longer than accesses_per_env");
    ScoreBoard board;
    for (Motive m : active) board.scores[m] = 0;
    int position = 0;
    for (const auto& hash : log.hashes()) {
        ++position;
        const Motive m = resolve_motive(registry, hash);
        auto it = board.scores.find(m);
        if (it == board.scores.end())
            throw StateError("accessed document belongs to inactive motive " +
                             std::string(to_string(m)));
        it->second += position_score(position, n);
    }
    return board;
}

EliminationResult rank_and_eliminate(const ScoreBoard& board, std::span<const Motive> active,
                                     const AccessLog& log, const Registry& registry,
                                     TieBreakRule rule) {
    if (board.size() < 2) throw ValidationError("elimination needs at least two active motives");
    if (active.size() != board.size() ||
        !std::all_of(active.begin(), active.end(), [&](Motive m) { return board.contains(m); }))
        throw ValidationError("active motive list does not match scoreboard keys");

    int lowest = std::numeric_limits<int>::max();
    for (const auto& [m, score] : board.scores) lowest = std::min(lowest, score);
    std::vector<Motive> tied;
    for (const auto& [m, score] : board.scores)
        if (score == lowest) tied.push_back(m);

    Motive eliminated = tied.front();
    if (tied.size() > 1) {
        switch (rule) {
            case TieBreakRule::LatestFirstAccessThenLexicographic: {
                std::map<Motive, std::size_t> first_access;
                std::size_t position = 0;
                for (const auto& hash : log.hashes()) {
                    ++position;
                    first_access.try_emplace(resolve_motive(registry, hash), position);
                }
                constexpr auto kNever = std::numeric_limits<std::size_t>::max();
                auto key = [&](Motive m) {
                    const auto it = first_access.find(m);
                    return std::pair{it == first_access.end() ? kNever : it->second, to_string(m)};
                };
                eliminated = *std::max_element(tied.begin(), tied.end(),
                                               [&](Motive a, Motive b) { return key(a) < key(b); });
                break;
            }
        }
    }

    EliminationResult result;
    result.scoreboard = board;
    result.eliminated = eliminated;
    for (Motive m : active)
        if (m != eliminated) result.remaining.push_back(m);
    return result;
}

}  // namespace motivetrap
