#pragma once

// Positional scoring of one environment's access sequence and elimination of
// the lowest-scoring motive.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motivetrap/model.hpp"
#include "motivetrap/registry.hpp"

namespace motivetrap {

// round(100 * (n - p) / (n - 1)), half rounded up. n = 6 gives
// 100/80/60/40/20/0. Throws ValidationError unless n >= 2 and 1 <= p <= n.
int position_score(int p, int n);

// Distinct loc_hashes in first-access order for one environment.
class AccessLog {
public:
    AccessLog() = default;
    explicit AccessLog(std::vector<std::string> hashes);

    // Appends unless already present. Returns false for a repeat open.
    bool record(std::string loc_hash);

    bool contains(std::string_view loc_hash) const noexcept;
    std::size_t size() const noexcept { return hashes_.size(); }
    bool empty() const noexcept { return hashes_.empty(); }
    const std::vector<std::string>& hashes() const noexcept { return hashes_; }

    friend bool operator==(const AccessLog&, const AccessLog&) = default;

private:
    std::vector<std::string> hashes_;
};

enum class TieBreakRule {
    // Among tied minima, eliminate the motive whose first access came latest
    // (never accessed counts as latest of all); remaining ties go to the
    // lexicographically greatest canonical name.
    LatestFirstAccessThenLexicographic,
};

// Each access at position p adds position_score(p, n) to its record's motive.
// Keys of the result are exactly `active`. Throws StateError when a hash does
// not resolve or resolves to a motive outside `active`, ValidationError when
// the log is longer than n.
ScoreBoard score_environment(const AccessLog& log, const Registry& registry,
                             std::span<const Motive> active, int n);

// Removes the minimum-score motive. `active` supplies the ordering preserved
// in `remaining` and must match the board's keys. Throws ValidationError with
// fewer than two motives.
EliminationResult rank_and_eliminate(
    const ScoreBoard& board, std::span<const Motive> active, const AccessLog& log,
    const Registry& registry,
    TieBreakRule rule = TieBreakRule::LatestFirstAccessThenLexicographic);

}  // namespace motivetrap
