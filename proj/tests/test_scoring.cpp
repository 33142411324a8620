#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "motivetrap/errors.hpp"
#include "motivetrap/scoring.hpp"

using namespace motivetrap;

namespace {

// Independent route: floating-point formula with lround (ties away from zero,
// which equals half-up for the non-negative values here).
int oracle_score(int p, int n) { return static_cast<int>(std::lround(100.0 * (n - p) / (n - 1))); }

// Registry with `per_type` documents of every type in environment 1.
struct Fixture {
    Registry registry;
    std::map<DocType, std::vector<std::string>> hashes;

    explicit Fixture(int per_type = 6) {
        for (DocType t : kAllDocTypes)
            for (int i = 0; i < per_type; ++i) {
                auto r = DocumentRecord::for_document(
                    {"/share/env-1/" + std::string(to_string(t)) + std::to_string(i), "deception-env-1"}, 1, t,
                    "subject");
                hashes[t].push_back(r.loc_hash);
                registry.register_document(r);
            }
    }

    // Log of the given type sequence, using a fresh document per occurrence.
    AccessLog log_of(const std::vector<DocType>& types) const {
        std::map<DocType, int> used;
        AccessLog log;
        for (DocType t : types) log.record(hashes.at(t).at(static_cast<std::size_t>(used[t]++)));
        return log;
    }
};

const std::vector<Motive> kAll{kAllMotives.begin(), kAllMotives.end()};

}  // namespace

TEST_CASE("position score ladder for six accesses") {
    CHECK(position_score(1, 6) == 100);
    CHECK(position_score(2, 6) == 80);
    CHECK(position_score(3, 6) == 60);
    CHECK(position_score(4, 6) == 40);
    CHECK(position_score(5, 6) == 20);
    CHECK(position_score(6, 6) == 0);
}

TEST_CASE("position score agrees with the floating-point oracle and is strictly decreasing") {
    for (int n = 2; n <= 101; ++n) {
        CAPTURE(n);
        CHECK(position_score(1, n) == 100);
        CHECK(position_score(n, n) == 0);
        for (int p = 1; p <= n; ++p) {
            CHECK(position_score(p, n) == oracle_score(p, n));
            if (p > 1) CHECK(position_score(p, n) < position_score(p - 1, n));
        }
    }
}

TEST_CASE("position score rejects out-of-range input") {
    CHECK_THROWS_AS(position_score(1, 1), ValidationError);
    CHECK_THROWS_AS(position_score(0, 6), ValidationError);
    CHECK_THROWS_AS(position_score(7, 6), ValidationError);
}

TEST_CASE("access log keeps distinct first-access order") {
    AccessLog log;
    CHECK(log.record("a"));
    CHECK(log.record("b"));
    CHECK_FALSE(log.record("a"));
    CHECK(log.hashes() == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(AccessLog({"x", "x"}), ValidationError);
}

TEST_CASE("worked example aggregates to 120/80/60/40/0") {
    const Fixture f;
    const auto log = f.log_of({DocType::Financial, DocType::IT, DocType::Operational, DocType::Legal,
                               DocType::Financial, DocType::HR});
    const ScoreBoard board = score_environment(log, f.registry, kAll, 6);
    CHECK(board.at(Motive::Profit) == 120);
    CHECK(board.at(Motive::Satisfaction) == 80);
    CHECK(board.at(Motive::Geopolitical) == 60);
    CHECK(board.at(Motive::Discontent) == 40);
    CHECK(board.at(Motive::Ideological) == 0);
    CHECK(board.total() == 300);

    const auto result = rank_and_eliminate(board, kAll, log, f.registry);
    CHECK(result.eliminated == Motive::Ideological);
    CHECK(result.remaining ==
          std::vector<Motive>{Motive::Profit, Motive::Geopolitical, Motive::Satisfaction, Motive::Discontent});
}

TEST_CASE("all six accesses on one type") {
    const Fixture f;
    const auto log = f.log_of(std::vector<DocType>(6, DocType::Financial));
    const auto board = score_environment(log, f.registry, kAll, 6);
    // 100 + 80 + 60 + 40 + 20 + 0, summed by hand.
    CHECK(board.at(Motive::Profit) == 300);
    for (Motive m : kAll)
        if (m != Motive::Profit) CHECK(board.at(m) == 0);
}

TEST_CASE("empty log scores every active motive zero") {
    const Fixture f;
    const std::vector<Motive> active{Motive::Discontent, Motive::Profit};
    const auto board = score_environment(AccessLog{}, f.registry, active, 6);
    CHECK(board.size() == 2);
    CHECK(board.at(Motive::Discontent) == 0);
    CHECK(board.at(Motive::Profit) == 0);
}

TEST_CASE("scoring errors") {
    const Fixture f;
    AccessLog unknown;
    unknown.record(std::string(64, 'a'));
    CHECK_THROWS_AS(score_environment(unknown, f.registry, kAll, 6), StateError);

    const auto hr = f.log_of({DocType::HR});
    CHECK_THROWS_AS(score_environment(hr, f.registry, std::vector<Motive>{Motive::Profit, Motive::Discontent}, 6),
                    StateError);

    const auto long_log = f.log_of({DocType::HR, DocType::IT, DocType::Legal});
    CHECK_THROWS_AS(score_environment(long_log, f.registry, kAll, 2), ValidationError);
}

TEST_CASE("tie: accessed last versus never accessed") {
    // Two motives tied at 0: Discontent was opened at position 6 (score 0),
    // Ideological never. The never-accessed one goes.
    const Fixture f;
    const auto log = f.log_of({DocType::Financial, DocType::Financial, DocType::Financial, DocType::IT,
                               DocType::IT, DocType::Legal});
    const std::vector<Motive> active{Motive::Profit, Motive::Satisfaction, Motive::Discontent, Motive::Ideological};
    const auto board = score_environment(log, f.registry, active, 6);
    CHECK(board.at(Motive::Discontent) == 0);
    CHECK(board.at(Motive::Ideological) == 0);
    CHECK(rank_and_eliminate(board, active, log, f.registry).eliminated == Motive::Ideological);
}

TEST_CASE("tie: both accessed, the later first access goes") {
    // Board built by hand: a natural tie between two accessed motives is not
    // reachable with N=6 scores, so only the tie-break is exercised here.
    const Fixture f;
    const auto log = f.log_of({DocType::Legal, DocType::IT});
    ScoreBoard board;
    board.scores = {{Motive::Discontent, 10}, {Motive::Satisfaction, 10}, {Motive::Profit, 50}};
    const std::vector<Motive> active{Motive::Profit, Motive::Discontent, Motive::Satisfaction};
    // Satisfaction's first access (position 2) is later than Discontent's (1).
    CHECK(rank_and_eliminate(board, active, log, f.registry).eliminated == Motive::Satisfaction);
}

TEST_CASE("tie: all never accessed falls back to greatest canonical name") {
    const Fixture f;
    const auto log = f.log_of(std::vector<DocType>(6, DocType::Financial));
    const auto board = score_environment(log, f.registry, kAll, 6);
    // discontent < geopolitical < ideological < satisfaction
    CHECK(rank_and_eliminate(board, kAll, log, f.registry).eliminated == Motive::Satisfaction);
}

TEST_CASE("elimination preconditions") {
    const Fixture f;
    ScoreBoard one;
    one.scores = {{Motive::Profit, 0}};
    CHECK_THROWS_AS(rank_and_eliminate(one, std::vector<Motive>{Motive::Profit}, AccessLog{}, f.registry),
                    ValidationError);

    ScoreBoard two;
    two.scores = {{Motive::Profit, 10}, {Motive::Ideological, 0}};
    const std::vector<Motive> active{Motive::Ideological, Motive::Profit};
    const auto r = rank_and_eliminate(two, active, AccessLog{}, f.registry);
    CHECK(r.remaining.size() == 1);
    CHECK(r.remaining.front() == Motive::Profit);
    CHECK_THROWS_AS(rank_and_eliminate(two, std::vector<Motive>{Motive::Profit, Motive::Discontent}, AccessLog{},
                                       f.registry),
                    ValidationError);
}

TEST_CASE("property: conservation, minimality and determinism over random full logs") {
    const Fixture f(12);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 12)(rng);
        std::vector<DocType> seq;
        for (int i = 0; i < n; ++i)
            seq.push_back(kAllDocTypes[std::uniform_int_distribution<std::size_t>(0, 4)(rng)]);
        const auto log = f.log_of(seq);
        const auto board = score_environment(log, f.registry, kAll, n);

        int expected_total = 0;
        for (int p = 1; p <= n; ++p) expected_total += oracle_score(p, n);
        CHECK(board.total() == expected_total);
        for (const auto& [m, s] : board.scores) CHECK(s >= 0);

        const auto r1 = rank_and_eliminate(board, kAll, log, f.registry);
        const auto r2 = rank_and_eliminate(board, kAll, log, f.registry);
        CHECK(r1 == r2);
        for (const auto& [m, s] : board.scores) CHECK(board.at(r1.eliminated) <= s);
        CHECK(std::find(r1.remaining.begin(), r1.remaining.end(), r1.eliminated) == r1.remaining.end());
        CHECK(r1.remaining.size() == kAll.size() - 1);
    }
}

TEST_CASE("property: reversing a log of distinct types reverses the contribution order") {
    const Fixture f;
    std::mt19937_64 rng(7);
    std::vector<DocType> types(kAllDocTypes.begin(), kAllDocTypes.end());
    for (int trial = 0; trial < 50; ++trial) {
        std::shuffle(types.begin(), types.end(), rng);
        const auto forward = score_environment(f.log_of(types), f.registry, kAll, 5);
        std::vector<DocType> reversed(types.rbegin(), types.rend());
        const auto backward = score_environment(f.log_of(reversed), f.registry, kAll, 5);
        for (std::size_t i = 0; i < types.size(); ++i) {
            const Motive m = motive_for_type(types[i]);
            CHECK(forward.at(m) == position_score(static_cast<int>(i) + 1, 5));
            CHECK(backward.at(m) == position_score(static_cast<int>(types.size() - i), 5));
        }
    }
}
