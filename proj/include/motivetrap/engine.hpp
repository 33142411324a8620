#pragma once

// Thread-safe owner of one campaign. Every mutation goes through a single
// exclusive section so arrival order at submit() is the access order; reads
// take a shared lock and always see a consistent state.

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "motivetrap/campaign.hpp"

namespace motivetrap {

struct IngestCounters {
    long recorded = 0;
    long duplicates = 0;
    long unknown = 0;
    long filtered = 0;
    long errors = 0;

    IngestCounters& operator+=(const IngestCounters& o);
    friend bool operator==(const IngestCounters&, const IngestCounters&) = default;
};

void to_json(json& j, const IngestCounters& c);

// A transition with its position in the engine's feed (0-based).
struct SequencedTransition {
    std::size_t sequence = 0;
    Transition transition;
};

class CampaignEngine {
public:
    using Clock = std::chrono::steady_clock;

    // persist = true writes campaign.json and registry.json under the
    // campaign root after start and after every state-changing transition.
    CampaignEngine(std::shared_ptr<const TextBackend> backend, std::shared_ptr<Fileshare> fileshare,
                   bool persist);

    // Replaces any current campaign with a fresh one.
    void start(CampaignConfig config);
    // Adopts a campaign restored from disk.
    void adopt(Campaign campaign);

    bool has_campaign() const;

    // Throws std::logic_error when no campaign has been started; otherwise the
    // campaign's own errors propagate and are counted.
    Transition submit(const AccessEvent& event);

    // Closes the active environment if nothing was recorded for at least the
    // configured idle timeout. Returns the transition when it fired.
    std::optional<Transition> check_idle(Clock::time_point now);

    void note_filtered();
    void note_error();

    CampaignReport report() const;
    IngestCounters counters() const;

    // Runs fn with shared (read) access to the campaign.
    void read(const std::function<void(const Campaign&)>& fn) const;

    // Transitions with sequence >= from, waiting up to `timeout` for at least
    // one to arrive. Returns empty on timeout.
    std::vector<SequencedTransition> transitions_since(std::size_t from,
                                                       std::chrono::milliseconds timeout) const;
    std::size_t transition_count() const;

    // Wakes every waiter in transitions_since (used on shutdown).
    void wake_all();

private:
    void publish(const Transition& t);
    void persist_locked() const;
    const Campaign& require() const;

    std::shared_ptr<const TextBackend> backend_;
    std::shared_ptr<Fileshare> fileshare_;
    bool persist_;

    mutable std::shared_mutex state_mutex_;
    std::optional<Campaign> campaign_;
    IngestCounters counters_;
    Clock::time_point last_activity_{};

    mutable std::mutex feed_mutex_;
    mutable std::condition_variable feed_cv_;
    std::vector<Transition> feed_;
    std::size_t generation_ = 0;
};

}  // namespace motivetrap
