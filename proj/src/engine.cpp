#include "motivetrap/engine.hpp"

#include <stdexcept>

#include "motivetrap/errors.hpp"

namespace motivetrap {

IngestCounters& IngestCounters::operator+=(const IngestCounters& o) {
    recorded += o.recorded;
    duplicates += o.duplicates;
    unknown += o.unknown;
    filtered += o.filtered;
    errors += o.errors;
    return *this;
}

void to_json(json& j, const IngestCounters& c) {
    j = json{{"recorded", c.recorded},
             {"duplicates", c.duplicates},
             {"unknown", c.unknown},
             {"filtered", c.filtered},
             {"errors", c.errors}};
}

CampaignEngine::CampaignEngine(std::shared_ptr<const TextBackend> backend,
                               std::shared_ptr<Fileshare> fileshare, bool persist)
    : backend_(std::move(backend)), fileshare_(std::move(fileshare)), persist_(persist) {}

void CampaignEngine::start(CampaignConfig config) {
    std::unique_lock lock(state_mutex_);
    campaign_ = Campaign::start(std::move(config), backend_, fileshare_);
    counters_ = {};
    last_activity_ = Clock::now();
    persist_locked();
    {
        std::lock_guard feed_lock(feed_mutex_);
        feed_.clear();
        ++generation_;
    }
    feed_cv_.notify_all();
}

void CampaignEngine::adopt(Campaign campaign) {
    std::unique_lock lock(state_mutex_);
    campaign_ = std::move(campaign);
    counters_ = {};
    last_activity_ = Clock::now();
    {
        std::lock_guard feed_lock(feed_mutex_);
        feed_.clear();
        ++generation_;
    }
    feed_cv_.notify_all();
}

bool CampaignEngine::has_campaign() const {
    std::shared_lock lock(state_mutex_);
    return campaign_.has_value();
}

const Campaign& CampaignEngine::require() const {
    if (!campaign_) throw std::logic_error("no campaign has been started");
    return *campaign_;
}

void CampaignEngine::persist_locked() const {
    if (persist_ && campaign_) campaign_->save();
}

Transition CampaignEngine::submit(const AccessEvent& event) {
    Transition t;
    {
        std::unique_lock lock(state_mutex_);
        require();
        try {
            t = campaign_->handle_access(event);
        } catch (const Error&) {
            ++counters_.errors;
            throw;
        }
        switch (t.kind) {
            case TransitionKind::DuplicateIgnored: ++counters_.duplicates; break;
            case TransitionKind::UnknownFileIgnored: ++counters_.unknown; break;
            default: ++counters_.recorded; break;
        }
        if (t.recorded()) {
            last_activity_ = Clock::now();
            persist_locked();
        }
        // Published under the state lock so feed order equals processing order.
        publish(t);
    }
    return t;
}

std::optional<Transition> CampaignEngine::check_idle(Clock::time_point now) {
    Transition t;
    {
        std::unique_lock lock(state_mutex_);
        if (!campaign_ || campaign_->status() != CampaignStatus::Running) return std::nullopt;
        const int timeout = campaign_->config().idle_timeout_seconds;
        if (timeout <= 0 || now - last_activity_ < std::chrono::seconds(timeout)) return std::nullopt;
        t = campaign_->close_active_environment();
        last_activity_ = now;
        persist_locked();
        publish(t);
    }
    return t;
}

void CampaignEngine::note_filtered() {
    std::unique_lock lock(state_mutex_);
    ++counters_.filtered;
}

void CampaignEngine::note_error() {
    std::unique_lock lock(state_mutex_);
    ++counters_.errors;
}

CampaignReport CampaignEngine::report() const {
    std::shared_lock lock(state_mutex_);
    return require().status_snapshot();
}

IngestCounters CampaignEngine::counters() const {
    std::shared_lock lock(state_mutex_);
    return counters_;
}

void CampaignEngine::read(const std::function<void(const Campaign&)>& fn) const {
    std::shared_lock lock(state_mutex_);
    fn(require());
}

void CampaignEngine::publish(const Transition& t) {
    {
        std::lock_guard lock(feed_mutex_);
        feed_.push_back(t);
    }
    feed_cv_.notify_all();
}

std::vector<SequencedTransition> CampaignEngine::transitions_since(
    std::size_t from, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(feed_mutex_);
    const std::size_t generation = generation_;
    feed_cv_.wait_for(lock, timeout,
                      [&] { return feed_.size() > from || generation_ != generation; });
    std::vector<SequencedTransition> out;
    for (std::size_t i = from; i < feed_.size(); ++i) out.push_back({i, feed_[i]});
    return out;
}

std::size_t CampaignEngine::transition_count() const {
    std::lock_guard lock(feed_mutex_);
    return feed_.size();
}

void CampaignEngine::wake_all() {
    {
        std::lock_guard lock(feed_mutex_);
        ++generation_;
    }
    feed_cv_.notify_all();
}

}  // namespace motivetrap
