#pragma once

// Helpers shared by the test binaries.

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "motivetrap/campaign.hpp"

namespace motivetrap::testing {

// Unique directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("motivetrap-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) +
                 "-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline CampaignConfig config_in(const std::filesystem::path& root, std::uint64_t seed = 42) {
    CampaignConfig cfg;
    cfg.root_dir = root.string();
    cfg.seed = seed;
    return cfg;
}

// First deployed document of the current environment with this subject.
inline const DeployedDocument& doc_with_subject(const Campaign& c, std::string_view subject) {
    for (const auto& d : c.current_environment().documents)
        if (d.subject == subject) return d;
    throw std::runtime_error("no document with subject " + std::string(subject));
}

inline AccessEvent open_event(const Campaign& c, const DeployedDocument& doc) {
    AccessEvent e;
    e.campaign_id = c.config().campaign_id;
    e.env_index = c.current_environment().index;
    e.location = c.current_environment().location_of(doc);
    e.timestamp = Timestamp{std::chrono::seconds{1700000000}};
    return e;
}

inline AccessEvent open_event(const Campaign& c, std::string_view subject) {
    return open_event(c, doc_with_subject(c, subject));
}

// The worked example sequence: Financial, IT, Operational, Legal, Financial, HR.
inline const std::array<std::string_view, 6> kExampleSequence{
    "Budgets",
    "IT Asset Inventory",
    "Standard Operating Procedures (SOPs)",
    "Corporate Governance Documents",
    "Tax Documents",
    "Employment Contracts",
};

}  // namespace motivetrap::testing
