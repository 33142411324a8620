#pragma once

// The campaign state machine: provision an environment, record accesses,
// score and eliminate when the environment fills, provision the next one,
// stop when a single motive remains.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motivetrap/docgen.hpp"
#include "motivetrap/fileshare.hpp"
#include "motivetrap/model.hpp"
#include "motivetrap/registry.hpp"
#include "motivetrap/scoring.hpp"

namespace motivetrap {

enum class EnvironmentStatus { Active, Finalized };
enum class CampaignStatus { Running, Finished, Inconclusive };

std::string_view to_string(EnvironmentStatus s) noexcept;
std::string_view to_string(CampaignStatus s) noexcept;

struct DeployedDocument {
    std::string file_name;
    std::string loc_hash;
    std::string subject;
    DocType doc_type = DocType::Financial;

    friend bool operator==(const DeployedDocument&, const DeployedDocument&) = default;
};

struct EnvironmentState {
    int index = 1;
    std::vector<Motive> active_motives;
    std::string directory;
    std::string host_name;
    std::vector<DeployedDocument> documents;  // deployment order
    AccessLog access_log;
    EnvironmentStatus status = EnvironmentStatus::Active;
    std::optional<EliminationResult> elimination;

    const DeployedDocument* find_by_name(std::string_view file_name) const noexcept;
    const DeployedDocument* find_by_hash(std::string_view loc_hash) const noexcept;
    DocumentLocation location_of(const DeployedDocument& doc) const;

    friend bool operator==(const EnvironmentState&, const EnvironmentState&) = default;
};

enum class TransitionKind {
    Recorded,
    DuplicateIgnored,
    UnknownFileIgnored,
    EnvironmentFinalized,
    CampaignFinished,
    // Idle timeout hit an environment with no accesses at all.
    CampaignInconclusive,
};

std::string_view to_string(TransitionKind k) noexcept;

struct Transition {
    TransitionKind kind = TransitionKind::Recorded;
    int env_index = 0;
    std::optional<std::string> loc_hash;
    std::optional<EliminationResult> elimination;
    std::optional<Motive> prediction;  // set exactly for CampaignFinished

    // Any outcome that appended to an access log.
    bool recorded() const noexcept {
        return kind == TransitionKind::Recorded || kind == TransitionKind::EnvironmentFinalized ||
               kind == TransitionKind::CampaignFinished;
    }

    friend bool operator==(const Transition&, const Transition&) = default;
};

void to_json(json& j, const Transition& t);
void from_json(const json& j, Transition& t);

// ---- reports ----------------------------------------------------------------

struct AccessEntry {
    int position = 0;
    std::string file_name;
    std::string loc_hash;
    DocType doc_type = DocType::Financial;
    Motive motive = Motive::Profit;
    int score = 0;

    friend bool operator==(const AccessEntry&, const AccessEntry&) = default;
};

struct EnvironmentReport {
    int index = 1;
    std::string host_name;
    std::string directory;
    EnvironmentStatus status = EnvironmentStatus::Active;
    std::vector<Motive> active_motives;
    std::vector<AccessEntry> accesses;
    ScoreBoard scoreboard;  // final once finalized, running total while active
    std::optional<Motive> eliminated;
    std::vector<Motive> remaining;

    friend bool operator==(const EnvironmentReport&, const EnvironmentReport&) = default;
};

struct CampaignReport {
    std::string campaign_id;
    CampaignStatus status = CampaignStatus::Running;
    std::vector<Motive> initial_motives;
    std::vector<Motive> active_motives;
    int accesses_per_env = 6;
    int current_env = 1;
    std::vector<std::string> current_files;  // sorted
    std::vector<EnvironmentReport> environments;
    std::optional<Motive> prediction;

    friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

void to_json(json& j, const CampaignReport& r);
void from_json(const json& j, CampaignReport& r);
// Stable text used for byte comparison of reports.
std::string report_to_string(const CampaignReport& r);
// Human-readable multi-line summary for the CLI.
std::string report_to_text(const CampaignReport& r);

// ---- campaign -----------------------------------------------------------------

std::string host_name_for(int env_index);

class Campaign {
public:
    // Provisions environment 1 under config.root_dir/env-1 with every initial
    // motive's documents. Throws ValidationError, GenerationError or IoError;
    // on failure no documents are left registered or deployed.
    static Campaign start(CampaignConfig config, std::shared_ptr<const TextBackend> backend,
                          std::shared_ptr<Fileshare> fileshare);

    // Processes one access. Throws StaleEventError for a finished campaign or
    // an earlier environment, ValidationError for a malformed or misaddressed
    // event. Provisioning failures during rollover leave state unchanged.
    Transition handle_access(const AccessEvent& event);

    // Idle timeout: finalizes the active environment with its partial log, or
    // marks the campaign Inconclusive if nothing was accessed.
    Transition close_active_environment();

    std::optional<Motive> predict() const;
    CampaignReport status_snapshot() const;

    const CampaignConfig& config() const noexcept { return config_; }
    CampaignStatus status() const noexcept { return status_; }
    const std::vector<Motive>& active_motives() const noexcept { return active_motives_; }
    const std::vector<EnvironmentState>& environments() const noexcept { return environments_; }
    const EnvironmentState& current_environment() const { return environments_.back(); }
    const Registry& registry() const noexcept { return registry_; }
    const std::filesystem::path& root() const noexcept { return root_; }
    std::size_t finalized_count() const noexcept;

    // Body of a document in the current environment. Throws ValidationError
    // if the name is not deployed there, IoError if the file is missing.
    std::string read_document(std::string_view file_name) const;

    // Throws StateError describing the first broken invariant.
    void check_invariants() const;

    json state_to_json() const;
    // Writes campaign.json and registry.json under root().
    void save() const;
    // Restores a campaign persisted by save().
    static Campaign load(const std::filesystem::path& root, std::shared_ptr<const TextBackend> backend,
                         std::shared_ptr<Fileshare> fileshare);

private:
    Campaign() = default;

    // Builds the next environment's documents and records without touching
    // state. Registration and deployment happen in commit.
    struct Provision {
        EnvironmentState env;
        std::vector<DocumentRecord> records;
        std::vector<GeneratedDocument> documents;
    };
    Provision prepare_environment(int index, const std::vector<Motive>& motives) const;
    void commit(Provision provision);
    Transition finalize(EnvironmentState& env_copy, std::size_t env_pos);

    CampaignConfig config_;
    std::filesystem::path root_;
    std::shared_ptr<const TextBackend> backend_;
    std::shared_ptr<Fileshare> fileshare_;
    Registry registry_;
    std::vector<Motive> active_motives_;
    std::vector<EnvironmentState> environments_;
    CampaignStatus status_ = CampaignStatus::Running;
    std::optional<Motive> prediction_;
};

}  // namespace motivetrap
