#pragma once

// Shared vocabulary: motives, document types, the motive/type bijection and
// the small value types that flow between modules.

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace motivetrap {

using json = nlohmann::json;

enum class Motive : std::uint8_t { Profit, Ideological, Geopolitical, Satisfaction, Discontent };

enum class DocType : std::uint8_t { Financial, HR, Operational, IT, Legal };

inline constexpr std::array<Motive, 5> kAllMotives{
    Motive::Profit, Motive::Ideological, Motive::Geopolitical, Motive::Satisfaction,
    Motive::Discontent};

inline constexpr std::array<DocType, 5> kAllDocTypes{
    DocType::Financial, DocType::HR, DocType::Operational, DocType::IT, DocType::Legal};

// Canonical lowercase forms used in every file format and payload.
std::string_view to_string(Motive m) noexcept;
std::string_view to_string(DocType t) noexcept;

std::optional<Motive> motive_from_string(std::string_view s) noexcept;
std::optional<DocType> doc_type_from_string(std::string_view s) noexcept;

// Throwing variants for parsing untrusted input.
Motive parse_motive(std::string_view s);
DocType parse_doc_type(std::string_view s);

// The fixed one-to-one motive <-> document type mapping.
constexpr DocType type_for_motive(Motive m) noexcept {
    switch (m) {
        case Motive::Profit: return DocType::Financial;
        case Motive::Ideological: return DocType::HR;
        case Motive::Geopolitical: return DocType::Operational;
        case Motive::Satisfaction: return DocType::IT;
        case Motive::Discontent: return DocType::Legal;
    }
    return DocType::Financial;
}

constexpr Motive motive_for_type(DocType t) noexcept {
    switch (t) {
        case DocType::Financial: return Motive::Profit;
        case DocType::HR: return Motive::Ideological;
        case DocType::Operational: return Motive::Geopolitical;
        case DocType::IT: return Motive::Satisfaction;
        case DocType::Legal: return Motive::Discontent;
    }
    return Motive::Profit;
}

struct DocumentLocation {
    std::string path;  // absolute path on the host
    std::string host;

    // Throws ValidationError unless path is non-empty and absolute and host is
    // non-empty.
    void validate() const;

    friend bool operator==(const DocumentLocation&, const DocumentLocation&) = default;
};

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// RFC 3339 with optional fractional seconds and a Z or +hh:mm offset.
// Fractions beyond millisecond precision are truncated.
Timestamp parse_rfc3339(std::string_view text);
// Always UTC, millisecond precision: 2024-01-31T12:00:00.000Z
std::string format_rfc3339(Timestamp ts);

inline constexpr std::string_view kDocOpenKind = "doc_open";

struct AccessEvent {
    std::string campaign_id;
    int env_index = 1;
    DocumentLocation location;
    Timestamp timestamp{};
    std::string kind{kDocOpenKind};

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

// Aggregated per-motive score for one environment. Keys are exactly the
// environment's active motives.
struct ScoreBoard {
    std::map<Motive, int> scores;

    int at(Motive m) const { return scores.at(m); }
    bool contains(Motive m) const { return scores.count(m) != 0; }
    std::size_t size() const { return scores.size(); }
    int total() const;

    friend bool operator==(const ScoreBoard&, const ScoreBoard&) = default;
};

struct EliminationResult {
    ScoreBoard scoreboard;
    Motive eliminated = Motive::Profit;
    std::vector<Motive> remaining;

    friend bool operator==(const EliminationResult&, const EliminationResult&) = default;
};

struct OrgProfile {
    std::string company_name = "Jacob & Co Ltd";
    std::string description = "a hedge fund based in Gibraltar and Panama";

    void validate() const;
    friend bool operator==(const OrgProfile&, const OrgProfile&) = default;
};

enum class GeneratorMode : std::uint8_t { RemoteLlm, DeterministicTemplate };

std::string_view to_string(GeneratorMode mode) noexcept;
GeneratorMode parse_generator_mode(std::string_view s);

struct CampaignConfig {
    std::string campaign_id = "exercise";
    int accesses_per_env = 6;
    int docs_per_type = 10;
    std::vector<Motive> initial_motives{kAllMotives.begin(), kAllMotives.end()};
    OrgProfile org_profile;
    GeneratorMode generator_mode = GeneratorMode::DeterministicTemplate;
    std::uint64_t seed = 0;
    std::string root_dir = "fileshares";
    std::string file_extension = ".docx";
    // Seconds without a recorded access before an environment is closed with
    // whatever it has. 0 disables the timeout.
    int idle_timeout_seconds = 0;

    // Throws ValidationError on N < 2, fewer than two or repeated initial
    // motives, docs_per_type < 1, empty campaign id or invalid org profile.
    void validate() const;

    friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

void to_json(json& j, Motive m);
void from_json(const json& j, Motive& m);
void to_json(json& j, DocType t);
void from_json(const json& j, DocType& t);
void to_json(json& j, const DocumentLocation& loc);
void from_json(const json& j, DocumentLocation& loc);
void to_json(json& j, const ScoreBoard& board);
void from_json(const json& j, ScoreBoard& board);
void to_json(json& j, const EliminationResult& r);
void from_json(const json& j, EliminationResult& r);
void to_json(json& j, const OrgProfile& org);
void from_json(const json& j, OrgProfile& org);
void to_json(json& j, const CampaignConfig& cfg);
void from_json(const json& j, CampaignConfig& cfg);

}  // namespace motivetrap
