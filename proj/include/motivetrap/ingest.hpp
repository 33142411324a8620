#pragma once

// Document-open telemetry boundary. Events arrive as WireEvent JSON (HTTP body
// or one per line in a replay file), are validated, and are handed to the
// engine in arrival order.

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>

#include "motivetrap/engine.hpp"

namespace motivetrap {

// Keys: campaign_id, env_index, path, host, timestamp, kind. Throws
// ValidationError naming the offending field.
AccessEvent parse_event(std::string_view bytes);

// Single-line WireEvent JSON.
std::string serialize_event(const AccessEvent& event);

struct Delivery {
    enum class Status { Applied, Filtered, Invalid, Stale, Failed };
    Status status = Status::Applied;
    std::optional<Transition> transition;
    std::string error;
};

// In-process source. Non doc_open kinds are acknowledged and dropped.
Delivery deliver_event(CampaignEngine& engine, const AccessEvent& event);
// Parse then deliver; parse failures come back as Invalid.
Delivery deliver_bytes(CampaignEngine& engine, std::string_view bytes);

struct IngestSummary {
    IngestCounters counts;
    // Set when the source itself failed; counts reflect progress up to there.
    std::optional<std::string> source_error;
};

void to_json(json& j, const IngestSummary& s);

// Replays JSON Lines strictly in order. A bad line is counted as an error and
// skipped; blank lines are ignored.
IngestSummary ingest_stream(std::istream& in, CampaignEngine& engine);
IngestSummary ingest_file(const std::filesystem::path& path, CampaignEngine& engine);

}  // namespace motivetrap
