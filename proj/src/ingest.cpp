#include "motivetrap/ingest.hpp"

#include <fstream>

#include "motivetrap/errors.hpp"

namespace motivetrap {

namespace {

const json& require_field(const json& j, const char* key, json::value_t type) {
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
    const bool ok = type == json::value_t::number_integer
                        ? (it->is_number_integer())
                        : it->type() == type;
    if (!ok) throw ValidationError(std::string("field '") + key + "' has the wrong type");
    return *it;
}

}  // namespace

AccessEvent parse_event(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("event must be a JSON object");

    AccessEvent e;
    e.campaign_id = require_field(j, "campaign_id", json::value_t::string).get<std::string>();
    const auto env_index = require_field(j, "env_index", json::value_t::number_integer).get<long long>();
    if (env_index < 1 || env_index > 1'000'000) throw ValidationError("field 'env_index' out of range");
    e.env_index = static_cast<int>(env_index);
    e.location.path = require_field(j, "path", json::value_t::string).get<std::string>();
    e.location.host = require_field(j, "host", json::value_t::string).get<std::string>();
    const auto ts = require_field(j, "timestamp", json::value_t::string).get<std::string>();
    try {
        e.timestamp = parse_rfc3339(ts);
    } catch (const ValidationError& err) {
        throw ValidationError(std::string("field 'timestamp': ") + err.what());
    }
    e.kind = require_field(j, "kind", json::value_t::string).get<std::string>();
    if (e.campaign_id.empty()) throw ValidationError("field 'campaign_id' is empty");
    if (e.kind.empty()) throw ValidationError("field 'kind' is empty");
    try {
        e.location.validate();
    } catch (const ValidationError& err) {
        throw ValidationError(std::string("fields 'path'/'host': ") + err.what());
    }
    return e;
}

std::string serialize_event(const AccessEvent& event) {
    return json{{"campaign_id", event.campaign_id},
                {"env_index", event.env_index},
                {"path", event.location.path},
                {"host", event.location.host},
                {"timestamp", format_rfc3339(event.timestamp)},
                {"kind", event.kind}}
        .dump();
}

Delivery deliver_event(CampaignEngine& engine, const AccessEvent& event) {
    Delivery d;
    if (event.kind != kDocOpenKind) {
        engine.note_filtered();
        d.status = Delivery::Status::Filtered;
        return d;
    }
    try {
        d.transition = engine.submit(event);
        d.status = Delivery::Status::Applied;
    } catch (const StaleEventError& e) {
        d.status = Delivery::Status::Stale;
        d.error = e.what();
    } catch (const ValidationError& e) {
        d.status = Delivery::Status::Invalid;
        d.error = e.what();
    } catch (const Error& e) {
        d.status = Delivery::Status::Failed;
        d.error = e.what();
    }
    return d;
}

Delivery deliver_bytes(CampaignEngine& engine, std::string_view bytes) {
    AccessEvent event;
    try {
        event = parse_event(bytes);
    } catch (const ValidationError& e) {
        engine.note_error();
        Delivery d;
        d.status = Delivery::Status::Invalid;
        d.error = e.what();
        return d;
    }
    return deliver_event(engine, event);
}

void to_json(json& j, const IngestSummary& s) {
    j = json(s.counts);
    if (s.source_error) j["source_error"] = *s.source_error;
}

IngestSummary ingest_stream(std::istream& in, CampaignEngine& engine) {
    IngestSummary summary;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const Delivery d = deliver_bytes(engine, line);
        switch (d.status) {
            case Delivery::Status::Applied:
                switch (d.transition->kind) {
                    case TransitionKind::DuplicateIgnored: ++summary.counts.duplicates; break;
                    case TransitionKind::UnknownFileIgnored: ++summary.counts.unknown; break;
                    default: ++summary.counts.recorded; break;
                }
                break;
            case Delivery::Status::Filtered: ++summary.counts.filtered; break;
            default: ++summary.counts.errors; break;
        }
    }
    if (in.bad()) summary.source_error = "read error on replay source";
    return summary;
}

IngestSummary ingest_file(const std::filesystem::path& path, CampaignEngine& engine) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        IngestSummary s;
        s.source_error = "cannot open " + path.string();
        return s;
    }
    return ingest_stream(in, engine);
}

}  // namespace motivetrap
