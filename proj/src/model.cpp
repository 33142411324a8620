#include "motivetrap/model.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>

#include "motivetrap/errors.hpp"

namespace motivetrap {

namespace {

constexpr std::array<std::string_view, 5> kMotiveNames{
    "profit", "ideological", "geopolitical", "satisfaction", "discontent"};
constexpr std::array<std::string_view, 5> kDocTypeNames{
    "financial", "hr", "operational", "it", "legal"};

// Parses exactly `width` decimal digits starting at pos.
int read_digits(std::string_view text, std::size_t pos, std::size_t width) {
    if (pos + width > text.size()) throw ValidationError("timestamp truncated");
    int value = 0;
    for (std::size_t i = pos; i < pos + width; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') throw ValidationError("timestamp has non-digit where digit expected");
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char want) {
    if (pos >= text.size() || text[pos] != want)
        throw ValidationError(std::string("timestamp missing '") + want + "'");
}

}  // namespace

std::string_view to_string(Motive m) noexcept {
    return kMotiveNames[static_cast<std::size_t>(m)];
}

std::string_view to_string(DocType t) noexcept {
    return kDocTypeNames[static_cast<std::size_t>(t)];
}

std::optional<Motive> motive_from_string(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kMotiveNames.size(); ++i)
        if (kMotiveNames[i] == s) return static_cast<Motive>(i);
    return std::nullopt;
}

std::optional<DocType> doc_type_from_string(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kDocTypeNames.size(); ++i)
        if (kDocTypeNames[i] == s) return static_cast<DocType>(i);
    return std::nullopt;
}

Motive parse_motive(std::string_view s) {
    if (auto m = motive_from_string(s)) return *m;
    throw ValidationError("unknown motive: " + std::string(s));
}

DocType parse_doc_type(std::string_view s) {
    if (auto t = doc_type_from_string(s)) return *t;
    throw ValidationError("unknown document type: " + std::string(s));
}

void DocumentLocation::validate() const {
    if (path.empty()) throw ValidationError("location path is empty");
    if (path.front() != '/') throw ValidationError("location path is not absolute: " + path);
    if (host.empty()) throw ValidationError("location host is empty");
}

Timestamp parse_rfc3339(std::string_view text) {
    using namespace std::chrono;
    const int year = read_digits(text, 0, 4);
    expect_char(text, 4, '-');
    const int month = read_digits(text, 5, 2);
    expect_char(text, 7, '-');
    const int day = read_digits(text, 8, 2);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't'))
        throw ValidationError("timestamp missing 'T' separator");
    const int hour = read_digits(text, 11, 2);
    expect_char(text, 13, ':');
    const int minute = read_digits(text, 14, 2);
    expect_char(text, 16, ':');
    const int second = read_digits(text, 17, 2);

    std::size_t pos = 19;
    int millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw ValidationError("timestamp has empty fraction");
        for (std::size_t i = start; i < start + 3; ++i)
            millis = millis * 10 + (i < pos ? text[i] - '0' : 0);
    }

    if (pos >= text.size()) throw ValidationError("timestamp missing UTC offset");
    int offset_minutes = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = read_digits(text, pos + 1, 2);
        expect_char(text, pos + 3, ':');
        const int om = read_digits(text, pos + 4, 2);
        if (oh > 23 || om > 59) throw ValidationError("timestamp offset out of range");
        offset_minutes = sign * (oh * 60 + om);
        pos += 6;
    } else {
        throw ValidationError("timestamp has invalid UTC offset");
    }
    if (pos != text.size()) throw ValidationError("trailing characters after timestamp");

    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) throw ValidationError("timestamp date is invalid");
    // 60 admits a leap second; it folds into the next minute.
    if (hour > 23 || minute > 59 || second > 60) throw ValidationError("timestamp time is invalid");

    const auto local = sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second} +
                       milliseconds{millis};
    return time_point_cast<milliseconds>(local - minutes{offset_minutes});
}

std::string format_rfc3339(Timestamp ts) {
    using namespace std::chrono;
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss<milliseconds> tod{ts - day};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()),
                  static_cast<int>(tod.subseconds().count()));
    return buf;
}

int ScoreBoard::total() const {
    return std::accumulate(scores.begin(), scores.end(), 0,
                           [](int acc, const auto& kv) { return acc + kv.second; });
}

void OrgProfile::validate() const {
    if (company_name.empty()) throw ValidationError("org profile company_name is empty");
    if (description.empty()) throw ValidationError("org profile description is empty");
}

std::string_view to_string(GeneratorMode mode) noexcept {
    return mode == GeneratorMode::RemoteLlm ? "remote-llm" : "deterministic-template";
}

GeneratorMode parse_generator_mode(std::string_view s) {
    if (s == "remote-llm") return GeneratorMode::RemoteLlm;
    if (s == "deterministic-template") return GeneratorMode::DeterministicTemplate;
    throw ValidationError("unknown generator mode: " + std::string(s));
}

void CampaignConfig::validate() const {
    if (campaign_id.empty()) throw ValidationError("campaign_id is empty");
    if (accesses_per_env < 2) throw ValidationError("accesses_per_env must be >= 2");
    if (docs_per_type < 1) throw ValidationError("docs_per_type must be >= 1");
    if (initial_motives.size() < 2) throw ValidationError("need at least two initial motives");
    std::set<Motive> seen(initial_motives.begin(), initial_motives.end());
    if (seen.size() != initial_motives.size()) throw ValidationError("initial motives repeat");
    if (root_dir.empty()) throw ValidationError("root_dir is empty");
    if (idle_timeout_seconds < 0) throw ValidationError("idle_timeout_seconds must be >= 0");
    org_profile.validate();
}

// ---- JSON ----------------------------------------------------------------

void to_json(json& j, Motive m) { j = std::string(to_string(m)); }
void from_json(const json& j, Motive& m) { m = parse_motive(j.get<std::string>()); }
void to_json(json& j, DocType t) { j = std::string(to_string(t)); }
void from_json(const json& j, DocType& t) { t = parse_doc_type(j.get<std::string>()); }

void to_json(json& j, const DocumentLocation& loc) {
    j = json{{"path", loc.path}, {"host", loc.host}};
}

void from_json(const json& j, DocumentLocation& loc) {
    j.at("path").get_to(loc.path);
    j.at("host").get_to(loc.host);
}

void to_json(json& j, const ScoreBoard& board) {
    j = json::object();
    for (const auto& [m, score] : board.scores) j[std::string(to_string(m))] = score;
}

void from_json(const json& j, ScoreBoard& board) {
    board.scores.clear();
    for (const auto& [key, value] : j.items()) board.scores[parse_motive(key)] = value.get<int>();
}

void to_json(json& j, const EliminationResult& r) {
    j = json{{"scoreboard", r.scoreboard}, {"eliminated", r.eliminated}, {"remaining", r.remaining}};
}

void from_json(const json& j, EliminationResult& r) {
    j.at("scoreboard").get_to(r.scoreboard);
    j.at("eliminated").get_to(r.eliminated);
    j.at("remaining").get_to(r.remaining);
}

void to_json(json& j, const OrgProfile& org) {
    j = json{{"company_name", org.company_name}, {"description", org.description}};
}

void from_json(const json& j, OrgProfile& org) {
    j.at("company_name").get_to(org.company_name);
    j.at("description").get_to(org.description);
}

void to_json(json& j, const CampaignConfig& cfg) {
    j = json{{"campaign_id", cfg.campaign_id},
             {"accesses_per_env", cfg.accesses_per_env},
             {"docs_per_type", cfg.docs_per_type},
             {"initial_motives", cfg.initial_motives},
             {"org_profile", cfg.org_profile},
             {"generator_mode", std::string(to_string(cfg.generator_mode))},
             {"seed", cfg.seed},
             {"root_dir", cfg.root_dir},
             {"file_extension", cfg.file_extension},
             {"idle_timeout_seconds", cfg.idle_timeout_seconds}};
}

// Missing keys keep their defaults so hand-written configs can be partial.
void from_json(const json& j, CampaignConfig& cfg) {
    CampaignConfig out;
    if (j.contains("campaign_id")) j.at("campaign_id").get_to(out.campaign_id);
    if (j.contains("accesses_per_env")) j.at("accesses_per_env").get_to(out.accesses_per_env);
    if (j.contains("docs_per_type")) j.at("docs_per_type").get_to(out.docs_per_type);
    if (j.contains("initial_motives")) j.at("initial_motives").get_to(out.initial_motives);
    if (j.contains("org_profile")) j.at("org_profile").get_to(out.org_profile);
    if (j.contains("generator_mode"))
        out.generator_mode = parse_generator_mode(j.at("generator_mode").get<std::string>());
    if (j.contains("seed")) j.at("seed").get_to(out.seed);
    if (j.contains("root_dir")) j.at("root_dir").get_to(out.root_dir);
    if (j.contains("file_extension")) j.at("file_extension").get_to(out.file_extension);
    if (j.contains("idle_timeout_seconds"))
        j.at("idle_timeout_seconds").get_to(out.idle_timeout_seconds);
    cfg = std::move(out);
}

}  // namespace motivetrap
