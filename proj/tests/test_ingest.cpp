#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "motivetrap/attacker_sim.hpp"
#include "motivetrap/engine.hpp"
#include "motivetrap/errors.hpp"
#include "motivetrap/ingest.hpp"
#include "support.hpp"

using namespace motivetrap;
using namespace motivetrap::testing;

namespace {

std::unique_ptr<CampaignEngine> disk_engine(const CampaignConfig& cfg, bool persist = false) {
    auto e = std::make_unique<CampaignEngine>(std::make_shared<TemplateBackend>(),
                                              std::make_shared<DiskFileshare>(), persist);
    e->start(cfg);
    return e;
}

const char* kValid =
    R"({"campaign_id":"exercise","env_index":1,"path":"/srv/env-1/Budgets01.docx",)"
    R"("host":"deception-env-1","timestamp":"2024-01-08T09:00:00Z","kind":"doc_open"})";

}  // namespace

TEST_CASE("parse a well-formed event") {
    const AccessEvent e = parse_event(kValid);
    CHECK(e.campaign_id == "exercise");
    CHECK(e.env_index == 1);
    CHECK(e.location.path == "/srv/env-1/Budgets01.docx");
    CHECK(e.location.host == "deception-env-1");
    CHECK(e.kind == "doc_open");
    CHECK(format_rfc3339(e.timestamp) == "2024-01-08T09:00:00.000Z");
}

TEST_CASE("parse errors name the field") {
    auto without = [](const char* key) {
        json j = json::parse(kValid);
        j.erase(key);
        return j.dump();
    };
    for (const char* key : {"campaign_id", "env_index", "path", "host", "timestamp", "kind"}) {
        CAPTURE(key);
        try {
            parse_event(without(key));
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find(key) != std::string::npos);
        }
    }

    json bad_ts = json::parse(kValid);
    bad_ts["timestamp"] = "yesterday";
    CHECK_THROWS_AS(parse_event(bad_ts.dump()), ValidationError);
    json bad_env = json::parse(kValid);
    bad_env["env_index"] = "one";
    CHECK_THROWS_AS(parse_event(bad_env.dump()), ValidationError);
    json bad_path = json::parse(kValid);
    bad_path["path"] = "relative.docx";
    CHECK_THROWS_AS(parse_event(bad_path.dump()), ValidationError);
    CHECK_THROWS_AS(parse_event("{not json"), ValidationError);
    CHECK_THROWS_AS(parse_event("[1,2]"), ValidationError);
}

TEST_CASE("property: serialize then parse is the identity") {
    std::mt19937_64 rng(99);
    const std::string alphabet = "abcXYZ019 _-./\"\\\xc3\xa9";
    auto random_text = [&](std::size_t min_len) {
        std::string s;
        const auto len = std::uniform_int_distribution<std::size_t>(min_len, 24)(rng);
        while (s.size() < len) {
            const auto i = std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng);
            if (static_cast<unsigned char>(alphabet[i]) >= 0x80) s += "\xc3\xa9";
            else s += alphabet[i];
        }
        return s;
    };
    for (int i = 0; i < 300; ++i) {
        AccessEvent e;
        e.campaign_id = random_text(1);
        e.env_index = std::uniform_int_distribution<int>(1, 50)(rng);
        e.location = {"/" + random_text(0), random_text(1)};
        e.timestamp = Timestamp{std::chrono::milliseconds(std::uniform_int_distribution<long long>(0, 4e12)(rng))};
        e.kind = i % 3 == 0 ? "file_write" : "doc_open";
        const std::string line = serialize_event(e);
        CHECK(line.find('\n') == std::string::npos);
        REQUIRE(parse_event(line) == e);
    }
}

TEST_CASE("delivery outcomes and counters") {
    TempDir dir;
    auto engine = disk_engine(config_in(dir.path()));
    AccessEvent e;
    engine->read([&](const Campaign& c) { e = open_event(c, "Budgets"); });

    CHECK(deliver_event(*engine, e).status == Delivery::Status::Applied);
    const auto dup = deliver_event(*engine, e);
    CHECK(dup.status == Delivery::Status::Applied);
    CHECK(dup.transition->kind == TransitionKind::DuplicateIgnored);

    auto write = e;
    write.kind = "file_write";
    CHECK(deliver_event(*engine, write).status == Delivery::Status::Filtered);

    auto wrong = e;
    wrong.campaign_id = "other";
    CHECK(deliver_event(*engine, wrong).status == Delivery::Status::Invalid);
    CHECK(deliver_bytes(*engine, "garbage").status == Delivery::Status::Invalid);

    const auto c = engine->counters();
    CHECK(c.recorded == 1);
    CHECK(c.duplicates == 1);
    CHECK(c.filtered == 1);
    CHECK(c.errors == 2);
    CHECK(c.unknown == 0);
}

TEST_CASE("replaying an exported exercise reaches the same report") {
    TempDir dir;
    const auto cfg = config_in(dir.path(), 17);
    const Transcript t = run_exercise(cfg, Persona{Motive::Geopolitical, 0.0, 5});
    REQUIRE(t.events.size() == 24);
    REQUIRE(t.prediction == Motive::Geopolitical);

    std::istringstream in(export_events_jsonl(t));
    auto engine = disk_engine(cfg);
    const IngestSummary s = ingest_stream(in, *engine);
    CHECK_FALSE(s.source_error.has_value());
    CHECK(s.counts.recorded == 24);
    CHECK(s.counts.errors == 0);
    CHECK(s.counts.duplicates == 0);
    const auto report = engine->report();
    CHECK(report.status == CampaignStatus::Finished);
    CHECK(report.prediction == Motive::Geopolitical);
    CHECK(report_to_string(report) == report_to_string(t.report));
}

TEST_CASE("empty, blank and corrupt inputs") {
    TempDir dir;
    const auto cfg = config_in(dir.path());

    SUBCASE("empty stream changes nothing") {
        auto engine = disk_engine(cfg);
        const auto before = engine->report();
        std::istringstream in("");
        const auto s = ingest_stream(in, *engine);
        CHECK(s.counts == IngestCounters{});
        CHECK(engine->report() == before);
        CHECK(engine->report().environments.front().accesses.empty());
    }

    SUBCASE("one corrupt line among good ones") {
        const Transcript t = run_exercise(cfg, Persona{Motive::Profit, 0.0, 1});
        std::string lines = export_events_jsonl(t);
        const auto first_nl = lines.find('\n');
        lines.insert(first_nl + 1, "{\"campaign_id\": truncated\n\n");
        std::istringstream in(lines);
        auto engine = disk_engine(cfg);
        const auto s = ingest_stream(in, *engine);
        CHECK(s.counts.errors == 1);
        CHECK(s.counts.recorded == 24);
        CHECK(engine->report().status == CampaignStatus::Finished);
    }

    SUBCASE("missing file is a source error") {
        auto engine = disk_engine(cfg);
        CHECK(ingest_file(dir.path() / "absent.jsonl", *engine).source_error.has_value());
    }
}

TEST_CASE("order matters: a permuted first environment scores differently") {
    TempDir dir;
    const auto cfg = config_in(dir.path(), 23);
    const Transcript t = run_exercise(cfg, Persona{Motive::Satisfaction, 1.0, 8});
    std::vector<std::string> lines;
    {
        std::istringstream in(export_events_jsonl(t));
        for (std::string l; std::getline(in, l);) lines.push_back(l);
    }
    // Reverse the six environment-1 accesses.
    std::reverse(lines.begin(), lines.begin() + 6);
    std::string permuted;
    for (const auto& l : lines) permuted += l + "\n";

    std::istringstream in(permuted);
    auto engine = disk_engine(cfg);
    ingest_stream(in, *engine);
    const auto replayed = engine->report();
    REQUIRE_FALSE(replayed.environments.empty());
    CHECK(replayed.environments.front().scoreboard != t.report.environments.front().scoreboard);
    CHECK(report_to_string(replayed) != report_to_string(t.report));
}

TEST_CASE("concurrent submitters are serialized") {
    TempDir dir;
    auto engine = disk_engine(config_in(dir.path()));
    std::vector<AccessEvent> events;
    engine->read([&](const Campaign& c) {
        for (const auto& d : c.current_environment().documents)
            if (events.size() < 5) events.push_back(open_event(c, d));
    });
    // Four threads each submit the same five events.
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&] {
            for (const auto& e : events) deliver_event(*engine, e);
        });
    for (auto& th : threads) th.join();
    const auto c = engine->counters();
    CHECK(c.recorded == 5);
    CHECK(c.duplicates == 15);
    CHECK(engine->transition_count() == 20);
    engine->read([](const Campaign& camp) { CHECK_NOTHROW(camp.check_invariants()); });
}
