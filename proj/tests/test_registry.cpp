#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>

#include "motivetrap/errors.hpp"
#include "motivetrap/hashing.hpp"
#include "motivetrap/registry.hpp"
#include "support.hpp"

using namespace motivetrap;
using motivetrap::testing::TempDir;

namespace {

// Golden digests computed with Python's hashlib over the canonical byte
// strings below, before the library existed. Do not regenerate from the
// library under test.
struct Golden {
    DocumentLocation location;
    const char* canonical;
    const char* sha256;
};

const Golden kGoldens[] = {
    {{"/share/docs/a.docx", "fs-01"},
     R"({"path":"/share/docs/a.docx","host":"fs-01"})",
     "628daf1b268d976160af04b1011737b613c39995b268696eea2c43cda91a2fe6"},
    {{"/a", "h1"}, R"({"path":"/a","host":"h1"})",
     "f4f738d6e9453600859af7ef6067a875a605c5c4f9e04d4232949ff8c4639f46"},
    {{"/a", "h2"}, R"({"path":"/a","host":"h2"})",
     "f1edc1e35e1d7daa7a61a85b276b20c4e0d21f2e80827827979150d680f783fe"},
    {{"/srv/fileshares/env-1/IT Asset Inventory01.docx", "deception-env-1"},
     R"({"path":"/srv/fileshares/env-1/IT Asset Inventory01.docx","host":"deception-env-1"})",
     "c34c2ba06572711fefbabb357640fe7dd5ba46780a0256b424d3e4f6703f9821"},
    {{"/tmp/we\"ird\\name.docx", "host-\xc3\xa9"},
     "{\"path\":\"/tmp/we\\\"ird\\\\name.docx\",\"host\":\"host-\xc3\xa9\"}",
     "721ee7f4e5b3cee748347d6559dc2d2b4cfeb3a6c39321d24a066848940fce94"},
};

DocumentRecord record_at(const std::string& path, int env, DocType t, const std::string& subject = "Budgets") {
    return DocumentRecord::for_document({path, "deception-env-" + std::to_string(env)}, env, t, subject);
}

}  // namespace

TEST_CASE("canonical location bytes and digests match the independent oracle") {
    for (const auto& g : kGoldens) {
        CAPTURE(g.location.path);
        CHECK(canonical_location_json(g.location) == g.canonical);
        CHECK(compute_loc_hash(g.location) == g.sha256);
    }
}

TEST_CASE("sha256_hex known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("loc hash determinism and host sensitivity") {
    const DocumentLocation a{"/a", "h1"};
    CHECK(compute_loc_hash(a) == compute_loc_hash(a));
    CHECK(compute_loc_hash(a) != compute_loc_hash({"/a", "h2"}));
    CHECK(is_valid_loc_hash(compute_loc_hash(a)));
    CHECK_THROWS_AS(compute_loc_hash({"relative", "h"}), ValidationError);
    CHECK_THROWS_AS(compute_loc_hash({"/x", "\xff\xfe"}), ValidationError);
}

TEST_CASE("hash format check") {
    CHECK_FALSE(is_valid_loc_hash(std::string(63, 'a')));
    CHECK_FALSE(is_valid_loc_hash(std::string(65, 'a')));
    CHECK_FALSE(is_valid_loc_hash(std::string(64, 'A')));
    CHECK_FALSE(is_valid_loc_hash(std::string(63, 'a') + "g"));
    CHECK(is_valid_loc_hash(std::string(64, 'f')));
}

TEST_CASE("register and lookup") {
    Registry reg;
    const auto r = record_at("/share/env-1/Budgets01.docx", 1, DocType::Financial);
    reg.register_document(r);
    CHECK(reg.size() == 1);

    const auto found = reg.lookup(r.loc_hash);
    REQUIRE(found.has_value());
    CHECK(*found == r);
    CHECK(found->motive() == Motive::Profit);

    CHECK_FALSE(reg.lookup(std::string(64, '0')).has_value());
    CHECK_THROWS_AS(reg.lookup(std::string(63, '0')), ValidationError);
    CHECK_THROWS_AS(reg.register_document(r), ConflictError);
}

TEST_CASE("records must be internally consistent") {
    Registry reg;
    auto r = record_at("/share/x.docx", 1, DocType::Financial);
    r.doc_type = DocType::HR;  // contradicts motive profit
    CHECK_THROWS_AS(reg.register_document(r), ValidationError);

    r = record_at("/share/x.docx", 1, DocType::Financial);
    r.motives[Motive::Ideological] = 1.0;
    CHECK_THROWS_AS(reg.register_document(r), ValidationError);

    r = record_at("/share/x.docx", 1, DocType::Financial);
    r.motives[Motive::Profit] = 0.5;
    CHECK_THROWS_AS(reg.register_document(r), ValidationError);
    CHECK(reg.empty());
}

TEST_CASE("batch registration is all-or-nothing") {
    Registry reg;
    const auto a = record_at("/s/a", 1, DocType::Legal, "Contracts");
    const auto b = record_at("/s/b", 1, DocType::IT, "System Documentation");
    reg.register_document(a);
    CHECK_THROWS_AS(reg.register_batch({b, a}), ConflictError);
    CHECK(reg.size() == 1);
    CHECK_THROWS_AS(reg.register_batch({b, b}), ConflictError);
    CHECK(reg.size() == 1);
    reg.register_batch({b});
    CHECK(reg.size() == 2);
}

TEST_CASE("snapshot persistence") {
    TempDir dir;
    const auto path = dir.path() / "registry.json";

    SUBCASE("50 records round-trip") {
        Registry reg;
        int i = 0;
        for (DocType t : kAllDocTypes)
            for (int k = 0; k < 10; ++k)
                reg.register_document(record_at("/share/env-2/doc" + std::to_string(i++) + ".docx", 2, t,
                                                "Subject " + std::to_string(k)));
        save_snapshot(reg.snapshot(), path);
        const Registry loaded(load_snapshot(path));
        CHECK(loaded.size() == 50);
        CHECK(loaded == reg);
    }

    SUBCASE("empty registry round-trips") {
        save_snapshot(Registry{}.snapshot(), path);
        CHECK(Registry(load_snapshot(path)).empty());
    }

    SUBCASE("field names are exactly the metadata schema") {
        Registry reg;
        reg.register_document(record_at("/share/a.docx", 3, DocType::Operational, "Production Plans"));
        save_snapshot(reg.snapshot(), path);
        const auto j = json::parse(read_text(path));
        CHECK(j.at("version") == 1);
        const auto& rec = j.at("records").at(0);
        std::set<std::string> keys;
        for (const auto& [k, v] : rec.items()) keys.insert(k);
        CHECK(keys == std::set<std::string>{"loc_hash", "deception_host", "motives", "subject", "type"});
        CHECK(rec.at("motives") == json{{"geopolitical", 1.0}});
        CHECK(rec.at("type") == "operational");
        CHECK(rec.at("deception_host") == 3);
    }

    SUBCASE("corrupted file is a format error") {
        std::ofstream(path) << "{\"version\": 1, \"records\": [ {\"loc_hash\": ";
        CHECK_THROWS_AS(load_snapshot(path), FormatError);
    }

    SUBCASE("unknown version is a format error") {
        std::ofstream(path) << R"({"version": 99, "records": []})";
        CHECK_THROWS_AS(load_snapshot(path), FormatError);
    }

    SUBCASE("record with a contradicting type is a format error") {
        auto r = record_at("/share/a.docx", 1, DocType::Financial);
        json j = snapshot_to_json(RegistrySnapshot{1, {{r.loc_hash, r}}});
        j["records"][0]["type"] = "hr";
        std::ofstream(path) << j.dump();
        CHECK_THROWS_AS(load_snapshot(path), FormatError);
    }

    SUBCASE("missing file is an I/O error") {
        CHECK_THROWS_AS(load_snapshot(dir.path() / "nope.json"), IoError);
    }
}
