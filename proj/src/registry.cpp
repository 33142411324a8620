#include "motivetrap/registry.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <sstream>

#include "motivetrap/errors.hpp"
#include "motivetrap/hashing.hpp"

namespace motivetrap {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("EVP_Digest(sha256) failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0f]);
    }
    return out;
}

std::string canonical_location_json(const DocumentLocation& location) {
    // Built by hand so key order is path-then-host regardless of how the json
    // library orders object keys; only string escaping is delegated.
    try {
        std::string out = "{\"path\":";
        out += json(location.path).dump();
        out += ",\"host\":";
        out += json(location.host).dump();
        out += '}';
        return out;
    } catch (const json::type_error&) {
        throw ValidationError("location is not valid UTF-8");
    }
}

std::string compute_loc_hash(const DocumentLocation& location) {
    location.validate();
    return sha256_hex(canonical_location_json(location));
}

bool is_valid_loc_hash(std::string_view s) noexcept {
    if (s.size() != 64) return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

DocumentRecord DocumentRecord::for_document(const DocumentLocation& location, int env_index,
                                            DocType t, std::string subject) {
    DocumentRecord r;
    r.loc_hash = compute_loc_hash(location);
    r.deception_host = env_index;
    r.motives = {{motive_for_type(t), 1.0}};
    r.subject = std::move(subject);
    r.doc_type = t;
    return r;
}

void DocumentRecord::validate() const {
    if (!is_valid_loc_hash(loc_hash)) throw ValidationError("malformed loc_hash: " + loc_hash);
    if (deception_host < 1) throw ValidationError("deception_host must be >= 1");
    if (motives.size() != 1) throw ValidationError("record must carry exactly one motive");
    if (motives.begin()->second != 1.0) throw ValidationError("motive weight must be 1.0");
    if (type_for_motive(motive()) != doc_type)
        throw ValidationError("record type " + std::string(to_string(doc_type)) +
                              " contradicts motive " + std::string(to_string(motive())));
    if (subject.empty()) throw ValidationError("record subject is empty");
}

Registry::Registry(RegistrySnapshot snapshot) {
    if (snapshot.version != kRegistrySnapshotVersion)
        throw FormatError("unknown registry snapshot version " + std::to_string(snapshot.version));
    for (auto& [key, record] : snapshot.records) {
        if (key != record.loc_hash) throw FormatError("snapshot key does not match record hash");
        record.validate();
    }
    records_ = std::move(snapshot.records);
}

void Registry::register_document(DocumentRecord record) {
    record.validate();
    const auto [it, inserted] = records_.try_emplace(record.loc_hash, record);
    if (!inserted) throw ConflictError("loc_hash already registered: " + record.loc_hash);
}

void Registry::register_batch(std::vector<DocumentRecord> records) {
    std::map<std::string, DocumentRecord> staged;
    for (auto& r : records) {
        r.validate();
        if (records_.count(r.loc_hash) != 0 || staged.count(r.loc_hash) != 0)
            throw ConflictError("loc_hash already registered: " + r.loc_hash);
        staged.emplace(r.loc_hash, std::move(r));
    }
    records_.merge(staged);
}

std::optional<DocumentRecord> Registry::lookup(std::string_view loc_hash) const {
    if (!is_valid_loc_hash(loc_hash))
        throw ValidationError("malformed loc_hash: '" + std::string(loc_hash) + "'");
    const auto it = records_.find(std::string(loc_hash));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

RegistrySnapshot Registry::snapshot() const { return RegistrySnapshot{kRegistrySnapshotVersion, records_}; }

void to_json(json& j, const DocumentRecord& r) {
    json motives = json::object();
    for (const auto& [m, w] : r.motives) motives[std::string(to_string(m))] = w;
    j = json{{"loc_hash", r.loc_hash},
             {"deception_host", r.deception_host},
             {"motives", std::move(motives)},
             {"subject", r.subject},
             {"type", r.doc_type}};
}

void from_json(const json& j, DocumentRecord& r) {
    j.at("loc_hash").get_to(r.loc_hash);
    j.at("deception_host").get_to(r.deception_host);
    r.motives.clear();
    for (const auto& [key, value] : j.at("motives").items())
        r.motives[parse_motive(key)] = value.get<double>();
    j.at("subject").get_to(r.subject);
    j.at("type").get_to(r.doc_type);
}

json snapshot_to_json(const RegistrySnapshot& snapshot) {
    json records = json::array();
    for (const auto& [key, record] : snapshot.records) records.push_back(record);
    return json{{"version", snapshot.version}, {"records", std::move(records)}};
}

RegistrySnapshot snapshot_from_json(const json& j) {
    try {
        RegistrySnapshot out;
        j.at("version").get_to(out.version);
        if (out.version != kRegistrySnapshotVersion)
            throw FormatError("unknown registry snapshot version " + std::to_string(out.version));
        for (const auto& item : j.at("records")) {
            auto record = item.get<DocumentRecord>();
            record.validate();
            if (!out.records.emplace(record.loc_hash, record).second)
                throw FormatError("duplicate loc_hash in snapshot: " + record.loc_hash);
        }
        return out;
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid registry snapshot: ") + e.what());
    } catch (const ValidationError& e) {
        throw FormatError(std::string("invalid registry snapshot: ") + e.what());
    }
}

void write_text_atomic(const fs::path& path, std::string_view text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return ss.str();
}

void save_snapshot(const RegistrySnapshot& snapshot, const fs::path& path) {
    write_text_atomic(path, snapshot_to_json(snapshot).dump(2) + "\n");
}

RegistrySnapshot load_snapshot(const fs::path& path) {
    const std::string text = read_text(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("registry snapshot " + path.string() + " is not valid JSON: " + e.what());
    }
    return snapshot_from_json(j);
}

}  // namespace motivetrap
