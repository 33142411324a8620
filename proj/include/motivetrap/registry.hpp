#pragma once

// Document metadata store keyed by location hash.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motivetrap/model.hpp"

namespace motivetrap {

// {"path":"<path>","host":"<host>"} with no whitespace and standard JSON
// string escaping. This byte string is the hash preimage.
std::string canonical_location_json(const DocumentLocation& location);

// SHA-256 of canonical_location_json, lowercase hex. Validates the location.
std::string compute_loc_hash(const DocumentLocation& location);

// 64 lowercase hex characters.
bool is_valid_loc_hash(std::string_view s) noexcept;

struct DocumentRecord {
    std::string loc_hash;
    int deception_host = 1;  // environment index the document is deployed to
    std::map<Motive, double> motives;
    std::string subject;
    DocType doc_type = DocType::Financial;

    // Builds a single-motive record for a document of type t at location.
    static DocumentRecord for_document(const DocumentLocation& location, int env_index, DocType t,
                                       std::string subject);

    // The one motive key. Valid only on a validated record.
    Motive motive() const { return motives.begin()->first; }

    // Throws ValidationError unless the hash is well formed, there is exactly
    // one motive of weight 1.0 and doc_type is that motive's type.
    void validate() const;

    friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

inline constexpr int kRegistrySnapshotVersion = 1;

struct RegistrySnapshot {
    int version = kRegistrySnapshotVersion;
    std::map<std::string, DocumentRecord> records;

    friend bool operator==(const RegistrySnapshot&, const RegistrySnapshot&) = default;
};

// Not internally synchronized; the campaign engine is the single writer and
// serializes access.
class Registry {
public:
    Registry() = default;
    explicit Registry(RegistrySnapshot snapshot);

    // Throws ValidationError on an invalid record, ConflictError on a
    // duplicate hash.
    void register_document(DocumentRecord record);

    // All-or-nothing: either every record is added or none is.
    void register_batch(std::vector<DocumentRecord> records);

    // NotFound is an empty optional. Throws ValidationError on a malformed hash.
    std::optional<DocumentRecord> lookup(std::string_view loc_hash) const;

    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const std::map<std::string, DocumentRecord>& records() const noexcept { return records_; }

    RegistrySnapshot snapshot() const;

    friend bool operator==(const Registry&, const Registry&) = default;

private:
    std::map<std::string, DocumentRecord> records_;
};

void to_json(json& j, const DocumentRecord& r);
void from_json(const json& j, DocumentRecord& r);

json snapshot_to_json(const RegistrySnapshot& snapshot);
// Throws FormatError on a structurally invalid document or unknown version.
RegistrySnapshot snapshot_from_json(const json& j);

// Atomic replace (write temp file, rename). Throws IoError.
void save_snapshot(const RegistrySnapshot& snapshot, const std::filesystem::path& path);
// Throws IoError when unreadable, FormatError when corrupt.
RegistrySnapshot load_snapshot(const std::filesystem::path& path);

// Shared by every JSON file this library persists.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace motivetrap
