#include "motivetrap/fileshare.hpp"

#include <fstream>

#include "motivetrap/errors.hpp"
#include "motivetrap/registry.hpp"

namespace motivetrap {

namespace fs = std::filesystem;

namespace {

bool is_environment_dir(const fs::path& p) {
    return p.filename().string().rfind("env-", 0) == 0;
}

}  // namespace

void DiskFileshare::deploy(const fs::path& directory, const std::vector<GeneratedDocument>& documents) {
    std::error_code ec;
    const bool existed = fs::exists(directory, ec);
    fs::create_directories(directory, ec);
    if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());

    std::vector<fs::path> written;
    try {
        for (const auto& doc : documents) {
            const fs::path file = directory / doc.file_name;
            std::ofstream out(file, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write " + file.string());
            written.push_back(file);
            out << doc.body;
            if (!out) throw IoError("write failed: " + file.string());
        }
    } catch (...) {
        for (const auto& f : written) fs::remove(f, ec);
        if (!existed) fs::remove_all(directory, ec);
        throw;
    }
}

std::string DiskFileshare::read(const fs::path& file) const { return read_text(file); }

void DiskFileshare::reset(const fs::path& root) {
    std::error_code ec;
    if (!fs::exists(root, ec)) return;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
        if (entry.is_directory() && is_environment_dir(entry.path())) fs::remove_all(entry.path(), ec);
        if (ec) throw IoError("cannot clear " + entry.path().string() + ": " + ec.message());
    }
    for (const char* name : {"campaign.json", "registry.json"}) fs::remove(root / name, ec);
}

void MemoryFileshare::deploy(const fs::path& directory, const std::vector<GeneratedDocument>& documents) {
    std::unique_lock lock(mutex_);
    for (const auto& doc : documents) files_[(directory / doc.file_name).string()] = doc.body;
}

std::string MemoryFileshare::read(const fs::path& file) const {
    std::shared_lock lock(mutex_);
    const auto it = files_.find(file.string());
    if (it == files_.end()) throw IoError("no such file: " + file.string());
    return it->second;
}

void MemoryFileshare::reset(const fs::path& root) {
    std::unique_lock lock(mutex_);
    const std::string prefix = root.string();
    for (auto it = files_.begin(); it != files_.end();) {
        if (it->first.rfind(prefix, 0) == 0)
            it = files_.erase(it);
        else
            ++it;
    }
}

std::size_t MemoryFileshare::file_count() const {
    std::shared_lock lock(mutex_);
    return files_.size();
}

}  // namespace motivetrap
