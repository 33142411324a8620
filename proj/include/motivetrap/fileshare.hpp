#pragma once

// Where environment documents physically live. The disk variant is the
// simulated fileshare; the memory variant backs headless simulation runs.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "motivetrap/docgen.hpp"

namespace motivetrap {

class Fileshare {
public:
    virtual ~Fileshare() = default;

    // Creates `directory` and writes every document into it. On failure
    // nothing written by this call remains. Throws IoError.
    virtual void deploy(const std::filesystem::path& directory,
                        const std::vector<GeneratedDocument>& documents) = 0;

    // Throws IoError when the file does not exist.
    virtual std::string read(const std::filesystem::path& file) const = 0;

    // Removes environment directories and persisted state under root so a
    // fresh campaign can start there.
    virtual void reset(const std::filesystem::path& root) = 0;
};

class DiskFileshare final : public Fileshare {
public:
    void deploy(const std::filesystem::path& directory,
                const std::vector<GeneratedDocument>& documents) override;
    std::string read(const std::filesystem::path& file) const override;
    void reset(const std::filesystem::path& root) override;
};

class MemoryFileshare final : public Fileshare {
public:
    void deploy(const std::filesystem::path& directory,
                const std::vector<GeneratedDocument>& documents) override;
    std::string read(const std::filesystem::path& file) const override;
    void reset(const std::filesystem::path& root) override;

    std::size_t file_count() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::string> files_;
};

}  // namespace motivetrap
