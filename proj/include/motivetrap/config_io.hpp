#pragma once

#include <filesystem>
#include <string>

#include "motivetrap/model.hpp"

namespace motivetrap {

inline constexpr const char* kDefaultConfigFile = "motivetrap.json";

// Everything `serve` needs: the campaign plus listener and operator settings.
struct ServeConfig {
    CampaignConfig campaign;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string operator_token;
    // Static console assets served at "/" when non-empty.
    std::string console_dir;

    void validate() const;
    friend bool operator==(const ServeConfig&, const ServeConfig&) = default;
};

void to_json(json& j, const ServeConfig& c);
void from_json(const json& j, ServeConfig& c);

// 32 hex characters from std::random_device.
std::string generate_token();

// Throws IoError / FormatError. MOTIVETRAP_OPERATOR_TOKEN overrides the
// stored operator token when set.
ServeConfig load_serve_config(const std::filesystem::path& path);
void save_serve_config(const ServeConfig& config, const std::filesystem::path& path);

}  // namespace motivetrap
