#include "motivetrap/config_io.hpp"

#include <cstdlib>
#include <random>

#include "motivetrap/errors.hpp"
#include "motivetrap/registry.hpp"

namespace motivetrap {

void ServeConfig::validate() const {
    campaign.validate();
    if (port < 0 || port > 65535) throw ValidationError("port out of range");
    if (host.empty()) throw ValidationError("host is empty");
}

void to_json(json& j, const ServeConfig& c) {
    j = json{{"campaign", c.campaign},
             {"host", c.host},
             {"port", c.port},
             {"operator_token", c.operator_token},
             {"console_dir", c.console_dir}};
}

void from_json(const json& j, ServeConfig& c) {
    ServeConfig out;
    if (j.contains("campaign")) j.at("campaign").get_to(out.campaign);
    if (j.contains("host")) j.at("host").get_to(out.host);
    if (j.contains("port")) j.at("port").get_to(out.port);
    if (j.contains("operator_token")) j.at("operator_token").get_to(out.operator_token);
    if (j.contains("console_dir")) j.at("console_dir").get_to(out.console_dir);
    c = std::move(out);
}

std::string generate_token() {
    std::random_device rd;
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (int i = 0; i < 32; ++i) out.push_back(kHex[rd() & 0x0f]);
    return out;
}

ServeConfig load_serve_config(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    ServeConfig cfg;
    try {
        json::parse(text).get_to(cfg);
    } catch (const json::exception& e) {
        throw FormatError("invalid config " + path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw FormatError("invalid config " + path.string() + ": " + e.what());
    }
    if (const char* token = std::getenv("MOTIVETRAP_OPERATOR_TOKEN"); token && *token)
        cfg.operator_token = token;
    cfg.validate();
    return cfg;
}

void save_serve_config(const ServeConfig& config, const std::filesystem::path& path) {
    write_text_atomic(path, json(config).dump(2) + "\n");
}

}  // namespace motivetrap
