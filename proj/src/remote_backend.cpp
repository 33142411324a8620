#include <cstdlib>

#include "httplib.h"
#include "motivetrap/docgen.hpp"
#include "motivetrap/errors.hpp"

namespace motivetrap {

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? std::string(v) : std::move(fallback);
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash, may be empty
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("backend base URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

}  // namespace

RemoteBackendSettings RemoteBackendSettings::from_environment() {
    RemoteBackendSettings s;
    s.base_url = env_or("MOTIVETRAP_LLM_BASE_URL", s.base_url);
    s.api_key = env_or("MOTIVETRAP_LLM_API_KEY", env_or("OPENAI_API_KEY", ""));
    s.model = env_or("MOTIVETRAP_LLM_MODEL", s.model);
    return s;
}

RemoteChatBackend::RemoteChatBackend(RemoteBackendSettings settings) : settings_(std::move(settings)) {
    split_url(settings_.base_url);
}

std::string RemoteChatBackend::complete(const GenerationRequest& request) const {
    const SplitUrl url = split_url(settings_.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(settings_.timeout);
    client.set_read_timeout(settings_.timeout);
    client.set_write_timeout(settings_.timeout);

    httplib::Headers headers;
    if (!settings_.api_key.empty()) headers.emplace("Authorization", "Bearer " + settings_.api_key);

    const json body{{"model", settings_.model},
                    {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})}};
    auto res = client.Post(url.prefix + "/chat/completions", headers, body.dump(), "application/json");
    if (!res)
        throw RetryableGenerationError("text backend unreachable: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw RetryableGenerationError("text backend returned HTTP " + std::to_string(res->status));
    if (res->status != 200)
        throw GenerationError("text backend returned HTTP " + std::to_string(res->status) + ": " +
                              res->body.substr(0, 200));

    std::string content;
    try {
        const json j = json::parse(res->body);
        const auto& choices = j.at("choices");
        if (!choices.empty()) {
            const auto& c = choices.at(0).at("message").at("content");
            if (c.is_string()) content = c.get<std::string>();
        }
    } catch (const json::exception& e) {
        throw GenerationError(std::string("unparseable completion response: ") + e.what());
    }
    if (content.empty()) throw GenerationError("text backend returned an empty completion");
    return content;
}

}  // namespace motivetrap
