#pragma once

// A gateway on an ephemeral localhost port with a disk-backed campaign.

#include <memory>
#include <thread>

#include "httplib.h"
#include "motivetrap/engine.hpp"
#include "motivetrap/gateway.hpp"
#include "support.hpp"

namespace motivetrap::testing {

inline constexpr const char* kTestToken = "s3cret-operator-token";

class RunningGateway {
public:
    explicit RunningGateway(const CampaignConfig& cfg, bool start_campaign = true) {
        engine = std::make_shared<CampaignEngine>(std::make_shared<TemplateBackend>(),
                                                  std::make_shared<DiskFileshare>(), true);
        if (start_campaign) engine->start(cfg);
        gateway = std::make_unique<Gateway>(engine, GatewayOptions{kTestToken, "", cfg});
        port = gateway->bind_any_port("127.0.0.1");
        if (port <= 0) throw std::runtime_error("could not bind test gateway");
        thread = std::thread([this] { gateway->run(); });
        // Wait until the listener answers.
        for (int i = 0; i < 200; ++i) {
            if (client().Get("/api/participant/files")) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        throw std::runtime_error("test gateway did not come up");
    }
    ~RunningGateway() {
        gateway->stop();
        thread.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(std::chrono::seconds(10));
        return c;
    }

    static httplib::Headers auth() { return {{"Authorization", std::string("Bearer ") + kTestToken}}; }

    httplib::Result open(const std::string& name, const std::string& idempotency_key = "") const {
        httplib::Headers h;
        if (!idempotency_key.empty()) h.emplace("Idempotency-Key", idempotency_key);
        return client().Post("/api/participant/open", h, json{{"name", name}}.dump(), "application/json");
    }

    // Name of the first unvisited document of type t in the current environment.
    std::string unvisited_of(DocType t) const {
        std::string name;
        engine->read([&](const Campaign& c) {
            const auto& env = c.current_environment();
            for (const auto& d : env.documents)
                if (d.doc_type == t && !env.access_log.contains(d.loc_hash)) {
                    name = d.file_name;
                    return;
                }
        });
        return name;
    }

    std::shared_ptr<CampaignEngine> engine;
    std::unique_ptr<Gateway> gateway;
    int port = 0;
    std::thread thread;
};

// Collects SSE messages until the server closes the stream.
struct SseCollector {
    std::vector<json> messages;
    std::string raw;
    std::thread thread;

    void start(int port) {
        thread = std::thread([this, port] {
            httplib::Client c("127.0.0.1", port);
            c.set_read_timeout(std::chrono::seconds(30));
            std::string buffer;
            c.Get("/api/operator/stream", RunningGateway::auth(), [&](const char* data, std::size_t n) {
                raw.append(data, n);
                buffer.append(data, n);
                for (auto pos = buffer.find("\n\n"); pos != std::string::npos; pos = buffer.find("\n\n")) {
                    const std::string block = buffer.substr(0, pos);
                    buffer.erase(0, pos + 2);
                    const auto d = block.find("data: ");
                    if (d != std::string::npos) messages.push_back(json::parse(block.substr(d + 6)));
                }
                return true;
            });
        });
    }
    void join() { thread.join(); }
};

}  // namespace motivetrap::testing
