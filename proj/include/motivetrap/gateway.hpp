#pragma once

// HTTP surface for live exercises.
//
// Participant endpoints (no auth) emulate browsing the current fileshare:
//   GET  /api/participant/files   -> {env_index, files[], status, next_available}
//   POST /api/participant/open    {name} -> {name, content, env_index, finalized}
// Opening a file is the instrumentation: it becomes a doc_open event.
// Responses never carry motive, type, score or host metadata.
//
// Operator endpoints (static bearer token, or ?token= for EventSource):
//   GET  /api/operator/status     -> {report, ingest}
//   GET  /api/operator/stream     -> text/event-stream of transitions
//   POST /api/operator/campaign   -> restart the campaign from config
//
// Sensor endpoint:
//   POST /api/events              WireEvent -> 202 | 400 | 409

#include <memory>
#include <string>

#include "motivetrap/config_io.hpp"
#include "motivetrap/engine.hpp"

namespace motivetrap {

struct GatewayOptions {
    std::string operator_token;
    std::string console_dir;
    CampaignConfig campaign;  // used by POST /api/operator/campaign
};

class Gateway {
public:
    Gateway(std::shared_ptr<CampaignEngine> engine, GatewayOptions options);
    ~Gateway();
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Returns false if the address cannot be bound (e.g. port in use).
    bool bind(const std::string& host, int port);
    // Binds an ephemeral port and returns it, or -1.
    int bind_any_port(const std::string& host);

    // Blocks serving requests until stop(). Also runs the idle-timeout ticker.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace motivetrap
