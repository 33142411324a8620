#include "motivetrap/gateway.hpp"

#include <atomic>
#include <map>
#include <thread>

#include "httplib.h"
#include "motivetrap/errors.hpp"
#include "motivetrap/ingest.hpp"

namespace motivetrap {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view message) {
    send_json(res, status, json{{"error", message}});
}

bool is_terminal(TransitionKind k) {
    return k == TransitionKind::CampaignFinished || k == TransitionKind::CampaignInconclusive;
}

}  // namespace

struct Gateway::Impl {
    std::shared_ptr<CampaignEngine> engine;
    GatewayOptions options;
    httplib::Server server;
    std::atomic<bool> stopping{false};

    std::mutex open_mutex;
    std::map<std::string, std::pair<int, std::string>> idempotent;  // key -> (status, body)

    Impl(std::shared_ptr<CampaignEngine> e, GatewayOptions o) : engine(std::move(e)), options(std::move(o)) {
        // httplib's default also sets SO_REUSEPORT, which would let a second
        // instance share a port that is already in use.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });
        routes();
    }

    bool authorized(const httplib::Request& req) const {
        if (options.operator_token.empty()) return false;
        const std::string bearer = "Bearer " + options.operator_token;
        if (req.get_header_value("Authorization") == bearer) return true;
        return req.has_param("token") && req.get_param_value("token") == options.operator_token;
    }

    json participant_view() const {
        json view;
        engine->read([&](const Campaign& c) {
            const auto& env = c.current_environment();
            std::vector<std::string> names;
            for (const auto& d : env.documents) names.push_back(d.file_name);
            std::sort(names.begin(), names.end());
            const bool running = c.status() == CampaignStatus::Running;
            view = json{{"env_index", env.index},
                        {"files", std::move(names)},
                        {"status", running ? "open" : "closed"},
                        {"next_available", running && env.index > 1 && env.access_log.empty()}};
        });
        return view;
    }

    void handle_open(const httplib::Request& req, httplib::Response& res) {
        std::string name;
        try {
            const json body = json::parse(req.body);
            name = body.at("name").get<std::string>();
        } catch (const json::exception&) {
            return send_error(res, 400, "expected {\"name\": string}");
        }
        const std::string key = req.get_header_value("Idempotency-Key");

        std::lock_guard lock(open_mutex);
        if (!key.empty()) {
            if (const auto it = idempotent.find(key); it != idempotent.end()) {
                res.status = it->second.first;
                res.set_content(it->second.second, "application/json");
                return;
            }
        }

        AccessEvent event;
        std::string content;
        bool found = false;
        bool closed = false;
        engine->read([&](const Campaign& c) {
            if (c.status() != CampaignStatus::Running) {
                closed = true;
                return;
            }
            const auto& env = c.current_environment();
            const DeployedDocument* doc = env.find_by_name(name);
            if (!doc) return;
            found = true;
            content = c.read_document(name);
            event.campaign_id = c.config().campaign_id;
            event.env_index = env.index;
            event.location = env.location_of(*doc);
            event.timestamp = std::chrono::time_point_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now());
            event.kind = std::string(kDocOpenKind);
        });
        if (closed) return send_error(res, 409, "fileshare closed");
        if (!found) return send_error(res, 404, "no such file");

        const Delivery d = deliver_event(*engine, event);
        if (d.status == Delivery::Status::Stale) return send_error(res, 409, "fileshare closed");
        if (d.status != Delivery::Status::Applied) return send_error(res, 500, "open failed");

        const auto kind = d.transition->kind;
        const json body{{"name", name},
                        {"content", content},
                        {"env_index", event.env_index},
                        {"finalized", kind == TransitionKind::EnvironmentFinalized ||
                                          kind == TransitionKind::CampaignFinished}};
        send_json(res, 200, body);
        if (!key.empty()) idempotent[key] = {res.status, res.body};
    }

    void handle_stream(const httplib::Request& req, httplib::Response& res) {
        auto cursor = std::make_shared<std::size_t>(0);
        if (req.has_param("from")) {
            try {
                *cursor = std::stoul(req.get_param_value("from"));
            } catch (const std::exception&) {
                return send_error(res, 400, "bad 'from' parameter");
            }
        }
        res.set_header("Cache-Control", "no-cache");
        auto eng = engine;
        res.set_chunked_content_provider(
            "text/event-stream", [this, eng, cursor](std::size_t, httplib::DataSink& sink) {
                if (stopping.load()) return false;
                const auto batch = eng->transitions_since(*cursor, std::chrono::milliseconds(500));
                if (batch.empty()) {
                    const std::string ping = ": keep-alive\n\n";
                    return sink.write(ping.data(), ping.size());
                }
                for (const auto& item : batch) {
                    const std::string msg = "id: " + std::to_string(item.sequence) +
                                            "\nevent: transition\ndata: " + json(item.transition).dump() +
                                            "\n\n";
                    if (!sink.write(msg.data(), msg.size())) return false;
                    *cursor = item.sequence + 1;
                    if (is_terminal(item.transition.kind)) {
                        sink.done();
                        return true;
                    }
                }
                return true;
            });
    }

    void routes() {
        server.Get("/api/participant/files", [this](const httplib::Request&, httplib::Response& res) {
            if (!engine->has_campaign()) return send_error(res, 404, "no active session");
            send_json(res, 200, participant_view());
        });

        server.Post("/api/participant/open", [this](const httplib::Request& req, httplib::Response& res) {
            if (!engine->has_campaign()) return send_error(res, 404, "no active session");
            handle_open(req, res);
        });

        server.Get("/api/operator/status", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req)) return send_error(res, 401, "operator token required");
            if (!engine->has_campaign()) return send_error(res, 404, "no campaign");
            send_json(res, 200, json{{"report", engine->report()}, {"ingest", engine->counters()}});
        });

        server.Get("/api/operator/stream", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req)) return send_error(res, 401, "operator token required");
            handle_stream(req, res);
        });

        server.Post("/api/operator/campaign", [this](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req)) return send_error(res, 401, "operator token required");
            try {
                std::lock_guard lock(open_mutex);
                engine->start(options.campaign);
                idempotent.clear();
            } catch (const Error& e) {
                return send_error(res, 500, e.what());
            }
            send_json(res, 201, json{{"report", engine->report()}});
        });

        server.Post("/api/events", [this](const httplib::Request& req, httplib::Response& res) {
            if (!engine->has_campaign()) return send_error(res, 404, "no campaign");
            const Delivery d = deliver_bytes(*engine, req.body);
            switch (d.status) {
                case Delivery::Status::Applied:
                    return send_json(res, 202, json{{"outcome", to_string(d.transition->kind)},
                                                    {"transition", *d.transition}});
                case Delivery::Status::Filtered:
                    return send_json(res, 202, json{{"outcome", "filtered"}});
                case Delivery::Status::Invalid: return send_error(res, 400, d.error);
                case Delivery::Status::Stale: return send_error(res, 409, d.error);
                case Delivery::Status::Failed: return send_error(res, 500, d.error);
            }
        });

        if (!options.console_dir.empty()) server.set_mount_point("/", options.console_dir);
    }
};

Gateway::Gateway(std::shared_ptr<CampaignEngine> engine, GatewayOptions options)
    : impl_(std::make_unique<Impl>(std::move(engine), std::move(options))) {}

Gateway::~Gateway() { stop(); }

bool Gateway::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

int Gateway::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

void Gateway::run() {
    std::thread ticker([this] {
        while (!impl_->stopping.load()) {
            impl_->engine->check_idle(CampaignEngine::Clock::now());
            std::this_thread::sleep_for(std::chrono::milliseconds(250));
        }
    });
    impl_->server.listen_after_bind();
    impl_->stopping = true;
    ticker.join();
}

void Gateway::stop() {
    impl_->stopping = true;
    impl_->engine->wake_all();
    impl_->server.stop();
}

}  // namespace motivetrap
