// motivetrap command line: init | serve | sim | replay | report
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "motivetrap/attacker_sim.hpp"
#include "motivetrap/config_io.hpp"
#include "motivetrap/errors.hpp"
#include "motivetrap/gateway.hpp"
#include "motivetrap/ingest.hpp"

namespace fs = std::filesystem;
using namespace motivetrap;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

Gateway* g_gateway = nullptr;

void on_signal(int) {
    if (g_gateway) g_gateway->stop();
}

// An explicit --config must exist; otherwise fall back to ./motivetrap.json,
// then to built-in defaults.
ServeConfig resolve_config(const std::string& path, bool explicit_path) {
    if (explicit_path || fs::exists(path)) return load_serve_config(path);
    return ServeConfig{};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

int cmd_init(const std::string& path, bool force) {
    if (fs::exists(path) && !force) {
        std::cerr << "error: " << path << " exists (use --force to overwrite)\n";
        return kExitRuntime;
    }
    ServeConfig cfg;
    cfg.operator_token = generate_token();
    save_serve_config(cfg, path);
    std::cout << "wrote " << path << "\noperator token: " << cfg.operator_token << "\n";
    return 0;
}

int cmd_serve(ServeConfig cfg, std::optional<int> port, bool resume) {
    if (port) cfg.port = *port;
    cfg.validate();
    if (cfg.operator_token.empty())
        std::cerr << "warning: no operator token configured; operator endpoints will reject all requests\n";

    auto share = std::make_shared<DiskFileshare>();
    std::shared_ptr<const TextBackend> backend = make_backend(cfg.campaign.generator_mode);
    auto engine = std::make_shared<CampaignEngine>(backend, share, true);

    GatewayOptions options{cfg.operator_token, cfg.console_dir, cfg.campaign};
    Gateway gateway(engine, options);
    if (!gateway.bind(cfg.host, cfg.port)) {
        std::cerr << "error: cannot listen on " << cfg.host << ":" << cfg.port
                  << " (address in use or not permitted)\n";
        return kExitRuntime;
    }

    const fs::path root = fs::absolute(cfg.campaign.root_dir).lexically_normal();
    if (resume && fs::exists(root / "campaign.json")) {
        engine->adopt(Campaign::load(root, backend, share));
        std::cout << "resumed campaign from " << root << "\n";
    } else {
        engine->start(cfg.campaign);
        std::cout << "started campaign '" << cfg.campaign.campaign_id << "' under " << root << "\n";
    }

    g_gateway = &gateway;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << cfg.host << ":" << cfg.port << std::endl;
    gateway.run();
    g_gateway = nullptr;
    return 0;
}

struct SimArgs {
    std::vector<std::string> motives;
    std::vector<double> epsilons{0.0};
    int trials = 1;
    std::uint64_t seed = 0;
    bool json = false;
    std::string export_events;
    std::string report_path;
};

int cmd_sim(const ServeConfig& cfg, const SimArgs& args) {
    std::vector<Motive> motives;
    for (const auto& m : args.motives) motives.push_back(parse_motive(m));
    if (motives.empty()) motives = cfg.campaign.initial_motives;

    const bool single = motives.size() == 1 && args.epsilons.size() == 1 && args.trials == 1;
    if (!single && (!args.export_events.empty() || !args.report_path.empty()))
        throw ValidationError("--export-events/--report need one motive, one epsilon and --trials 1");

    if (single) {
        const Persona persona{motives.front(), args.epsilons.front(), args.seed};
        const Transcript t = run_exercise(cfg.campaign, persona);
        if (!args.export_events.empty()) write_file(args.export_events, export_events_jsonl(t));
        if (!args.report_path.empty()) write_file(args.report_path, report_to_string(t.report));
        if (args.json) {
            std::cout << transcript_to_json(t).dump(2) << "\n";
        } else {
            std::cout << report_to_text(t.report);
            std::cout << "persona: " << to_string(persona.motive) << " (epsilon " << persona.epsilon
                      << ") -> " << (t.correct ? "correct" : "incorrect") << "\n";
        }
        return 0;
    }

    EvaluationSpec spec;
    spec.config = cfg.campaign;
    spec.motives = motives;
    spec.epsilons = args.epsilons;
    spec.trials = args.trials;
    spec.seed = args.seed;
    const AccuracyTable table = evaluate(spec);
    if (args.json)
        std::cout << accuracy_to_json(table).dump(2) << "\n";
    else
        std::cout << accuracy_to_text(table);
    return 0;
}

int cmd_replay(const ServeConfig& cfg, const std::string& events_path) {
    if (!fs::exists(events_path)) {
        std::cerr << "error: no such file " << events_path << "\n";
        return kExitRuntime;
    }
    CampaignEngine engine(make_backend(cfg.campaign.generator_mode), std::make_shared<DiskFileshare>(), true);
    engine.start(cfg.campaign);
    const IngestSummary summary = ingest_file(events_path, engine);
    std::cout << json(summary).dump() << "\n";
    const auto report = engine.report();
    std::cout << "status: " << to_string(report.status);
    if (report.prediction) std::cout << ", prediction: " << to_string(*report.prediction);
    std::cout << "\n";
    return summary.source_error ? kExitRuntime : 0;
}

int cmd_report(const ServeConfig& cfg, bool as_json) {
    const fs::path root = fs::absolute(cfg.campaign.root_dir).lexically_normal();
    if (!fs::exists(root / "campaign.json")) {
        std::cerr << "error: no campaign state under " << root << "\n";
        return kExitRuntime;
    }
    const Campaign c = Campaign::load(root, std::make_shared<TemplateBackend>(), std::make_shared<DiskFileshare>());
    const CampaignReport report = c.status_snapshot();
    std::cout << (as_json ? report_to_string(report) : report_to_text(report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"motivetrap: adaptive decoy campaigns that infer an intruder's motive"};
    app.require_subcommand(1);

    std::string config_path = kDefaultConfigFile;
    auto* config_opt = app.add_option("-c,--config", config_path, "configuration file")->capture_default_str();

    bool force = false;
    auto* init = app.add_subcommand("init", "write a default configuration file");
    init->add_flag("--force", force, "overwrite an existing file");

    std::optional<int> port;
    bool resume = false;
    auto* serve = app.add_subcommand("serve", "run the gateway and campaign engine");
    serve->add_option("--port", port, "listen port (overrides config)");
    serve->add_flag("--resume", resume, "continue the campaign persisted under root_dir");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("sim", "run scripted attacker personas headless");
    sim->add_option("--motive", sim_args.motives, "persona motive(s); default: all initial motives");
    sim->add_option("--epsilon", sim_args.epsilons, "behavioural noise value(s) in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    sim->add_option("--trials", sim_args.trials, "trials per (motive, epsilon)")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_args.seed, "base seed");
    sim->add_flag("--json", sim_args.json, "emit JSON");
    sim->add_option("--export-events", sim_args.export_events, "write the run's events as JSON Lines");
    sim->add_option("--report", sim_args.report_path, "write the run's final report JSON");

    std::string events_path;
    auto* replay = app.add_subcommand("replay", "start a fresh campaign and feed it a JSON Lines event file");
    replay->add_option("events", events_path, "events.jsonl")->required();

    bool as_json = false;
    auto* report = app.add_subcommand("report", "print the persisted campaign report");
    report->add_flag("--json", as_json, "emit JSON");

    // Accept --config after the subcommand as well.
    for (auto* sub : {init, serve, sim, replay, report})
        sub->add_option("-c,--config", config_path, "configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    bool explicit_config = config_opt->count() > 0;
    for (auto* sub : {init, serve, sim, replay, report})
        if (sub->get_option("--config")->count() > 0) explicit_config = true;

    try {
        if (*init) return cmd_init(config_path, force);
        const ServeConfig cfg = resolve_config(config_path, explicit_config);
        if (*serve) return cmd_serve(cfg, port, resume);
        if (*sim) return cmd_sim(cfg, sim_args);
        if (*replay) return cmd_replay(cfg, events_path);
        if (*report) return cmd_report(cfg, as_json);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
