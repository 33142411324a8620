#include "motivetrap/campaign.hpp"

#include <algorithm>
#include <set>

#include "motivetrap/errors.hpp"

namespace motivetrap {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStateFormat = "motivetrap-campaign";
constexpr int kStateVersion = 1;

template <class Enum, std::size_t N>
Enum enum_from(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<Enum>(i);
    throw ValidationError(std::string("unknown ") + what + ": " + std::string(s));
}

constexpr std::array<std::string_view, 2> kEnvStatusNames{"active", "finalized"};
constexpr std::array<std::string_view, 3> kCampaignStatusNames{"running", "finished", "inconclusive"};
constexpr std::array<std::string_view, 6> kTransitionNames{
    "recorded",           "duplicate_ignored", "unknown_file_ignored",
    "environment_finalized", "campaign_finished", "campaign_inconclusive"};

}  // namespace

std::string_view to_string(EnvironmentStatus s) noexcept {
    return kEnvStatusNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(CampaignStatus s) noexcept {
    return kCampaignStatusNames[static_cast<std::size_t>(s)];
}
std::string_view to_string(TransitionKind k) noexcept {
    return kTransitionNames[static_cast<std::size_t>(k)];
}

std::string host_name_for(int env_index) { return "deception-env-" + std::to_string(env_index); }

// ---- EnvironmentState -------------------------------------------------------

const DeployedDocument* EnvironmentState::find_by_name(std::string_view file_name) const noexcept {
    const auto it = std::find_if(documents.begin(), documents.end(),
                                 [&](const DeployedDocument& d) { return d.file_name == file_name; });
    return it == documents.end() ? nullptr : &*it;
}

const DeployedDocument* EnvironmentState::find_by_hash(std::string_view loc_hash) const noexcept {
    const auto it = std::find_if(documents.begin(), documents.end(),
                                 [&](const DeployedDocument& d) { return d.loc_hash == loc_hash; });
    return it == documents.end() ? nullptr : &*it;
}

DocumentLocation EnvironmentState::location_of(const DeployedDocument& doc) const {
    return DocumentLocation{(fs::path(directory) / doc.file_name).string(), host_name};
}

// ---- Transition JSON ----------------------------------------------------------

void to_json(json& j, const Transition& t) {
    j = json{{"kind", std::string(to_string(t.kind))}, {"env_index", t.env_index}};
    if (t.loc_hash) j["loc_hash"] = *t.loc_hash;
    if (t.elimination) j["elimination"] = *t.elimination;
    if (t.prediction) j["prediction"] = *t.prediction;
}

void from_json(const json& j, Transition& t) {
    t = Transition{};
    t.kind = enum_from<TransitionKind>(j.at("kind").get<std::string>(), kTransitionNames,
                                       "transition kind");
    j.at("env_index").get_to(t.env_index);
    if (j.contains("loc_hash")) t.loc_hash = j.at("loc_hash").get<std::string>();
    if (j.contains("elimination")) t.elimination = j.at("elimination").get<EliminationResult>();
    if (j.contains("prediction")) t.prediction = j.at("prediction").get<Motive>();
}

// ---- report JSON --------------------------------------------------------------

void to_json(json& j, const CampaignReport& r) {
    json envs = json::array();
    for (const auto& e : r.environments) {
        json accesses = json::array();
        for (const auto& a : e.accesses)
            accesses.push_back({{"position", a.position},
                                {"file_name", a.file_name},
                                {"loc_hash", a.loc_hash},
                                {"type", a.doc_type},
                                {"motive", a.motive},
                                {"score", a.score}});
        json env{{"index", e.index},
                 {"host_name", e.host_name},
                 {"directory", e.directory},
                 {"status", std::string(to_string(e.status))},
                 {"active_motives", e.active_motives},
                 {"accesses", std::move(accesses)},
                 {"scoreboard", e.scoreboard},
                 {"eliminated", e.eliminated ? json(*e.eliminated) : json(nullptr)},
                 {"remaining", e.remaining}};
        envs.push_back(std::move(env));
    }
    j = json{{"campaign_id", r.campaign_id},
             {"status", std::string(to_string(r.status))},
             {"initial_motives", r.initial_motives},
             {"active_motives", r.active_motives},
             {"accesses_per_env", r.accesses_per_env},
             {"current_env", r.current_env},
             {"current_files", r.current_files},
             {"environments", std::move(envs)},
             {"prediction", r.prediction ? json(*r.prediction) : json(nullptr)}};
}

void from_json(const json& j, CampaignReport& r) {
    r = CampaignReport{};
    j.at("campaign_id").get_to(r.campaign_id);
    r.status = enum_from<CampaignStatus>(j.at("status").get<std::string>(), kCampaignStatusNames,
                                         "campaign status");
    j.at("initial_motives").get_to(r.initial_motives);
    j.at("active_motives").get_to(r.active_motives);
    j.at("accesses_per_env").get_to(r.accesses_per_env);
    j.at("current_env").get_to(r.current_env);
    j.at("current_files").get_to(r.current_files);
    for (const auto& e : j.at("environments")) {
        EnvironmentReport env;
        e.at("index").get_to(env.index);
        e.at("host_name").get_to(env.host_name);
        e.at("directory").get_to(env.directory);
        env.status = enum_from<EnvironmentStatus>(e.at("status").get<std::string>(), kEnvStatusNames,
                                                  "environment status");
        e.at("active_motives").get_to(env.active_motives);
        for (const auto& a : e.at("accesses")) {
            AccessEntry entry;
            a.at("position").get_to(entry.position);
            a.at("file_name").get_to(entry.file_name);
            a.at("loc_hash").get_to(entry.loc_hash);
            a.at("type").get_to(entry.doc_type);
            a.at("motive").get_to(entry.motive);
            a.at("score").get_to(entry.score);
            env.accesses.push_back(std::move(entry));
        }
        e.at("scoreboard").get_to(env.scoreboard);
        if (!e.at("eliminated").is_null()) env.eliminated = e.at("eliminated").get<Motive>();
        e.at("remaining").get_to(env.remaining);
        r.environments.push_back(std::move(env));
    }
    if (!j.at("prediction").is_null()) r.prediction = j.at("prediction").get<Motive>();
}

std::string report_to_string(const CampaignReport& r) { return json(r).dump(2) + "\n"; }

std::string report_to_text(const CampaignReport& r) {
    std::string out;
    out += "campaign " + r.campaign_id + ": " + std::string(to_string(r.status)) + "\n";
    for (const auto& e : r.environments) {
        out += "  env " + std::to_string(e.index) + " (" + std::string(to_string(e.status)) + ", " +
               std::to_string(e.accesses.size()) + "/" + std::to_string(r.accesses_per_env) +
               " accesses)\n";
        std::vector<std::pair<std::string_view, int>> rows;
        for (const auto& [m, score] : e.scoreboard.scores) rows.emplace_back(to_string(m), score);
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        for (const auto& [name, score] : rows) {
            std::string line = "    " + std::string(name);
            line.resize(20, ' ');
            out += line + std::to_string(score) + "\n";
        }
        if (e.eliminated) out += "    eliminated: " + std::string(to_string(*e.eliminated)) + "\n";
    }
    out += "prediction: ";
    out += r.prediction ? std::string(to_string(*r.prediction)) : std::string("(none)");
    out += "\n";
    return out;
}

// ---- Campaign -----------------------------------------------------------------

Campaign::Provision Campaign::prepare_environment(int index, const std::vector<Motive>& motives) const {
    Provision p;
    p.env.index = index;
    p.env.active_motives = motives;
    p.env.directory = (root_ / ("env-" + std::to_string(index))).string();
    p.env.host_name = host_name_for(index);
    p.documents = generate_environment_set(motives, config_, index, *backend_);

    std::set<std::string> names;
    for (const auto& doc : p.documents) {
        if (!names.insert(doc.file_name).second)
            throw ValidationError("duplicate file name in environment: " + doc.file_name);
        DeployedDocument deployed{doc.file_name, "", doc.subject, doc.doc_type};
        const auto location = p.env.location_of(deployed);
        auto record = DocumentRecord::for_document(location, index, doc.doc_type, doc.subject);
        deployed.loc_hash = record.loc_hash;
        p.env.documents.push_back(std::move(deployed));
        p.records.push_back(std::move(record));
    }
    return p;
}

void Campaign::commit(Provision provision) {
    fileshare_->deploy(provision.env.directory, provision.documents);
    registry_.register_batch(std::move(provision.records));
    environments_.push_back(std::move(provision.env));
}

Campaign Campaign::start(CampaignConfig config, std::shared_ptr<const TextBackend> backend,
                         std::shared_ptr<Fileshare> fileshare) {
    config.validate();
    if (!backend) throw ValidationError("no text backend");
    if (!fileshare) throw ValidationError("no fileshare");

    Campaign c;
    c.root_ = fs::absolute(config.root_dir).lexically_normal();
    c.config_ = std::move(config);
    c.backend_ = std::move(backend);
    c.fileshare_ = std::move(fileshare);
    c.active_motives_ = c.config_.initial_motives;

    c.fileshare_->reset(c.root_);
    c.commit(c.prepare_environment(1, c.active_motives_));
    return c;
}

std::size_t Campaign::finalized_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        environments_.begin(), environments_.end(),
        [](const EnvironmentState& e) { return e.status == EnvironmentStatus::Finalized; }));
}

Transition Campaign::finalize(EnvironmentState& env, std::size_t env_pos) {
    const ScoreBoard board =
        score_environment(env.access_log, registry_, env.active_motives, config_.accesses_per_env);
    EliminationResult result = rank_and_eliminate(board, env.active_motives, env.access_log, registry_);

    Transition t;
    t.env_index = env.index;
    t.elimination = result;

    std::optional<Provision> next;
    if (result.remaining.size() > 1) next = prepare_environment(env.index + 1, result.remaining);

    if (next) commit(std::move(*next));  // may throw; nothing below has run yet

    env.status = EnvironmentStatus::Finalized;
    env.elimination = result;
    environments_[env_pos] = std::move(env);
    active_motives_ = result.remaining;

    if (active_motives_.size() == 1) {
        status_ = CampaignStatus::Finished;
        prediction_ = active_motives_.front();
        t.kind = TransitionKind::CampaignFinished;
        t.prediction = prediction_;
    } else {
        t.kind = TransitionKind::EnvironmentFinalized;
    }
    return t;
}

Transition Campaign::handle_access(const AccessEvent& event) {
    if (status_ != CampaignStatus::Running)
        throw StaleEventError("campaign " + config_.campaign_id + " is no longer running");
    if (event.campaign_id != config_.campaign_id)
        throw ValidationError("event for campaign '" + event.campaign_id + "', expected '" +
                              config_.campaign_id + "'");
    if (event.kind != kDocOpenKind) throw ValidationError("unsupported event kind: " + event.kind);

    const std::size_t env_pos = environments_.size() - 1;
    const EnvironmentState& current = environments_[env_pos];
    if (event.env_index < current.index)
        throw StaleEventError("environment " + std::to_string(event.env_index) + " is finalized");
    if (event.env_index > current.index)
        throw ValidationError("environment " + std::to_string(event.env_index) + " does not exist");

    const std::string hash = compute_loc_hash(event.location);
    Transition t;
    t.env_index = current.index;
    t.loc_hash = hash;

    const auto record = registry_.lookup(hash);
    if (!record) {
        t.kind = TransitionKind::UnknownFileIgnored;
        return t;
    }
    if (record->deception_host != current.index)
        throw StaleEventError("document belongs to finalized environment " +
                              std::to_string(record->deception_host));
    if (current.access_log.contains(hash)) {
        t.kind = TransitionKind::DuplicateIgnored;
        return t;
    }

    if (current.access_log.size() + 1 < static_cast<std::size_t>(config_.accesses_per_env)) {
        environments_[env_pos].access_log.record(hash);
        t.kind = TransitionKind::Recorded;
        return t;
    }

    EnvironmentState updated = current;
    updated.access_log.record(hash);
    Transition out = finalize(updated, env_pos);
    out.loc_hash = hash;
    return out;
}

Transition Campaign::close_active_environment() {
    if (status_ != CampaignStatus::Running)
        throw StaleEventError("campaign " + config_.campaign_id + " is no longer running");
    const std::size_t env_pos = environments_.size() - 1;
    EnvironmentState updated = environments_[env_pos];
    if (updated.access_log.empty()) {
        status_ = CampaignStatus::Inconclusive;
        Transition t;
        t.kind = TransitionKind::CampaignInconclusive;
        t.env_index = updated.index;
        return t;
    }
    return finalize(updated, env_pos);
}

std::optional<Motive> Campaign::predict() const {
    if (status_ != CampaignStatus::Finished) return std::nullopt;
    return prediction_;
}

CampaignReport Campaign::status_snapshot() const {
    CampaignReport r;
    r.campaign_id = config_.campaign_id;
    r.status = status_;
    r.initial_motives = config_.initial_motives;
    r.active_motives = active_motives_;
    r.accesses_per_env = config_.accesses_per_env;
    r.prediction = prediction_;

    const auto& current = current_environment();
    r.current_env = current.index;
    for (const auto& d : current.documents) r.current_files.push_back(d.file_name);
    std::sort(r.current_files.begin(), r.current_files.end());

    for (const auto& env : environments_) {
        EnvironmentReport er;
        er.index = env.index;
        er.host_name = env.host_name;
        er.directory = env.directory;
        er.status = env.status;
        er.active_motives = env.active_motives;
        int position = 0;
        for (const auto& hash : env.access_log.hashes()) {
            ++position;
            const DeployedDocument* doc = env.find_by_hash(hash);
            if (!doc) throw StateError("logged hash missing from environment " + std::to_string(env.index));
            er.accesses.push_back({position, doc->file_name, hash, doc->doc_type,
                                   motive_for_type(doc->doc_type),
                                   position_score(position, config_.accesses_per_env)});
        }
        if (env.elimination) {
            er.scoreboard = env.elimination->scoreboard;
            er.eliminated = env.elimination->eliminated;
            er.remaining = env.elimination->remaining;
        } else {
            er.scoreboard = score_environment(env.access_log, registry_, env.active_motives,
                                              config_.accesses_per_env);
        }
        r.environments.push_back(std::move(er));
    }
    return r;
}

std::string Campaign::read_document(std::string_view file_name) const {
    const auto& env = current_environment();
    const DeployedDocument* doc = env.find_by_name(file_name);
    if (!doc) throw ValidationError("no document named '" + std::string(file_name) + "'");
    return fileshare_->read(fs::path(env.directory) / doc->file_name);
}

void Campaign::check_invariants() const {
    auto fail = [](const std::string& what) { throw StateError("invariant violated: " + what); };
    const auto initial = config_.initial_motives.size();
    if (finalized_count() != initial - active_motives_.size())
        fail("finalized environments != initial - active motives");
    const bool finished = status_ == CampaignStatus::Finished;
    if (finished != (active_motives_.size() == 1) || finished != prediction_.has_value())
        fail("finished <=> one motive <=> prediction");

    std::set<DocType> previous;
    for (std::size_t i = 0; i < environments_.size(); ++i) {
        const auto& env = environments_[i];
        if (env.index != static_cast<int>(i) + 1) fail("environment indices not contiguous");
        const bool finalized = env.status == EnvironmentStatus::Finalized;
        if (finalized != env.elimination.has_value()) fail("finalized <=> elimination present");
        if (finalized && status_ != CampaignStatus::Inconclusive && config_.idle_timeout_seconds == 0 &&
            env.access_log.size() != static_cast<std::size_t>(config_.accesses_per_env))
            fail("finalized environment without a full access log");

        std::set<DocType> allowed;
        for (Motive m : env.active_motives) allowed.insert(type_for_motive(m));
        std::set<DocType> present;
        for (const auto& doc : env.documents) {
            const auto record = registry_.lookup(doc.loc_hash);
            if (!record) fail("deployed document not registered");
            if (record->deception_host != env.index) fail("record deception_host mismatch");
            if (!allowed.count(record->doc_type)) fail("document of an inactive type deployed");
            present.insert(record->doc_type);
        }
        if (i > 0) {
            if (present.size() + 1 != previous.size() ||
                !std::includes(previous.begin(), previous.end(), present.begin(), present.end()))
                fail("environment type set is not the previous set minus one");
        }
        previous = std::move(present);
    }
}

// ---- persistence ----------------------------------------------------------------

json Campaign::state_to_json() const {
    json envs = json::array();
    for (const auto& env : environments_) {
        json docs = json::array();
        for (const auto& d : env.documents)
            docs.push_back({{"file_name", d.file_name},
                            {"loc_hash", d.loc_hash},
                            {"subject", d.subject},
                            {"type", d.doc_type}});
        envs.push_back({{"index", env.index},
                        {"active_motives", env.active_motives},
                        {"directory", env.directory},
                        {"host_name", env.host_name},
                        {"documents", std::move(docs)},
                        {"access_log", env.access_log.hashes()},
                        {"status", std::string(to_string(env.status))},
                        {"elimination", env.elimination ? json(*env.elimination) : json(nullptr)}});
    }
    return json{{"format", kStateFormat},
                {"version", kStateVersion},
                {"config", config_},
                {"root", root_.string()},
                {"status", std::string(to_string(status_))},
                {"active_motives", active_motives_},
                {"prediction", prediction_ ? json(*prediction_) : json(nullptr)},
                {"environments", std::move(envs)}};
}

void Campaign::save() const {
    save_snapshot(registry_.snapshot(), root_ / "registry.json");
    write_text_atomic(root_ / "campaign.json", state_to_json().dump(2) + "\n");
}

Campaign Campaign::load(const fs::path& root, std::shared_ptr<const TextBackend> backend,
                        std::shared_ptr<Fileshare> fileshare) {
    const std::string text = read_text(root / "campaign.json");
    Campaign c;
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kStateFormat)
            throw FormatError("not a campaign state file");
        if (j.at("version").get<int>() != kStateVersion)
            throw FormatError("unknown campaign state version");
        j.at("config").get_to(c.config_);
        c.root_ = j.at("root").get<std::string>();
        c.status_ = enum_from<CampaignStatus>(j.at("status").get<std::string>(), kCampaignStatusNames,
                                              "campaign status");
        j.at("active_motives").get_to(c.active_motives_);
        if (!j.at("prediction").is_null()) c.prediction_ = j.at("prediction").get<Motive>();
        for (const auto& e : j.at("environments")) {
            EnvironmentState env;
            e.at("index").get_to(env.index);
            e.at("active_motives").get_to(env.active_motives);
            e.at("directory").get_to(env.directory);
            e.at("host_name").get_to(env.host_name);
            for (const auto& d : e.at("documents"))
                env.documents.push_back({d.at("file_name").get<std::string>(),
                                         d.at("loc_hash").get<std::string>(),
                                         d.at("subject").get<std::string>(), d.at("type").get<DocType>()});
            env.access_log = AccessLog(e.at("access_log").get<std::vector<std::string>>());
            env.status = enum_from<EnvironmentStatus>(e.at("status").get<std::string>(),
                                                      kEnvStatusNames, "environment status");
            if (!e.at("elimination").is_null())
                env.elimination = e.at("elimination").get<EliminationResult>();
            c.environments_.push_back(std::move(env));
        }
    } catch (const json::exception& e) {
        throw FormatError("invalid campaign state in " + root.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw FormatError("invalid campaign state in " + root.string() + ": " + e.what());
    }
    if (c.environments_.empty()) throw FormatError("campaign state has no environments");
    c.registry_ = Registry(load_snapshot(root / "registry.json"));
    c.backend_ = std::move(backend);
    c.fileshare_ = std::move(fileshare);
    return c;
}

}  // namespace motivetrap
