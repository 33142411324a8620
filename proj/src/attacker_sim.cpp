#include "motivetrap/attacker_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "motivetrap/engine.hpp"
#include "motivetrap/errors.hpp"
#include "motivetrap/hashing.hpp"
#include "motivetrap/ingest.hpp"

namespace motivetrap {

void Persona::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("persona epsilon must be in [0, 1]");
}

PersonaPolicy::PersonaPolicy(const Persona& persona) : persona_(persona), rng_(persona.seed) {
    persona_.validate();
}

const VisibleDocument& PersonaPolicy::next_choice(std::span<const VisibleDocument> unvisited) {
    if (unvisited.empty()) throw ValidationError("persona has nothing left to open");
    // Always draw the noise coin so the stream does not depend on the listing.
    const bool noisy = std::bernoulli_distribution(persona_.epsilon)(rng_);
    const DocType wanted = type_for_motive(persona_.motive);

    std::vector<std::size_t> preferred;
    if (!noisy)
        for (std::size_t i = 0; i < unvisited.size(); ++i)
            if (unvisited[i].doc_type == wanted) preferred.push_back(i);

    if (!preferred.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, preferred.size() - 1);
        return unvisited[preferred[pick(rng_)]];
    }
    std::uniform_int_distribution<std::size_t> pick(0, unvisited.size() - 1);
    return unvisited[pick(rng_)];
}

std::vector<VisibleDocument> unvisited_documents(const Campaign& campaign) {
    const auto& env = campaign.current_environment();
    std::vector<VisibleDocument> out;
    for (const auto& doc : env.documents)
        if (!env.access_log.contains(doc.loc_hash))
            out.push_back({doc.file_name, env.location_of(doc), doc.doc_type});
    return out;
}

json transcript_to_json(const Transcript& t) {
    json accesses = json::array();
    for (const auto& a : t.accesses)
        accesses.push_back({{"env_index", a.env_index}, {"file_name", a.file_name}, {"loc_hash", a.loc_hash}});
    return json{{"persona", {{"motive", t.persona.motive}, {"epsilon", t.persona.epsilon}, {"seed", t.persona.seed}}},
                {"accesses", std::move(accesses)},
                {"eliminations", t.eliminations},
                {"prediction", t.prediction ? json(*t.prediction) : json(nullptr)},
                {"correct", t.correct},
                {"report", t.report}};
}

std::string export_events_jsonl(const Transcript& t) {
    std::string out;
    for (const auto& e : t.events) {
        out += serialize_event(e);
        out += '\n';
    }
    return out;
}

namespace {

// 2024-01-08T09:00:00Z; accesses are spaced 45 s apart from here.
constexpr std::chrono::seconds kTranscriptEpoch{1704704400};

}  // namespace

Transcript run_exercise(const CampaignConfig& config, const Persona& persona,
                        const ExerciseOptions& options) {
    persona.validate();
    std::shared_ptr<Fileshare> share;
    if (options.fileshare == FileshareKind::Disk)
        share = std::make_shared<DiskFileshare>();
    else
        share = std::make_shared<MemoryFileshare>();
    const bool persist = options.persist && options.fileshare == FileshareKind::Disk;

    CampaignEngine engine(make_backend(config.generator_mode), share, persist);
    engine.start(config);

    Transcript t;
    t.persona = persona;
    PersonaPolicy policy(persona);

    // Every step either records a document or ends the campaign, so the
    // number of distinct documents bounds the loop.
    const std::size_t max_steps =
        config.initial_motives.size() * static_cast<std::size_t>(config.docs_per_type) *
        config.initial_motives.size();
    for (std::size_t step = 0; step <= max_steps; ++step) {
        AccessEvent event;
        bool running = false;
        engine.read([&](const Campaign& c) {
            running = c.status() == CampaignStatus::Running;
            if (!running) return;
            const auto listing = unvisited_documents(c);
            const VisibleDocument& choice = policy.next_choice(listing);
            event.campaign_id = c.config().campaign_id;
            event.env_index = c.current_environment().index;
            event.location = choice.location;
            event.timestamp = Timestamp{kTranscriptEpoch} +
                              std::chrono::seconds{45 * static_cast<long>(t.events.size())};
            event.kind = std::string(kDocOpenKind);
            t.accesses.push_back({event.env_index, choice.file_name, compute_loc_hash(choice.location)});
        });
        if (!running) break;

        t.events.push_back(event);
        const Delivery d = deliver_event(engine, event);
        if (d.status != Delivery::Status::Applied)
            throw StateError("simulated access rejected: " + d.error);
        if (d.transition->elimination) t.eliminations.push_back(*d.transition->elimination);
    }

    t.report = engine.report();
    t.prediction = t.report.prediction;
    t.correct = t.prediction && *t.prediction == persona.motive;
    return t;
}

// ---- evaluation -----------------------------------------------------------------

void EvaluationSpec::validate() const {
    config.validate();
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (motives.empty()) throw ValidationError("no motives to evaluate");
    if (epsilons.empty()) throw ValidationError("no epsilon values to evaluate");
    for (double e : epsilons)
        if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("epsilon must be in [0, 1]");
    for (Motive m : motives)
        if (std::find(config.initial_motives.begin(), config.initial_motives.end(), m) ==
            config.initial_motives.end())
            throw ValidationError("persona motive " + std::string(to_string(m)) +
                                  " is not among the campaign's initial motives");
}

namespace {

std::uint64_t trial_key(const EvaluationSpec& spec, std::size_t motive_idx, std::size_t eps_idx,
                        int trial) {
    std::uint64_t h = splitmix64(spec.seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(motive_idx));
    h = splitmix64(h ^ static_cast<std::uint64_t>(eps_idx));
    return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

}  // namespace

Persona trial_persona(const EvaluationSpec& spec, std::size_t motive_idx, std::size_t eps_idx,
                      int trial) {
    return Persona{spec.motives[motive_idx], spec.epsilons[eps_idx],
                   splitmix64(trial_key(spec, motive_idx, eps_idx, trial) ^ 0x5045525341ULL)};
}

CampaignConfig trial_config(const EvaluationSpec& spec, std::size_t motive_idx, std::size_t eps_idx,
                            int trial) {
    CampaignConfig cfg = spec.config;
    cfg.seed = trial_key(spec, motive_idx, eps_idx, trial);
    return cfg;
}

namespace {

struct TrialOutcome {
    std::optional<Motive> prediction;
};

TrialOutcome run_trial(const EvaluationSpec& spec, std::size_t mi, std::size_t ei, int trial) {
    const Transcript t = run_exercise(trial_config(spec, mi, ei, trial), trial_persona(spec, mi, ei, trial));
    return {t.prediction};
}

AccuracyTable tabulate(const EvaluationSpec& spec, const std::vector<TrialOutcome>& outcomes) {
    AccuracyTable table;
    const std::size_t per_cell = static_cast<std::size_t>(spec.trials);
    for (std::size_t mi = 0; mi < spec.motives.size(); ++mi) {
        for (std::size_t ei = 0; ei < spec.epsilons.size(); ++ei) {
            AccuracyCell cell;
            cell.motive = spec.motives[mi];
            cell.epsilon = spec.epsilons[ei];
            const std::size_t base = (mi * spec.epsilons.size() + ei) * per_cell;
            for (std::size_t k = 0; k < per_cell; ++k) {
                const auto& p = outcomes[base + k].prediction;
                ++cell.trials;
                if (p && *p == cell.motive) ++cell.correct;
                ++cell.confusion[p ? std::string(to_string(*p)) : "none"];
            }
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

}  // namespace

AccuracyTable evaluate_serial(const EvaluationSpec& spec) {
    spec.validate();
    std::vector<TrialOutcome> outcomes;
    for (std::size_t mi = 0; mi < spec.motives.size(); ++mi)
        for (std::size_t ei = 0; ei < spec.epsilons.size(); ++ei)
            for (int trial = 0; trial < spec.trials; ++trial)
                outcomes.push_back(run_trial(spec, mi, ei, trial));
    return tabulate(spec, outcomes);
}

AccuracyTable evaluate(const EvaluationSpec& spec) {
    spec.validate();
    const std::size_t n_eps = spec.epsilons.size();
    const std::size_t per_cell = static_cast<std::size_t>(spec.trials);
    const std::size_t total = spec.motives.size() * n_eps * per_cell;
    std::vector<TrialOutcome> outcomes(total);
    std::vector<std::exception_ptr> failures(total);
    const auto n = static_cast<std::ptrdiff_t>(total);

#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const std::size_t cell = k / per_cell;
        try {
            outcomes[k] = run_trial(spec, cell / n_eps, cell % n_eps, static_cast<int>(k % per_cell));
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return tabulate(spec, outcomes);
}

const AccuracyCell& AccuracyTable::at(Motive m, double epsilon) const {
    for (const auto& c : cells)
        if (c.motive == m && c.epsilon == epsilon) return c;
    throw ValidationError("no accuracy cell for " + std::string(to_string(m)));
}

json accuracy_to_json(const AccuracyTable& table) {
    json rows = json::array();
    for (const auto& c : table.cells)
        rows.push_back({{"motive", c.motive},
                        {"epsilon", c.epsilon},
                        {"trials", c.trials},
                        {"correct", c.correct},
                        {"accuracy", c.accuracy()},
                        {"confusion", c.confusion}});
    return json{{"cells", std::move(rows)}};
}

std::string accuracy_to_text(const AccuracyTable& table) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %8s %7s %8s %9s  %s\n", "motive", "epsilon", "trials",
                  "correct", "accuracy", "predictions");
    out << line;
    for (const auto& c : table.cells) {
        std::string confusion;
        for (const auto& [name, count] : c.confusion) {
            if (!confusion.empty()) confusion += ' ';
            confusion += name + "=" + std::to_string(count);
        }
        std::snprintf(line, sizeof line, "%-14s %8.3f %7d %8d %9.3f  ", std::string(to_string(c.motive)).c_str(),
                      c.epsilon, c.trials, c.correct, c.accuracy());
        out << line << confusion << '\n';
    }
    return out.str();
}

}  // namespace motivetrap
