#pragma once

// Scripted attacker personas and the Monte Carlo harness built on them.
//
// A persona prefers documents of its motive's type: with probability
// 1 - epsilon it opens a uniformly chosen unvisited preferred document when
// one is left, otherwise it opens any unvisited document uniformly.
// epsilon = 0 is a perfectly motive-driven attacker, epsilon = 1 a random one.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "motivetrap/campaign.hpp"

namespace motivetrap {

struct Persona {
    Motive motive = Motive::Profit;
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct VisibleDocument {
    std::string file_name;
    DocumentLocation location;
    DocType doc_type = DocType::Financial;
};

class PersonaPolicy {
public:
    explicit PersonaPolicy(const Persona& persona);

    // Throws ValidationError on an empty listing.
    const VisibleDocument& next_choice(std::span<const VisibleDocument> unvisited);

    const Persona& persona() const noexcept { return persona_; }

private:
    Persona persona_;
    std::mt19937_64 rng_;
};

// Unvisited documents of the campaign's current environment, deployment order.
std::vector<VisibleDocument> unvisited_documents(const Campaign& campaign);

struct TranscriptAccess {
    int env_index = 1;
    std::string file_name;
    std::string loc_hash;

    friend bool operator==(const TranscriptAccess&, const TranscriptAccess&) = default;
};

struct Transcript {
    Persona persona;
    std::vector<TranscriptAccess> accesses;
    std::vector<AccessEvent> events;  // exactly what was sent to the engine
    std::vector<EliminationResult> eliminations;
    std::optional<Motive> prediction;
    bool correct = false;
    CampaignReport report;
};

json transcript_to_json(const Transcript& t);

// Events as JSON Lines, ready for replay.
std::string export_events_jsonl(const Transcript& t);

enum class FileshareKind { Memory, Disk };

struct ExerciseOptions {
    FileshareKind fileshare = FileshareKind::Memory;
    // Persist campaign.json/registry.json after each transition (disk only).
    bool persist = false;
};

// Starts a campaign, lets the persona browse each environment until the
// campaign ends, and records everything. Events are timestamped from a fixed
// base so transcripts are reproducible.
Transcript run_exercise(const CampaignConfig& config, const Persona& persona,
                        const ExerciseOptions& options = {});

// ---- evaluation -----------------------------------------------------------------

struct EvaluationSpec {
    CampaignConfig config;
    std::vector<Motive> motives{kAllMotives.begin(), kAllMotives.end()};
    std::vector<double> epsilons{0.0};
    int trials = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AccuracyCell {
    Motive motive = Motive::Profit;
    double epsilon = 0.0;
    int trials = 0;
    int correct = 0;
    // Predicted motive name (or "none") -> count.
    std::map<std::string, int> confusion;

    double accuracy() const noexcept { return trials == 0 ? 0.0 : double(correct) / trials; }
    friend bool operator==(const AccuracyCell&, const AccuracyCell&) = default;
};

struct AccuracyTable {
    std::vector<AccuracyCell> cells;  // motive-major, epsilon-minor

    const AccuracyCell& at(Motive m, double epsilon) const;
    friend bool operator==(const AccuracyTable&, const AccuracyTable&) = default;
};

json accuracy_to_json(const AccuracyTable& table);
std::string accuracy_to_text(const AccuracyTable& table);

// Campaign and persona seeds for one trial; independent of execution order.
Persona trial_persona(const EvaluationSpec& spec, std::size_t motive_idx, std::size_t eps_idx,
                      int trial);
CampaignConfig trial_config(const EvaluationSpec& spec, std::size_t motive_idx, std::size_t eps_idx,
                            int trial);

// Trials run in parallel under OpenMP; result equals evaluate_serial.
AccuracyTable evaluate(const EvaluationSpec& spec);
AccuracyTable evaluate_serial(const EvaluationSpec& spec);

}  // namespace motivetrap
