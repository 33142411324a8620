#pragma once

// Decoy text generation. Documents are produced per (type, subject) either by
// a remote chat-completion backend fed the prop-writer prompt, or offline by a
// seeded template generator.

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motivetrap/model.hpp"

namespace motivetrap {

inline constexpr std::size_t kSubjectsPerType = 10;

// Catalog subjects for a type, in catalog order.
std::span<const std::string_view, kSubjectsPerType> subjects_for_type(DocType t) noexcept;

bool is_catalog_subject(DocType t, std::string_view subject) noexcept;

// Fills the prop-writer prompt template. Throws ValidationError when subject
// is not in the catalog for t.
std::string build_prompt(DocType t, std::string_view subject, const OrgProfile& org);

struct GenerationRequest {
    DocType doc_type = DocType::Financial;
    std::string subject;
    OrgProfile org;
    std::string prompt;
    std::uint64_t seed = 0;
};

// Implementations must be safe to call from several threads at once.
class TextBackend {
public:
    virtual ~TextBackend() = default;
    virtual std::string_view name() const noexcept = 0;
    virtual std::string complete(const GenerationRequest& request) const = 0;
};

// Offline generator. Output is a pure function of (type, subject, org, seed);
// the prompt is ignored.
class TemplateBackend final : public TextBackend {
public:
    std::string_view name() const noexcept override { return "deterministic-template"; }
    std::string complete(const GenerationRequest& request) const override;
};

struct RemoteBackendSettings {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    std::chrono::seconds timeout{60};

    // Reads MOTIVETRAP_LLM_BASE_URL, MOTIVETRAP_LLM_API_KEY (falling back to
    // OPENAI_API_KEY) and MOTIVETRAP_LLM_MODEL over the defaults above.
    static RemoteBackendSettings from_environment();
};

// OpenAI-compatible chat completion client. Each call sends the prompt as a
// single user message and returns the first choice verbatim.
class RemoteChatBackend final : public TextBackend {
public:
    explicit RemoteChatBackend(RemoteBackendSettings settings);
    std::string_view name() const noexcept override { return "remote-llm"; }
    std::string complete(const GenerationRequest& request) const override;

    const RemoteBackendSettings& settings() const noexcept { return settings_; }

private:
    RemoteBackendSettings settings_;
};

std::unique_ptr<TextBackend> make_backend(GeneratorMode mode);

// Runs the backend and rejects empty completions with GenerationError.
std::string generate_text(const GenerationRequest& request, const TextBackend& backend);

struct GeneratedDocument {
    DocType doc_type = DocType::Financial;
    std::string subject;
    std::string file_name;
    std::string body;

    friend bool operator==(const GeneratedDocument&, const GeneratedDocument&) = default;
};

// "IT Asset Inventory" + 1 + ".docx" -> "IT Asset Inventory01.docx"
std::string document_file_name(std::string_view subject, int index, std::string_view extension);

// Per-document seed derived from the campaign seed and the document's slot.
std::uint64_t document_seed(std::uint64_t campaign_seed, int env_index, DocType t, int ordinal) noexcept;

// Documents for one environment: docs_per_type per type mapped from each
// remaining motive, motives in the given order, subjects in catalog order
// cycling with an incremented file index once the catalog is exhausted.
// Generation calls run in parallel when OpenMP is available; the result is
// identical to generate_environment_set_serial.
std::vector<GeneratedDocument> generate_environment_set(std::span<const Motive> remaining,
                                                        const CampaignConfig& config, int env_index,
                                                        const TextBackend& backend);

// Single-threaded reference for the function above.
std::vector<GeneratedDocument> generate_environment_set_serial(std::span<const Motive> remaining,
                                                               const CampaignConfig& config,
                                                               int env_index,
                                                               const TextBackend& backend);

}  // namespace motivetrap
