#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emoclick/retry.hpp"

namespace emoclick {

enum class StyleLabel {
    Clickbait,
    Neutral,
    Formal,
    Casual,
    Inspirational,
    Humor,
};

inline constexpr std::array<StyleLabel, 6> kAllStyles = {
    StyleLabel::Clickbait, StyleLabel::Neutral,        StyleLabel::Formal,
    StyleLabel::Casual,    StyleLabel::Inspirational,  StyleLabel::Humor,
};

// Serialized lowercase; the set is closed.
std::string_view to_string(StyleLabel style);
StyleLabel style_from_string(std::string_view name);

// Decoding defaults follow the greedy configuration: temperature 0.0,
// top-p 1.0, at most 400 new tokens.
struct DecodeParams {
    double temperature = 0.0;
    double top_p = 1.0;
    int max_new_tokens = 400;

    bool operator==(const DecodeParams&) const = default;
    std::string fingerprint() const;
};

// Versioned prompt templates: one scaffold with {{style_instruction}} and
// {{source_text}} placeholders plus one instruction snippet per style, so
// two renderings of the same source differ only in the instruction span.
class PromptTemplateSet {
public:
    static PromptTemplateSet load(const std::filesystem::path& path);
    PromptTemplateSet(std::string version, std::string scaffold,
                      std::map<std::string, std::string> style_instructions);

    const std::string& version() const { return version_; }

    // Deterministic interpolation; rejects empty source text and styles
    // without an instruction snippet.
    std::string render(std::string_view source_text, StyleLabel style) const;

    // Delimiters around the source span inside rendered prompts; the echo
    // test backend relies on them to return the source unchanged.
    static constexpr std::string_view kSourceFenceOpen = "\"\"\"\n";
    static constexpr std::string_view kSourceFenceClose = "\n\"\"\"";

private:
    std::string version_;
    std::string scaffold_;
    std::map<std::string, std::string> style_instructions_;
};

// One stylistic rewrite with full generation provenance. created_at is
// kept in the generation cache for audit but never serialized into
// checkpoints or reports, which must be run-to-run deterministic.
struct StyledVariant {
    std::string source_pair_id;
    StyleLabel style = StyleLabel::Clickbait;
    std::string text;
    std::string backend_id;
    std::string model_id;
    DecodeParams decode_params;
    std::string prompt_hash;
    std::string template_version;
    std::string created_at;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string model_id() const = 0;
    // Maximum prompt size accepted, in characters.
    virtual std::size_t context_chars() const = 0;
    virtual std::string generate(const std::string& prompt, const DecodeParams& params) = 0;
};

// Offline test backend: returns the fenced source span of the prompt
// unchanged, so variant text equals source text.
class EchoBackend : public GenerationBackend {
public:
    explicit EchoBackend(std::size_t context_chars = 16384)
        : context_chars_(context_chars) {}

    std::string id() const override { return "builtin:echo"; }
    std::string model_id() const override { return "echo"; }
    std::size_t context_chars() const override { return context_chars_; }
    std::string generate(const std::string& prompt, const DecodeParams& params) override;

private:
    std::size_t context_chars_;
};

// Append-only content-addressed store of generations. Key covers template
// version, style, model id, decode params, and source text; the backend id
// is provenance, not identity. Raw responses are retained for audit.
class GenerationCache {
public:
    explicit GenerationCache(std::filesystem::path path);

    struct Entry {
        std::string key;
        std::string style;
        std::string raw_response;
        std::string text;
        std::string backend_id;
        std::string model_id;
        DecodeParams params;
        std::string template_version;
        std::string prompt_hash;
        std::string created_at;
    };

    static std::string make_key(const std::string& template_version, StyleLabel style,
                                const std::string& model_id, const DecodeParams& params,
                                const std::string& source_text);

    std::optional<Entry> find(const std::string& key) const;
    void append(const Entry& entry);

private:
    std::filesystem::path path_;
    std::map<std::string, Entry> entries_;
    mutable std::mutex mutex_;
};

struct StylizeOptions {
    RetryPolicy retry;
    GenerationCache* cache = nullptr;
};

// Renders the prompt, consults the cache, and otherwise calls the backend
// with bounded retries. Response text is stripped of surrounding
// whitespace and one layer of wrapping quotes; blank generations surface
// as EmptyGenerationError.
StyledVariant stylize(const std::string& source_text, StyleLabel style,
                      GenerationBackend& backend, const DecodeParams& params,
                      const PromptTemplateSet& templates,
                      const StylizeOptions& options = {});

struct PairText {
    std::string pair_id;
    std::string text;
};

struct StylizeFailure {
    std::string pair_id;
    std::string style;
    std::string error;
};

struct StylizeCorpusResult {
    std::vector<StyledVariant> variants;
    std::vector<StylizeFailure> failures;
};

// |pairs| x |styles| attempts; per-item failures land in the failure ledger
// without aborting the run. Output is ordered by (pair order, style order).
// Throws only if every single item fails.
StylizeCorpusResult stylize_corpus(std::span<const PairText> pairs,
                                   std::span<const StyleLabel> styles,
                                   GenerationBackend& backend, const DecodeParams& params,
                                   const PromptTemplateSet& templates,
                                   const StylizeOptions& options = {},
                                   std::size_t concurrency = 1);

// Strips leading/trailing whitespace and one layer of matching quote marks.
std::string normalize_generation(std::string_view raw);

}  // namespace emoclick
