#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emoclick/affect.hpp"
#include "emoclick/style.hpp"

namespace emoclick {

struct HeadlineFieldMapping {
    std::string id = "id";
    std::string text = "text";
    std::string label = "label";
};

struct PostFieldMapping {
    std::string id = "id";
    std::string title = "title";
    std::string body = "body";
    std::string source = "source";
};

struct CorpusConfig {
    std::string headlines_path;
    std::string posts_path;
    HeadlineFieldMapping headline_fields;
    PostFieldMapping post_fields;
    bool clickbait_only = true;
    double label_threshold = 0.5;
    std::optional<std::uint64_t> post_limit;
    std::optional<std::string> predictions_path;
};

struct EmbeddingBackendConfig {
    std::string kind = "hash";  // hash | file | openai
    std::string model_id = "BAAI/bge-large-en-v1.5";
    std::string endpoint;
    std::string api_key_env;
    std::uint64_t dim = 64;
    std::string path;  // file backend source
};

struct GenerationBackendConfig {
    std::string kind = "echo";  // echo | openai
    std::string model_id = "microsoft/Phi-3-mini-4k-instruct";
    std::string endpoint;
    std::string api_key_env;
    std::uint64_t context_chars = 16384;
};

struct EmotionBackendConfig {
    std::string kind = "keyword";  // keyword | file | http
    std::string model_id = "SamLowe/roberta-base-go_emotions";
    std::string endpoint;
    std::string api_key_env;
    std::string keywords_path;
    std::string path;  // file backend source
    std::string neutral_label = "neutral";
};

// Full run configuration. Loaded from one JSON file and validated in full
// before any stage runs; unknown keys are rejected at every level.
struct PipelineConfig {
    CorpusConfig corpus;
    EmbeddingBackendConfig embedding;
    GenerationBackendConfig generation;
    EmotionBackendConfig emotion;
    DecodeParams decode_params;
    std::string lexicon_path;
    std::string templates_path;
    std::vector<StyleLabel> styles{kAllStyles.begin(), kAllStyles.end()};
    double similarity_floor = 0.0;
    // When set, each variant's cosine to its source text is checked against
    // this floor; variants below it are flagged, never deleted.
    std::optional<double> semantic_gate_floor;
    VadAggregation aggregation = VadAggregation::WeightedMean;
    double weight_floor = 0.0;
    std::string post_text_fields = "both";  // both | title | body
    std::string stylize_source = "headline";  // headline | seed
    std::string seed_text;
    std::uint64_t batch_size = 16;
    std::uint64_t concurrency = 1;
    int max_retries = 3;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    bool offline = false;

    // Canonical JSON used for hashing and the manifest echo; excludes
    // output_dir so the same experiment in two directories hashes equal.
    std::string canonical_json() const;
    std::string config_hash() const;
};

PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json_text(const std::string& text, const std::string& origin);

}  // namespace emoclick
