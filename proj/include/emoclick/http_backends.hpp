#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emoclick/embedding.hpp"
#include "emoclick/emotion.hpp"
#include "emoclick/style.hpp"

namespace emoclick {

// Shared wiring for HTTP backends. `endpoint` is a base URL such as
// "http://localhost:8089/v1"; credentials come only from the environment
// variable named in `api_key_env`, never from config values.
struct HttpBackendConfig {
    std::string endpoint;
    std::string model_id;
    std::string api_key_env;
    int timeout_seconds = 30;
};

// OpenAI-compatible embeddings endpoint: POST {endpoint}/embeddings with
// {"model", "input": [texts]} and a per-input "data" array in response.
class OpenAiEmbeddingBackend : public EmbeddingBackend {
public:
    explicit OpenAiEmbeddingBackend(HttpBackendConfig config);

    std::string id() const override;
    std::string model_id() const override { return config_.model_id; }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override;

private:
    HttpBackendConfig config_;
};

// OpenAI-compatible chat completions endpoint: POST
// {endpoint}/chat/completions with a single-turn messages array and the
// greedy decode params; the first choice's message content is the rewrite.
class OpenAiChatBackend : public GenerationBackend {
public:
    OpenAiChatBackend(HttpBackendConfig config, std::size_t context_chars = 16384);

    std::string id() const override;
    std::string model_id() const override { return config_.model_id; }
    std::size_t context_chars() const override { return context_chars_; }
    std::string generate(const std::string& prompt, const DecodeParams& params) override;

private:
    HttpBackendConfig config_;
    std::size_t context_chars_;
};

// Emotion classification endpoint: POST {endpoint}/classify with
// {"model", "input": [texts]}; response carries {"taxonomy", "data":
// [{"index", "scores": {label: score}}]}.
class HttpEmotionBackend : public EmotionBackend {
public:
    HttpEmotionBackend(HttpBackendConfig config, std::string taxonomy);

    std::string id() const override;
    std::string taxonomy() const override { return taxonomy_; }
    std::vector<EmotionDistribution> classify(
        const std::vector<AnnotateRequest>& batch) override;

private:
    HttpBackendConfig config_;
    std::string taxonomy_;
};

}  // namespace emoclick
