#include "emoclick/http_backends.hpp"

#include <algorithm>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "emoclick/errors.hpp"

namespace emoclick {

namespace {

using nlohmann::json;

struct Endpoint {
    std::string base;        // scheme://host[:port]
    std::string path_prefix; // e.g. /v1
};

Endpoint parse_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, ""};
    }
    std::string prefix = url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') {
        prefix.pop_back();
    }
    return {url.substr(0, path_start), prefix};
}

httplib::Headers auth_headers(const HttpBackendConfig& config) {
    httplib::Headers headers;
    if (!config.api_key_env.empty()) {
        const char* key = std::getenv(config.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            throw ConfigError("environment variable " + config.api_key_env +
                              " is not set");
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    return headers;
}

json post_json(const HttpBackendConfig& config, const std::string& path,
               const json& body) {
    const Endpoint ep = parse_endpoint(config.endpoint);
    httplib::Client client(ep.base);
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);

    auto res = client.Post(ep.path_prefix + path, auth_headers(config), body.dump(),
                           "application/json");
    if (!res) {
        throw TransportError("request to " + config.endpoint + path + " failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
        throw TransportError("request to " + config.endpoint + path +
                             " returned status " + std::to_string(res->status));
    }
    if (res->status < 200 || res->status >= 300) {
        throw BackendUnavailableError("request to " + config.endpoint + path +
                                      " rejected with status " +
                                      std::to_string(res->status) + ": " + res->body);
    }
    json parsed = json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
        throw BackendUnavailableError("non-JSON response from " + config.endpoint + path);
    }
    return parsed;
}

}  // namespace

OpenAiEmbeddingBackend::OpenAiEmbeddingBackend(HttpBackendConfig config)
    : config_(std::move(config)) {}

std::string OpenAiEmbeddingBackend::id() const {
    return "openai-embeddings:" + config_.endpoint;
}

std::vector<std::vector<double>> OpenAiEmbeddingBackend::embed(
    const std::vector<EmbedRequest>& batch) {
    json body;
    body["model"] = config_.model_id;
    json input = json::array();
    for (const EmbedRequest& req : batch) {
        input.push_back(req.text);
    }
    body["input"] = input;

    const json response = post_json(config_, "/embeddings", body);
    if (!response.contains("data") || !response["data"].is_array() ||
        response["data"].size() != batch.size()) {
        throw BackendUnavailableError("embeddings response has no per-input data array");
    }
    std::vector<std::vector<double>> out(batch.size());
    for (const json& item : response["data"]) {
        const std::size_t index = item.at("index").get<std::size_t>();
        if (index >= out.size()) {
            throw BackendUnavailableError("embeddings response index out of range");
        }
        out[index] = item.at("embedding").get<std::vector<double>>();
    }
    return out;
}

OpenAiChatBackend::OpenAiChatBackend(HttpBackendConfig config, std::size_t context_chars)
    : config_(std::move(config)), context_chars_(context_chars) {}

std::string OpenAiChatBackend::id() const {
    return "openai-chat:" + config_.endpoint;
}

std::string OpenAiChatBackend::generate(const std::string& prompt,
                                        const DecodeParams& params) {
    json body;
    body["model"] = config_.model_id;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = params.temperature;
    body["top_p"] = params.top_p;
    body["max_tokens"] = params.max_new_tokens;

    const json response = post_json(config_, "/chat/completions", body);
    if (!response.contains("choices") || response["choices"].empty()) {
        throw BackendUnavailableError("chat response has no choices");
    }
    const json& message = response["choices"][0].at("message");
    return message.at("content").get<std::string>();
}

HttpEmotionBackend::HttpEmotionBackend(HttpBackendConfig config, std::string taxonomy)
    : config_(std::move(config)), taxonomy_(std::move(taxonomy)) {}

std::string HttpEmotionBackend::id() const {
    return "http-emotion:" + config_.endpoint;
}

std::vector<EmotionDistribution> HttpEmotionBackend::classify(
    const std::vector<AnnotateRequest>& batch) {
    json body;
    body["model"] = config_.model_id;
    json input = json::array();
    for (const AnnotateRequest& req : batch) {
        input.push_back(req.text);
    }
    body["input"] = input;

    const json response = post_json(config_, "/classify", body);
    if (response.contains("taxonomy") &&
        response["taxonomy"].get<std::string>() != taxonomy_) {
        throw TaxonomyMismatchError("endpoint taxonomy '" +
                                    response["taxonomy"].get<std::string>() +
                                    "' does not match configured '" + taxonomy_ + "'");
    }
    if (!response.contains("data") || response["data"].size() != batch.size()) {
        throw BackendUnavailableError("classification response has no per-input data");
    }
    std::vector<std::map<std::string, double>> scores(batch.size());
    for (const json& item : response["data"]) {
        const std::size_t index = item.at("index").get<std::size_t>();
        if (index >= scores.size()) {
            throw BackendUnavailableError("classification response index out of range");
        }
        scores[index] = item.at("scores").get<std::map<std::string, double>>();
    }
    std::vector<EmotionDistribution> out;
    out.reserve(scores.size());
    for (auto& s : scores) {
        out.emplace_back(std::move(s));
    }
    return out;
}

}  // namespace emoclick
