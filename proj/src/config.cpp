#include "emoclick/config.hpp"

#include <set>

#include "emoclick/errors.hpp"
#include "emoclick/hashing.hpp"
#include "emoclick/jsonl.hpp"

namespace emoclick {

namespace {

void reject_unknown_keys(const Json& obj, const std::set<std::string>& allowed,
                         const std::string& scope) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + scope);
        }
    }
}

template <typename T>
void read_field(const Json& obj, const char* key, T& target) {
    if (obj.contains(key)) {
        target = obj.at(key).get<T>();
    }
}

HeadlineFieldMapping parse_headline_fields(const Json& obj) {
    reject_unknown_keys(obj, {"id", "text", "label"}, "corpus.headline_fields");
    HeadlineFieldMapping m;
    read_field(obj, "id", m.id);
    read_field(obj, "text", m.text);
    read_field(obj, "label", m.label);
    return m;
}

PostFieldMapping parse_post_fields(const Json& obj) {
    reject_unknown_keys(obj, {"id", "title", "body", "source"}, "corpus.post_fields");
    PostFieldMapping m;
    read_field(obj, "id", m.id);
    read_field(obj, "title", m.title);
    read_field(obj, "body", m.body);
    read_field(obj, "source", m.source);
    return m;
}

CorpusConfig parse_corpus(const Json& obj) {
    reject_unknown_keys(obj,
                        {"headlines_path", "posts_path", "headline_fields", "post_fields",
                         "clickbait_only", "label_threshold", "post_limit",
                         "predictions_path"},
                        "corpus");
    CorpusConfig c;
    read_field(obj, "headlines_path", c.headlines_path);
    read_field(obj, "posts_path", c.posts_path);
    if (obj.contains("headline_fields")) {
        c.headline_fields = parse_headline_fields(obj.at("headline_fields"));
    }
    if (obj.contains("post_fields")) {
        c.post_fields = parse_post_fields(obj.at("post_fields"));
    }
    read_field(obj, "clickbait_only", c.clickbait_only);
    read_field(obj, "label_threshold", c.label_threshold);
    if (obj.contains("post_limit") && !obj.at("post_limit").is_null()) {
        c.post_limit = obj.at("post_limit").get<std::uint64_t>();
    }
    if (obj.contains("predictions_path") && !obj.at("predictions_path").is_null()) {
        c.predictions_path = obj.at("predictions_path").get<std::string>();
    }
    return c;
}

EmbeddingBackendConfig parse_embedding(const Json& obj) {
    reject_unknown_keys(obj, {"kind", "model_id", "endpoint", "api_key_env", "dim", "path"},
                        "backends.embedding");
    EmbeddingBackendConfig c;
    read_field(obj, "kind", c.kind);
    read_field(obj, "model_id", c.model_id);
    read_field(obj, "endpoint", c.endpoint);
    read_field(obj, "api_key_env", c.api_key_env);
    read_field(obj, "dim", c.dim);
    read_field(obj, "path", c.path);
    return c;
}

GenerationBackendConfig parse_generation(const Json& obj) {
    reject_unknown_keys(obj,
                        {"kind", "model_id", "endpoint", "api_key_env", "context_chars"},
                        "backends.generation");
    GenerationBackendConfig c;
    read_field(obj, "kind", c.kind);
    read_field(obj, "model_id", c.model_id);
    read_field(obj, "endpoint", c.endpoint);
    read_field(obj, "api_key_env", c.api_key_env);
    read_field(obj, "context_chars", c.context_chars);
    return c;
}

EmotionBackendConfig parse_emotion(const Json& obj) {
    reject_unknown_keys(obj,
                        {"kind", "model_id", "endpoint", "api_key_env", "keywords_path",
                         "path", "neutral_label"},
                        "backends.emotion");
    EmotionBackendConfig c;
    read_field(obj, "kind", c.kind);
    read_field(obj, "model_id", c.model_id);
    read_field(obj, "endpoint", c.endpoint);
    read_field(obj, "api_key_env", c.api_key_env);
    read_field(obj, "keywords_path", c.keywords_path);
    read_field(obj, "path", c.path);
    read_field(obj, "neutral_label", c.neutral_label);
    return c;
}

DecodeParams parse_decode_params(const Json& obj) {
    reject_unknown_keys(obj, {"temperature", "top_p", "max_new_tokens"}, "decode_params");
    DecodeParams p;
    read_field(obj, "temperature", p.temperature);
    read_field(obj, "top_p", p.top_p);
    read_field(obj, "max_new_tokens", p.max_new_tokens);
    return p;
}

void validate(const PipelineConfig& c) {
    const std::set<std::string> embedding_kinds = {"hash", "file", "openai"};
    const std::set<std::string> generation_kinds = {"echo", "openai"};
    const std::set<std::string> emotion_kinds = {"keyword", "file", "http"};
    if (!embedding_kinds.count(c.embedding.kind)) {
        throw ConfigError("unknown embedding backend kind '" + c.embedding.kind + "'");
    }
    if (!generation_kinds.count(c.generation.kind)) {
        throw ConfigError("unknown generation backend kind '" + c.generation.kind + "'");
    }
    if (!emotion_kinds.count(c.emotion.kind)) {
        throw ConfigError("unknown emotion backend kind '" + c.emotion.kind + "'");
    }
    if (c.offline) {
        if (c.embedding.kind == "openai" || c.generation.kind == "openai" ||
            c.emotion.kind == "http") {
            throw ConfigError("offline mode forbids network backends");
        }
    }
    if (c.embedding.kind == "openai" && c.embedding.endpoint.empty()) {
        throw ConfigError("embedding backend 'openai' needs an endpoint");
    }
    if (c.generation.kind == "openai" && c.generation.endpoint.empty()) {
        throw ConfigError("generation backend 'openai' needs an endpoint");
    }
    if (c.emotion.kind == "http" && c.emotion.endpoint.empty()) {
        throw ConfigError("emotion backend 'http' needs an endpoint");
    }
    if (c.embedding.kind == "file" && c.embedding.path.empty()) {
        throw ConfigError("embedding backend 'file' needs a path");
    }
    if (c.emotion.kind == "file" && c.emotion.path.empty()) {
        throw ConfigError("emotion backend 'file' needs a path");
    }
    if (c.emotion.kind == "keyword" && c.emotion.keywords_path.empty()) {
        throw ConfigError("emotion backend 'keyword' needs a keywords_path");
    }
    if (c.embedding.dim == 0) {
        throw ConfigError("embedding dim must be positive");
    }
    if (c.styles.empty()) {
        throw ConfigError("styles must not be empty");
    }
    if (c.lexicon_path.empty()) {
        throw ConfigError("lexicon_path is required");
    }
    if (c.templates_path.empty()) {
        throw ConfigError("templates_path is required");
    }
    if (c.corpus.headlines_path.empty() || c.corpus.posts_path.empty()) {
        throw ConfigError("corpus headlines_path and posts_path are required");
    }
    if (c.post_text_fields != "both" && c.post_text_fields != "title" &&
        c.post_text_fields != "body") {
        throw ConfigError("post_text_fields must be both, title, or body");
    }
    if (c.stylize_source != "headline" && c.stylize_source != "seed") {
        throw ConfigError("stylize_source must be headline or seed");
    }
    if (c.stylize_source == "seed" && c.seed_text.empty()) {
        throw ConfigError("stylize_source 'seed' requires seed_text");
    }
    if (c.batch_size == 0 || c.concurrency == 0) {
        throw ConfigError("batch_size and concurrency must be positive");
    }
    if (c.max_retries < 1) {
        throw ConfigError("max_retries must be at least 1");
    }
    if (!(c.corpus.label_threshold >= 0.0 && c.corpus.label_threshold <= 1.0)) {
        throw ConfigError("label_threshold must lie in [0,1]");
    }
    if (c.semantic_gate_floor &&
        !(*c.semantic_gate_floor >= -1.0 && *c.semantic_gate_floor <= 1.0)) {
        throw ConfigError("semantic_gate_floor must lie in [-1,1]");
    }
    std::set<StyleLabel> seen;
    for (StyleLabel s : c.styles) {
        if (!seen.insert(s).second) {
            throw ConfigError("duplicate style '" + std::string(to_string(s)) + "'");
        }
    }
}

}  // namespace

PipelineConfig config_from_json_text(const std::string& text, const std::string& origin) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError(origin + ": config is not valid JSON");
    }
    reject_unknown_keys(doc,
                        {"corpus", "backends", "decode_params", "lexicon_path",
                         "templates_path", "styles", "similarity_floor",
                         "semantic_gate_floor", "aggregation", "weight_floor",
                         "post_text_fields", "stylize_source", "seed_text", "batch_size",
                         "concurrency", "max_retries", "output_dir", "seed", "offline"},
                        "config");
    PipelineConfig c;
    if (doc.contains("corpus")) {
        c.corpus = parse_corpus(doc.at("corpus"));
    }
    if (doc.contains("backends")) {
        const Json& backends = doc.at("backends");
        reject_unknown_keys(backends, {"embedding", "generation", "emotion"}, "backends");
        if (backends.contains("embedding")) {
            c.embedding = parse_embedding(backends.at("embedding"));
        }
        if (backends.contains("generation")) {
            c.generation = parse_generation(backends.at("generation"));
        }
        if (backends.contains("emotion")) {
            c.emotion = parse_emotion(backends.at("emotion"));
        }
    }
    if (doc.contains("decode_params")) {
        c.decode_params = parse_decode_params(doc.at("decode_params"));
    }
    read_field(doc, "lexicon_path", c.lexicon_path);
    read_field(doc, "templates_path", c.templates_path);
    if (doc.contains("styles")) {
        c.styles.clear();
        for (const Json& s : doc.at("styles")) {
            c.styles.push_back(style_from_string(s.get<std::string>()));
        }
    }
    read_field(doc, "similarity_floor", c.similarity_floor);
    if (doc.contains("semantic_gate_floor") && !doc.at("semantic_gate_floor").is_null()) {
        c.semantic_gate_floor = doc.at("semantic_gate_floor").get<double>();
    }
    if (doc.contains("aggregation")) {
        c.aggregation = aggregation_from_string(doc.at("aggregation").get<std::string>());
    }
    read_field(doc, "weight_floor", c.weight_floor);
    read_field(doc, "post_text_fields", c.post_text_fields);
    read_field(doc, "stylize_source", c.stylize_source);
    read_field(doc, "seed_text", c.seed_text);
    read_field(doc, "batch_size", c.batch_size);
    read_field(doc, "concurrency", c.concurrency);
    read_field(doc, "max_retries", c.max_retries);
    read_field(doc, "output_dir", c.output_dir);
    read_field(doc, "seed", c.seed);
    read_field(doc, "offline", c.offline);
    validate(c);
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    return config_from_json_text(read_text_file(path), path.string());
}

std::string PipelineConfig::canonical_json() const {
    Json doc;
    Json corpus_json;
    corpus_json["headlines_path"] = corpus.headlines_path;
    corpus_json["posts_path"] = corpus.posts_path;
    corpus_json["headline_fields"] = Json{{"id", corpus.headline_fields.id},
                                          {"text", corpus.headline_fields.text},
                                          {"label", corpus.headline_fields.label}};
    corpus_json["post_fields"] = Json{{"id", corpus.post_fields.id},
                                      {"title", corpus.post_fields.title},
                                      {"body", corpus.post_fields.body},
                                      {"source", corpus.post_fields.source}};
    corpus_json["clickbait_only"] = corpus.clickbait_only;
    corpus_json["label_threshold"] = corpus.label_threshold;
    corpus_json["post_limit"] = corpus.post_limit ? Json(*corpus.post_limit) : Json(nullptr);
    corpus_json["predictions_path"] =
        corpus.predictions_path ? Json(*corpus.predictions_path) : Json(nullptr);
    doc["corpus"] = corpus_json;

    Json backends;
    backends["embedding"] = Json{{"kind", embedding.kind},
                                 {"model_id", embedding.model_id},
                                 {"endpoint", embedding.endpoint},
                                 {"api_key_env", embedding.api_key_env},
                                 {"dim", embedding.dim},
                                 {"path", embedding.path}};
    backends["generation"] = Json{{"kind", generation.kind},
                                  {"model_id", generation.model_id},
                                  {"endpoint", generation.endpoint},
                                  {"api_key_env", generation.api_key_env},
                                  {"context_chars", generation.context_chars}};
    backends["emotion"] = Json{{"kind", emotion.kind},
                               {"model_id", emotion.model_id},
                               {"endpoint", emotion.endpoint},
                               {"api_key_env", emotion.api_key_env},
                               {"keywords_path", emotion.keywords_path},
                               {"path", emotion.path},
                               {"neutral_label", emotion.neutral_label}};
    doc["backends"] = backends;

    doc["decode_params"] = Json{{"temperature", decode_params.temperature},
                                {"top_p", decode_params.top_p},
                                {"max_new_tokens", decode_params.max_new_tokens}};
    doc["lexicon_path"] = lexicon_path;
    doc["templates_path"] = templates_path;
    Json styles_json = Json::array();
    for (StyleLabel s : styles) {
        styles_json.push_back(std::string(to_string(s)));
    }
    doc["styles"] = styles_json;
    doc["similarity_floor"] = similarity_floor;
    doc["semantic_gate_floor"] =
        semantic_gate_floor ? Json(*semantic_gate_floor) : Json(nullptr);
    doc["aggregation"] = std::string(to_string(aggregation));
    doc["weight_floor"] = weight_floor;
    doc["post_text_fields"] = post_text_fields;
    doc["stylize_source"] = stylize_source;
    doc["seed_text"] = seed_text;
    doc["batch_size"] = batch_size;
    doc["concurrency"] = concurrency;
    doc["max_retries"] = max_retries;
    doc["seed"] = seed;
    doc["offline"] = offline;
    return doc.dump();
}

std::string PipelineConfig::config_hash() const {
    return content_hash(canonical_json());
}

}  // namespace emoclick
