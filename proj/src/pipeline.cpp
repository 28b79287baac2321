#include "emoclick/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <memory>
#include <set>

#include "emoclick/align.hpp"
#include "emoclick/embedding.hpp"
#include "emoclick/emotion.hpp"
#include "emoclick/errors.hpp"
#include "emoclick/hashing.hpp"
#include "emoclick/http_backends.hpp"

namespace emoclick {

namespace {

constexpr const char* kManifestSchema = "emoclick/manifest/v1";

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double parse_label_value(const Json& value, const std::string& origin) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (value.is_boolean()) {
        return value.get<bool>() ? 1.0 : 0.0;
    }
    if (value.is_string()) {
        const std::string s = value.get<std::string>();
        if (s == "clickbait") return 1.0;
        if (s == "no-clickbait" || s == "non-clickbait") return 0.0;
        try {
            return std::stod(s);
        } catch (...) {
        }
    }
    throw ParseError(origin + ": label value is neither numeric nor a known class name");
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Counting decorators feed the manifest call log with transport-call
// totals per backend.
class CountingEmbeddingBackend : public EmbeddingBackend {
public:
    explicit CountingEmbeddingBackend(EmbeddingBackend& inner) : inner_(inner) {}
    std::string id() const override { return inner_.id(); }
    std::string model_id() const override { return inner_.model_id(); }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override {
        ++calls_;
        return inner_.embed(batch);
    }
    std::uint64_t calls() const { return calls_; }

private:
    EmbeddingBackend& inner_;
    std::uint64_t calls_ = 0;
};

class CountingGenerationBackend : public GenerationBackend {
public:
    explicit CountingGenerationBackend(GenerationBackend& inner) : inner_(inner) {}
    std::string id() const override { return inner_.id(); }
    std::string model_id() const override { return inner_.model_id(); }
    std::size_t context_chars() const override { return inner_.context_chars(); }
    std::string generate(const std::string& prompt, const DecodeParams& params) override {
        ++calls_;
        return inner_.generate(prompt, params);
    }
    std::uint64_t calls() const { return calls_; }

private:
    GenerationBackend& inner_;
    std::atomic<std::uint64_t> calls_ = 0;
};

class CountingEmotionBackend : public EmotionBackend {
public:
    explicit CountingEmotionBackend(EmotionBackend& inner) : inner_(inner) {}
    std::string id() const override { return inner_.id(); }
    std::string taxonomy() const override { return inner_.taxonomy(); }
    std::vector<EmotionDistribution> classify(
        const std::vector<AnnotateRequest>& batch) override {
        ++calls_;
        return inner_.classify(batch);
    }
    std::uint64_t calls() const { return calls_; }

private:
    EmotionBackend& inner_;
    std::uint64_t calls_ = 0;
};

std::unique_ptr<EmbeddingBackend> make_embedding_backend(const PipelineConfig& config) {
    if (config.embedding.kind == "hash") {
        return std::make_unique<HashEmbeddingBackend>(config.embedding.dim, config.seed);
    }
    if (config.embedding.kind == "file") {
        return std::make_unique<FileEmbeddingBackend>(
            FileEmbeddingBackend::load(config.embedding.path, config.embedding.model_id));
    }
    HttpBackendConfig http{config.embedding.endpoint, config.embedding.model_id,
                           config.embedding.api_key_env};
    return std::make_unique<OpenAiEmbeddingBackend>(http);
}

std::unique_ptr<GenerationBackend> make_generation_backend(const PipelineConfig& config) {
    if (config.generation.kind == "echo") {
        return std::make_unique<EchoBackend>(config.generation.context_chars);
    }
    HttpBackendConfig http{config.generation.endpoint, config.generation.model_id,
                           config.generation.api_key_env};
    return std::make_unique<OpenAiChatBackend>(http, config.generation.context_chars);
}

std::unique_ptr<EmotionBackend> make_emotion_backend(const PipelineConfig& config,
                                                     const std::string& taxonomy) {
    if (config.emotion.kind == "keyword") {
        return std::make_unique<KeywordEmotionBackend>(KeywordEmotionBackend::load(
            config.emotion.keywords_path, taxonomy, config.emotion.neutral_label));
    }
    if (config.emotion.kind == "file") {
        return std::make_unique<FileEmotionBackend>(
            FileEmotionBackend::load(config.emotion.path, taxonomy));
    }
    HttpBackendConfig http{config.emotion.endpoint, config.emotion.model_id,
                           config.emotion.api_key_env};
    return std::make_unique<HttpEmotionBackend>(http, taxonomy);
}

RetryPolicy retry_from_config(const PipelineConfig& config) {
    RetryPolicy policy;
    policy.max_attempts = config.max_retries;
    return policy;
}

Json metric_row_json(const MetricRow& row) {
    Json j;
    j["accuracy"] = row.accuracy;
    j["misclassification"] = 1.0 - row.accuracy;
    j["precision"] = row.precision;
    j["recall"] = row.recall;
    j["f1"] = row.f1;
    j["support"] = row.support;
    j["degenerate_precision"] = row.degenerate_precision;
    j["degenerate_recall"] = row.degenerate_recall;
    return j;
}

std::string sanitize_for_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return out;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace

std::vector<HeadlineRecord> ingest_headlines(const std::filesystem::path& path,
                                             const HeadlineFieldMapping& fields,
                                             bool clickbait_only, double label_threshold,
                                             IngestStats* stats) {
    std::vector<HeadlineRecord> records;
    std::set<std::string> seen_ids;
    IngestStats local;
    for_each_jsonl(path, [&](std::size_t line_no, const Json& j) {
        const std::string origin = path.string() + ":" + std::to_string(line_no);
        for (const std::string& field : {fields.id, fields.text, fields.label}) {
            if (!j.contains(field)) {
                throw MissingFieldError(origin + ": missing field '" + field + "'");
            }
        }
        ++local.read;
        HeadlineRecord rec;
        rec.id = j.at(fields.id).is_string() ? j.at(fields.id).get<std::string>()
                                             : j.at(fields.id).dump();
        rec.text = j.at(fields.text).get<std::string>();
        rec.label = parse_label_value(j.at(fields.label), origin);
        if (!(rec.label >= 0.0 && rec.label <= 1.0)) {
            throw ParseError(origin + ": label " + std::to_string(rec.label) +
                             " outside [0,1]");
        }
        rec.clickbait = rec.label >= label_threshold;
        if (is_blank(rec.text)) {
            throw ParseError(origin + ": headline text is empty");
        }
        if (!seen_ids.insert(rec.id).second) {
            throw ParseError(origin + ": duplicate headline id '" + rec.id + "'");
        }
        if (!clickbait_only || rec.clickbait) {
            records.push_back(std::move(rec));
            ++local.kept;
        }
        return true;
    });
    if (stats != nullptr) {
        *stats = local;
    }
    return records;
}

std::vector<PostRecord> ingest_posts(const std::filesystem::path& path,
                                     const PostFieldMapping& fields,
                                     std::optional<std::uint64_t> limit,
                                     IngestStats* stats) {
    std::vector<PostRecord> records;
    std::set<std::string> seen_ids;
    IngestStats local;
    for_each_jsonl(path, [&](std::size_t line_no, const Json& j) {
        if (limit && local.read >= *limit) {
            return false;
        }
        const std::string origin = path.string() + ":" + std::to_string(line_no);
        if (!j.contains(fields.id)) {
            throw MissingFieldError(origin + ": missing field '" + fields.id + "'");
        }
        ++local.read;
        PostRecord rec;
        rec.id = j.at(fields.id).is_string() ? j.at(fields.id).get<std::string>()
                                             : j.at(fields.id).dump();
        if (j.contains(fields.title) && j.at(fields.title).is_string()) {
            rec.title = j.at(fields.title).get<std::string>();
        }
        if (j.contains(fields.body) && j.at(fields.body).is_string()) {
            rec.body = j.at(fields.body).get<std::string>();
        }
        if (j.contains(fields.source) && j.at(fields.source).is_string()) {
            rec.source = j.at(fields.source).get<std::string>();
        }
        if (!seen_ids.insert(rec.id).second) {
            throw ParseError(origin + ": duplicate post id '" + rec.id + "'");
        }
        // Validity rule: a post needs a non-blank title or body.
        if (!is_blank(rec.title) || !is_blank(rec.body)) {
            records.push_back(std::move(rec));
            ++local.kept;
        }
        return !(limit && local.read >= *limit);
    });
    if (stats != nullptr) {
        *stats = local;
    }
    return records;
}

SemanticGateResult semantic_preservation_gate(const std::vector<std::string>& source_texts,
                                              const std::vector<std::string>& variant_texts,
                                              EmbeddingBackend& backend,
                                              EmbeddingCache& cache, double floor,
                                              std::size_t batch_size) {
    if (source_texts.size() != variant_texts.size()) {
        throw DimMismatchError("gate needs one source text per variant");
    }
    std::vector<EmbedRequest> requests;
    requests.reserve(source_texts.size() * 2);
    for (std::size_t i = 0; i < source_texts.size(); ++i) {
        requests.push_back({"gate-src:" + std::to_string(i), source_texts[i]});
        requests.push_back({"gate-var:" + std::to_string(i), variant_texts[i]});
    }
    const auto vectors = embed_with_cache(requests, backend, cache, batch_size);
    SemanticGateResult result;
    result.similarity.reserve(source_texts.size());
    result.flagged.reserve(source_texts.size());
    for (std::size_t i = 0; i < source_texts.size(); ++i) {
        const double sim = cosine_similarity(vectors[2 * i], vectors[2 * i + 1]);
        result.similarity.push_back(sim);
        result.flagged.push_back(sim < floor);
    }
    return result;
}

std::string post_text(const PostRecord& post, const std::string& fields) {
    if (fields == "title") {
        return post.title;
    }
    if (fields == "body") {
        return post.body;
    }
    if (is_blank(post.title)) {
        return post.body;
    }
    if (is_blank(post.body)) {
        return post.title;
    }
    return post.title + "\n" + post.body;
}

const std::vector<std::string>& PipelineRun::stage_names() {
    static const std::vector<std::string> names = {
        "ingest", "embed", "align", "stylize", "annotate", "score", "evaluate",
    };
    return names;
}

PipelineRun::PipelineRun(PipelineConfig config, std::filesystem::path out_dir)
    : config_(std::move(config)), out_dir_(std::move(out_dir)) {}

std::filesystem::path PipelineRun::checkpoint_path(const std::string& artifact) const {
    return out_dir_ / "checkpoints" / artifact;
}

Json PipelineRun::load_manifest() const {
    const auto path = out_dir_ / "manifest.json";
    if (!std::filesystem::exists(path)) {
        throw IncompleteRunError("no manifest at " + path.string() + "; run the pipeline first");
    }
    Json manifest = Json::parse(read_text_file(path), nullptr, false);
    if (manifest.is_discarded()) {
        throw ParseError(path.string() + " is not valid JSON");
    }
    return manifest;
}

Json PipelineRun::input_hashes_for(const std::string& stage) const {
    auto outputs_of = [&](const std::string& name) -> Json {
        for (const Json& marker : markers_) {
            if (marker.at("stage") == name) {
                return marker.at("outputs");
            }
        }
        throw IncompleteRunError("stage '" + name + "' has not run before its dependant");
    };
    auto file_hash_or_missing = [](const std::string& path) -> std::string {
        if (path.empty() || !std::filesystem::exists(path)) {
            return "missing";
        }
        return file_content_hash(path);
    };

    Json inputs;
    inputs["config"] = config_.config_hash();
    if (stage == "ingest") {
        inputs["headlines_file"] = file_hash_or_missing(config_.corpus.headlines_path);
        inputs["posts_file"] = file_hash_or_missing(config_.corpus.posts_path);
    } else if (stage == "embed") {
        inputs["ingest"] = outputs_of("ingest");
    } else if (stage == "align") {
        inputs["embed"] = outputs_of("embed");
    } else if (stage == "stylize") {
        inputs["align"] = outputs_of("align");
        inputs["headlines"] = outputs_of("ingest").at("headlines.jsonl");
        inputs["templates_file"] = file_hash_or_missing(config_.templates_path);
    } else if (stage == "annotate") {
        inputs["stylize"] = outputs_of("stylize");
        inputs["posts"] = outputs_of("ingest").at("posts.jsonl");
        inputs["pairs"] = outputs_of("align").at("pairs.jsonl");
        inputs["lexicon_file"] = file_hash_or_missing(config_.lexicon_path);
        if (config_.emotion.kind == "keyword") {
            inputs["keywords_file"] = file_hash_or_missing(config_.emotion.keywords_path);
        } else if (config_.emotion.kind == "file") {
            inputs["scores_file"] = file_hash_or_missing(config_.emotion.path);
        }
    } else if (stage == "score") {
        inputs["annotate"] = outputs_of("annotate");
        inputs["pairs"] = outputs_of("align").at("pairs.jsonl");
        inputs["variants"] = outputs_of("stylize").at("variants.jsonl");
        inputs["lexicon_file"] = file_hash_or_missing(config_.lexicon_path);
    } else if (stage == "evaluate") {
        inputs["score"] = outputs_of("score");
        inputs["alignment"] = outputs_of("align").at("alignment.json");
        if (config_.corpus.predictions_path) {
            inputs["predictions_file"] = file_hash_or_missing(*config_.corpus.predictions_path);
        }
    }
    return inputs;
}

std::optional<Json> PipelineRun::valid_marker(const std::string& stage,
                                              const Json& inputs) const {
    const auto marker_path = checkpoint_path(stage + ".done.json");
    if (!std::filesystem::exists(marker_path)) {
        return std::nullopt;
    }
    Json marker = Json::parse(read_text_file(marker_path), nullptr, false);
    if (marker.is_discarded() || !marker.contains("inputs") || !marker.contains("outputs")) {
        return std::nullopt;
    }
    if (marker.at("inputs") != inputs) {
        return std::nullopt;
    }
    for (const auto& [artifact, hash] : marker.at("outputs").items()) {
        const auto path = checkpoint_path(artifact);
        if (!std::filesystem::exists(path) ||
            file_content_hash(path) != hash.get<std::string>()) {
            return std::nullopt;
        }
    }
    return marker;
}

PipelineRun::StageOutcome PipelineRun::finish_stage(const std::string& stage,
                                                    const Json& inputs,
                                                    const std::vector<std::string>& artifacts,
                                                    Json counts, Json calls) {
    Json marker;
    marker["stage"] = stage;
    marker["inputs"] = inputs;
    Json outputs;
    for (const std::string& artifact : artifacts) {
        outputs[artifact] = file_content_hash(checkpoint_path(artifact));
    }
    marker["outputs"] = outputs;
    marker["counts"] = std::move(counts);
    marker["calls"] = std::move(calls);
    write_text_file(checkpoint_path(stage + ".done.json"), marker.dump(2) + "\n");
    return StageOutcome{false, marker};
}

PipelineRun::StageOutcome PipelineRun::ensure_stage(const std::string& stage) {
    const Json inputs = input_hashes_for(stage);
    if (auto marker = valid_marker(stage, inputs)) {
        return StageOutcome{true, *marker};
    }
    if (stage == "ingest") return run_ingest();
    if (stage == "embed") return run_embed();
    if (stage == "align") return run_align();
    if (stage == "stylize") return run_stylize();
    if (stage == "annotate") return run_annotate();
    if (stage == "score") return run_score();
    if (stage == "evaluate") return run_evaluate();
    throw ConfigError("unknown stage '" + stage + "'");
}

PipelineRun::StageOutcome PipelineRun::run_ingest() {
    IngestStats headline_stats;
    auto headlines = ingest_headlines(config_.corpus.headlines_path,
                                      config_.corpus.headline_fields,
                                      config_.corpus.clickbait_only,
                                      config_.corpus.label_threshold, &headline_stats);
    IngestStats post_stats;
    auto posts = ingest_posts(config_.corpus.posts_path, config_.corpus.post_fields,
                              config_.corpus.post_limit, &post_stats);
    if (headlines.empty() || posts.empty()) {
        throw EmptyCorpusError("ingest produced an empty corpus");
    }

    std::vector<Json> headline_records;
    for (const HeadlineRecord& h : headlines) {
        Json j;
        j["id"] = h.id;
        j["text"] = h.text;
        j["label"] = h.label;
        j["clickbait"] = h.clickbait;
        headline_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("headlines.jsonl"), headline_records);

    std::vector<Json> post_records;
    for (const PostRecord& p : posts) {
        Json j;
        j["id"] = p.id;
        j["title"] = p.title;
        j["body"] = p.body;
        j["source"] = p.source;
        post_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("posts.jsonl"), post_records);

    Json counts;
    counts["headlines_read"] = headline_stats.read;
    counts["headlines_kept"] = headline_stats.kept;
    counts["posts_read"] = post_stats.read;
    counts["posts_kept"] = post_stats.kept;
    return finish_stage("ingest", input_hashes_for("ingest"),
                        {"headlines.jsonl", "posts.jsonl"}, std::move(counts),
                        Json::object());
}

PipelineRun::StageOutcome PipelineRun::run_embed() {
    const auto headlines = read_jsonl(checkpoint_path("headlines.jsonl"));
    const auto posts = read_jsonl(checkpoint_path("posts.jsonl"));

    std::vector<EmbedRequest> headline_requests;
    for (const Json& h : headlines) {
        headline_requests.push_back({h.at("id").get<std::string>(),
                                     h.at("text").get<std::string>()});
    }
    std::vector<EmbedRequest> post_requests;
    for (const Json& p : posts) {
        PostRecord rec{p.at("id").get<std::string>(), p.at("title").get<std::string>(),
                       p.at("body").get<std::string>(), p.at("source").get<std::string>()};
        post_requests.push_back({rec.id, post_text(rec, config_.post_text_fields)});
    }

    auto backend = make_embedding_backend(config_);
    CountingEmbeddingBackend counting(*backend);
    EmbeddingCache cache(out_dir_ / "cache" / "embeddings.jsonl");
    const RetryPolicy retry = retry_from_config(config_);

    auto headline_vectors =
        embed_with_cache(headline_requests, counting, cache, config_.batch_size, retry);
    auto post_vectors =
        embed_with_cache(post_requests, counting, cache, config_.batch_size, retry);

    auto dump_vectors = [&](const std::vector<EmbedRequest>& requests,
                            const std::vector<EmbeddingVector>& vectors,
                            const std::string& artifact) {
        std::vector<Json> records;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            Json j;
            j["id"] = requests[i].id;
            j["dim"] = vectors[i].dim();
            j["values"] = vectors[i].values;
            records.push_back(std::move(j));
        }
        write_jsonl(checkpoint_path(artifact), records);
    };
    dump_vectors(headline_requests, headline_vectors, "embeddings_headlines.jsonl");
    dump_vectors(post_requests, post_vectors, "embeddings_posts.jsonl");

    Json counts;
    counts["headline_vectors"] = headline_vectors.size();
    counts["post_vectors"] = post_vectors.size();
    counts["dim"] = headline_vectors.empty() ? 0 : headline_vectors.front().dim();
    Json calls;
    calls["embedding"] = counting.calls();
    return finish_stage("embed", input_hashes_for("embed"),
                        {"embeddings_headlines.jsonl", "embeddings_posts.jsonl"},
                        std::move(counts), std::move(calls));
}

PipelineRun::StageOutcome PipelineRun::run_align() {
    auto load_vectors = [&](const std::string& artifact, std::vector<std::string>& ids) {
        std::vector<EmbeddingVector> vectors;
        for (const Json& j : read_jsonl(checkpoint_path(artifact))) {
            ids.push_back(j.at("id").get<std::string>());
            vectors.push_back(EmbeddingVector{j.at("values").get<std::vector<double>>(), true});
        }
        return vectors;
    };
    std::vector<std::string> headline_ids;
    std::vector<std::string> post_ids;
    const auto headline_vectors = load_vectors("embeddings_headlines.jsonl", headline_ids);
    const auto post_vectors = load_vectors("embeddings_posts.jsonl", post_ids);

    auto [pairs, report] = one_to_one_align(headline_vectors, post_vectors);

    std::vector<AlignedPair> accepted;
    std::uint64_t dropped_below_floor = 0;
    for (const AlignedPair& pair : pairs) {
        if (pair.similarity >= config_.similarity_floor) {
            accepted.push_back(pair);
        } else {
            ++dropped_below_floor;
        }
    }
    const AlignmentReport accepted_report =
        report_for_pairs(accepted, headline_vectors.size());

    std::vector<Json> pair_records;
    for (const AlignedPair& pair : accepted) {
        Json j;
        j["pair_id"] = headline_ids[pair.headline];
        j["headline_id"] = headline_ids[pair.headline];
        j["post_id"] = post_ids[pair.post];
        j["similarity"] = pair.similarity;
        pair_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("pairs.jsonl"), pair_records);

    Json alignment;
    alignment["pair_count"] = accepted_report.pair_count;
    alignment["min_similarity"] = accepted_report.min_similarity;
    alignment["max_similarity"] = accepted_report.max_similarity;
    alignment["mean_similarity"] = accepted_report.mean_similarity;
    alignment["unmatched_headlines"] = report.unmatched_headlines;
    alignment["dropped_below_floor"] = dropped_below_floor;
    alignment["similarity_floor"] = config_.similarity_floor;
    write_text_file(checkpoint_path("alignment.json"), alignment.dump(2) + "\n");

    Json counts;
    counts["pairs"] = accepted_report.pair_count;
    counts["unmatched_headlines"] = report.unmatched_headlines;
    counts["dropped_below_floor"] = dropped_below_floor;
    return finish_stage("align", input_hashes_for("align"),
                        {"pairs.jsonl", "alignment.json"}, std::move(counts),
                        Json::object());
}

PipelineRun::StageOutcome PipelineRun::run_stylize() {
    const auto pair_records = read_jsonl(checkpoint_path("pairs.jsonl"));
    const auto headline_records = read_jsonl(checkpoint_path("headlines.jsonl"));
    std::map<std::string, std::string> headline_text;
    for (const Json& h : headline_records) {
        headline_text[h.at("id").get<std::string>()] = h.at("text").get<std::string>();
    }

    std::vector<PairText> pairs;
    for (const Json& p : pair_records) {
        const std::string pair_id = p.at("pair_id").get<std::string>();
        std::string text = config_.stylize_source == "seed" ? config_.seed_text
                                                            : headline_text.at(pair_id);
        pairs.push_back({pair_id, std::move(text)});
    }
    if (pairs.empty()) {
        throw EmptyCorpusError("no aligned pairs to stylize");
    }

    const PromptTemplateSet templates = PromptTemplateSet::load(config_.templates_path);
    auto backend = make_generation_backend(config_);
    CountingGenerationBackend counting(*backend);
    GenerationCache cache(out_dir_ / "cache" / "generations.jsonl");
    StylizeOptions options;
    options.retry = retry_from_config(config_);
    options.cache = &cache;

    const auto result = stylize_corpus(pairs, config_.styles, counting,
                                       config_.decode_params, templates, options,
                                       config_.concurrency);

    // Optional semantic-preservation gate: flag variants that drift too far
    // from their source text in embedding space.
    std::uint64_t flagged = 0;
    std::uint64_t gate_embedding_calls = 0;
    SemanticGateResult gate;
    if (config_.semantic_gate_floor) {
        std::map<std::string, const PairText*> by_id;
        for (const PairText& pair : pairs) {
            by_id[pair.pair_id] = &pair;
        }
        std::vector<std::string> sources;
        std::vector<std::string> variant_texts;
        for (const StyledVariant& v : result.variants) {
            sources.push_back(by_id.at(v.source_pair_id)->text);
            variant_texts.push_back(v.text);
        }
        auto embedder = make_embedding_backend(config_);
        CountingEmbeddingBackend counting_embedder(*embedder);
        EmbeddingCache embedding_cache(out_dir_ / "cache" / "embeddings.jsonl");
        gate = semantic_preservation_gate(sources, variant_texts, counting_embedder,
                                          embedding_cache, *config_.semantic_gate_floor,
                                          config_.batch_size);
        for (bool f : gate.flagged) {
            flagged += f ? 1 : 0;
        }
        gate_embedding_calls = counting_embedder.calls();
    }

    std::vector<Json> variant_records;
    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const StyledVariant& v = result.variants[i];
        Json j;
        j["variant_id"] = v.source_pair_id + "#" + std::string(to_string(v.style));
        j["pair_id"] = v.source_pair_id;
        j["style"] = std::string(to_string(v.style));
        j["text"] = v.text;
        j["backend_id"] = v.backend_id;
        j["model_id"] = v.model_id;
        j["temperature"] = v.decode_params.temperature;
        j["top_p"] = v.decode_params.top_p;
        j["max_new_tokens"] = v.decode_params.max_new_tokens;
        j["prompt_hash"] = v.prompt_hash;
        j["template_version"] = v.template_version;
        if (config_.semantic_gate_floor) {
            j["semantic_similarity"] = gate.similarity[i];
            j["semantic_flag"] = static_cast<bool>(gate.flagged[i]);
        }
        variant_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("variants.jsonl"), variant_records);

    std::vector<Json> failure_records;
    for (const StylizeFailure& f : result.failures) {
        Json j;
        j["pair_id"] = f.pair_id;
        j["style"] = f.style;
        j["error"] = f.error;
        failure_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("stylize_errors.jsonl"), failure_records);

    Json counts;
    counts["variants"] = result.variants.size();
    counts["failures"] = result.failures.size();
    if (config_.semantic_gate_floor) {
        counts["semantic_flagged"] = flagged;
    }
    Json calls;
    calls["generation"] = counting.calls();
    if (config_.semantic_gate_floor) {
        calls["embedding"] = gate_embedding_calls;
    }
    return finish_stage("stylize", input_hashes_for("stylize"),
                        {"variants.jsonl", "stylize_errors.jsonl"}, std::move(counts),
                        std::move(calls));
}

PipelineRun::StageOutcome PipelineRun::run_annotate() {
    const auto pair_records = read_jsonl(checkpoint_path("pairs.jsonl"));
    const auto post_records = read_jsonl(checkpoint_path("posts.jsonl"));
    const auto variant_records = read_jsonl(checkpoint_path("variants.jsonl"));

    std::map<std::string, PostRecord> posts;
    for (const Json& p : post_records) {
        PostRecord rec{p.at("id").get<std::string>(), p.at("title").get<std::string>(),
                       p.at("body").get<std::string>(), p.at("source").get<std::string>()};
        posts.emplace(rec.id, std::move(rec));
    }

    std::vector<AnnotateRequest> requests;
    for (const Json& pair : pair_records) {
        const std::string post_id = pair.at("post_id").get<std::string>();
        const PostRecord& post = posts.at(post_id);
        requests.push_back({"post:" + post_id, post_text(post, config_.post_text_fields)});
    }
    for (const Json& v : variant_records) {
        requests.push_back({"variant:" + v.at("variant_id").get<std::string>(),
                            v.at("text").get<std::string>()});
    }

    const VadLexicon lexicon = VadLexicon::load(config_.lexicon_path);
    auto backend = make_emotion_backend(config_, lexicon.taxonomy());
    if (auto* keyword = dynamic_cast<KeywordEmotionBackend*>(backend.get())) {
        keyword->validate_closure(lexicon);
    }
    CountingEmotionBackend counting(*backend);
    const auto result = annotate_batch(requests, counting, lexicon, config_.batch_size,
                                       retry_from_config(config_));

    std::vector<Json> annotation_records;
    for (const AnnotationRecord& rec : result.records) {
        Json j;
        j["text_id"] = rec.text_id;
        j["backend_id"] = rec.backend_id;
        j["taxonomy"] = rec.taxonomy;
        Json scores;
        for (const auto& [label, w] : rec.distribution.weights()) {
            scores[label] = w;
        }
        j["scores"] = scores;
        annotation_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("annotations.jsonl"), annotation_records);

    std::vector<Json> failure_records;
    for (const AnnotateFailure& f : result.failures) {
        Json j;
        j["text_id"] = f.text_id;
        j["error"] = f.error;
        failure_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("annotate_errors.jsonl"), failure_records);

    Json counts;
    counts["records"] = result.records.size();
    counts["failures"] = result.failures.size();
    Json calls;
    calls["emotion"] = counting.calls();
    return finish_stage("annotate", input_hashes_for("annotate"),
                        {"annotations.jsonl", "annotate_errors.jsonl"}, std::move(counts),
                        std::move(calls));
}

PipelineRun::StageOutcome PipelineRun::run_score() {
    const auto pair_records = read_jsonl(checkpoint_path("pairs.jsonl"));
    const auto variant_records = read_jsonl(checkpoint_path("variants.jsonl"));
    const auto annotation_records = read_jsonl(checkpoint_path("annotations.jsonl"));

    std::map<std::string, std::string> pair_to_post;
    for (const Json& pair : pair_records) {
        pair_to_post[pair.at("pair_id").get<std::string>()] =
            pair.at("post_id").get<std::string>();
    }
    std::map<std::string, EmotionDistribution> annotations;
    for (const Json& a : annotation_records) {
        annotations.emplace(a.at("text_id").get<std::string>(),
                            EmotionDistribution(
                                a.at("scores").get<std::map<std::string, double>>()));
    }

    const VadLexicon lexicon = VadLexicon::load(config_.lexicon_path);
    auto vad_json = [](const VadVector& v) {
        Json j;
        j["valence"] = v.valence();
        j["arousal"] = v.arousal();
        j["dominance"] = v.dominance();
        return j;
    };

    std::vector<Json> cg_records;
    std::uint64_t skipped = 0;
    for (const Json& v : variant_records) {
        const std::string variant_id = v.at("variant_id").get<std::string>();
        const std::string pair_id = v.at("pair_id").get<std::string>();
        const auto post_it = pair_to_post.find(pair_id);
        if (post_it == pair_to_post.end()) {
            ++skipped;
            continue;
        }
        const auto post_ann = annotations.find("post:" + post_it->second);
        const auto variant_ann = annotations.find("variant:" + variant_id);
        if (post_ann == annotations.end() || variant_ann == annotations.end()) {
            ++skipped;
            continue;
        }
        const VadVector post_vad = map_emotion_to_vad(post_ann->second, lexicon,
                                                      config_.aggregation,
                                                      config_.weight_floor);
        const VadVector comment_vad = map_emotion_to_vad(variant_ann->second, lexicon,
                                                         config_.aggregation,
                                                         config_.weight_floor);
        const CgRecord record = make_cg_record(curiosity_gap(post_vad),
                                               curiosity_gap(comment_vad),
                                               v.at("style").get<std::string>());
        Json j;
        j["pair_id"] = pair_id;
        j["variant_id"] = variant_id;
        j["post_id"] = post_it->second;
        j["style"] = record.style;
        j["cg_post"] = record.cg_post;
        j["cg_comment"] = record.cg_comment;
        j["delta_cg"] = record.delta_cg;
        j["framing"] = std::string(to_string(record.framing));
        // Euclidean VAD distance; kept under an explicit placeholder name
        // because no standard drift definition exists.
        j["vad_drift_placeholder"] = vad_drift(post_vad, comment_vad);
        j["post_vad"] = vad_json(post_vad);
        j["comment_vad"] = vad_json(comment_vad);
        cg_records.push_back(std::move(j));
    }
    write_jsonl(checkpoint_path("cg_records.jsonl"), cg_records);

    Json counts;
    counts["records"] = cg_records.size();
    counts["skipped"] = skipped;
    return finish_stage("score", input_hashes_for("score"), {"cg_records.jsonl"},
                        std::move(counts), Json::object());
}

PipelineRun::StageOutcome PipelineRun::run_evaluate() {
    const auto cg_records = read_jsonl(checkpoint_path("cg_records.jsonl"));
    Json alignment = Json::parse(read_text_file(checkpoint_path("alignment.json")));

    // Style distributions per framing group come from the scored variants.
    std::vector<std::string> highest_styles;
    std::vector<std::string> lowest_styles;
    std::map<std::string, double> delta_by_variant;
    for (const Json& rec : cg_records) {
        const double delta = rec.at("delta_cg").get<double>();
        const std::string style = rec.at("style").get<std::string>();
        delta_by_variant[rec.at("variant_id").get<std::string>()] = delta;
        (delta >= 0.0 ? highest_styles : lowest_styles).push_back(style);
    }
    auto shares_json = [](const std::vector<std::string>& styles) {
        Json arr = Json::array();
        if (styles.empty()) {
            return arr;
        }
        for (const StyleShare& share : style_distribution(styles)) {
            Json j;
            j["style"] = share.style;
            j["percent"] = share.percent;
            arr.push_back(std::move(j));
        }
        return arr;
    };

    Json evaluation;
    evaluation["alignment"] = alignment;
    Json distribution;
    distribution["highest"] = shares_json(highest_styles);
    distribution["lowest"] = shares_json(lowest_styles);
    evaluation["style_distribution"] = distribution;

    Json counts;
    counts["cg_records"] = cg_records.size();

    if (config_.corpus.predictions_path) {
        std::vector<PredictionRecord> predictions;
        for_each_jsonl(*config_.corpus.predictions_path,
                       [&](std::size_t line_no, const Json& j) {
            const std::string origin = *config_.corpus.predictions_path + ":" +
                                       std::to_string(line_no);
            for (const char* field :
                 {"text_id", "style", "true_label", "predicted_label", "classifier_id"}) {
                if (!j.contains(field)) {
                    throw MissingFieldError(origin + ": missing field '" + field + "'");
                }
            }
            auto parse_binary = [&](const std::string& value) {
                if (value == "clickbait") return true;
                if (value == "non-clickbait") return false;
                throw ParseError(origin + ": label '" + value +
                                 "' not in {clickbait, non-clickbait}");
            };
            PredictionRecord rec;
            rec.text_id = j.at("text_id").get<std::string>();
            rec.style = j.at("style").get<std::string>();
            if (rec.style != "original") {
                style_from_string(rec.style);  // closed-set check
            }
            rec.true_clickbait = parse_binary(j.at("true_label").get<std::string>());
            rec.predicted_clickbait = parse_binary(j.at("predicted_label").get<std::string>());
            rec.classifier_id = j.at("classifier_id").get<std::string>();
            predictions.push_back(std::move(rec));
            return true;
        });

        std::map<std::string, std::vector<PredictionRecord>> by_classifier;
        for (PredictionRecord& rec : predictions) {
            by_classifier[rec.classifier_id].push_back(std::move(rec));
        }

        Json classifiers;
        for (const auto& [classifier_id, records] : by_classifier) {
            Json entry;
            Json per_style = Json::array();
            for (const StyleMetrics& sm : evaluate_per_style(records)) {
                Json row = metric_row_json(sm.row);
                row["style"] = sm.style;
                per_style.push_back(std::move(row));
            }
            entry["per_style"] = per_style;

            std::vector<FramedPrediction> framed;
            std::uint64_t unjoined = 0;
            for (const PredictionRecord& rec : records) {
                if (rec.style == "original") {
                    continue;
                }
                auto it = delta_by_variant.find(rec.text_id);
                if (it == delta_by_variant.end()) {
                    ++unjoined;
                    continue;
                }
                framed.push_back({rec, it->second});
            }
            Json framing;
            if (!framed.empty()) {
                const FramingReport report = split_by_framing(framed);
                framing["highest"] =
                    report.highest ? metric_row_json(*report.highest) : Json(nullptr);
                framing["lowest"] =
                    report.lowest ? metric_row_json(*report.lowest) : Json(nullptr);
            } else {
                framing["highest"] = Json(nullptr);
                framing["lowest"] = Json(nullptr);
            }
            entry["framing"] = framing;
            entry["unjoined_styled_predictions"] = unjoined;
            classifiers[classifier_id] = std::move(entry);
        }
        evaluation["classifiers"] = classifiers;
        evaluation["available"] = true;
        counts["prediction_records"] = predictions.size();
        counts["classifiers"] = by_classifier.size();
    } else {
        evaluation["classifiers"] = Json::object();
        evaluation["available"] = false;
        counts["prediction_records"] = 0;
        counts["classifiers"] = 0;
    }

    write_text_file(checkpoint_path("evaluation.json"), evaluation.dump(2) + "\n");
    return finish_stage("evaluate", input_hashes_for("evaluate"), {"evaluation.json"},
                        std::move(counts), Json::object());
}

Json PipelineRun::run(const std::string& last_stage) {
    if (!last_stage.empty()) {
        const auto& names = stage_names();
        if (std::find(names.begin(), names.end(), last_stage) == names.end()) {
            throw ConfigError("unknown stage '" + last_stage + "'");
        }
    }
    std::filesystem::create_directories(out_dir_ / "checkpoints");
    std::filesystem::create_directories(out_dir_ / "cache");

    markers_.clear();
    stage_seconds_.clear();
    std::vector<bool> skipped_flags;
    for (const std::string& stage : stage_names()) {
        const auto start = std::chrono::steady_clock::now();
        StageOutcome outcome = ensure_stage(stage);
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        markers_.push_back(outcome.marker);
        stage_seconds_.push_back(elapsed);
        skipped_flags.push_back(outcome.skipped);
        if (stage == last_stage) {
            break;
        }
    }

    // Deterministic manifest: everything here is a pure function of config
    // and input data. Wall-clock timings go to run_log.json instead.
    Json manifest;
    manifest["schema"] = kManifestSchema;
    manifest["config_hash"] = config_.config_hash();
    manifest["config"] = Json::parse(config_.canonical_json());

    Json versions;
    const VadLexicon lexicon = VadLexicon::load(config_.lexicon_path);
    Json lexicon_json;
    lexicon_json["taxonomy"] = lexicon.taxonomy();
    lexicon_json["version"] = lexicon.version();
    lexicon_json["file_hash"] = file_content_hash(config_.lexicon_path);
    versions["lexicon"] = lexicon_json;
    const PromptTemplateSet templates = PromptTemplateSet::load(config_.templates_path);
    Json templates_json;
    templates_json["version"] = templates.version();
    templates_json["file_hash"] = file_content_hash(config_.templates_path);
    versions["templates"] = templates_json;
    {
        auto embedding = make_embedding_backend(config_);
        auto generation = make_generation_backend(config_);
        auto emotion = make_emotion_backend(config_, lexicon.taxonomy());
        Json backends;
        backends["embedding"] = Json{{"id", embedding->id()},
                                     {"model_id", embedding->model_id()}};
        backends["generation"] = Json{{"id", generation->id()},
                                      {"model_id", generation->model_id()}};
        backends["emotion"] = Json{{"id", emotion->id()},
                                   {"taxonomy", emotion->taxonomy()}};
        versions["backends"] = backends;
    }
    manifest["versions"] = versions;

    Json stages = Json::array();
    Json call_log;
    std::map<std::string, std::uint64_t> call_totals;
    for (const Json& marker : markers_) {
        Json stage_entry;
        stage_entry["name"] = marker.at("stage");
        stage_entry["inputs"] = marker.at("inputs");
        stage_entry["outputs"] = marker.at("outputs");
        stage_entry["counts"] = marker.at("counts");
        stage_entry["calls"] = marker.at("calls");
        stages.push_back(std::move(stage_entry));
        for (const auto& [backend, calls] : marker.at("calls").items()) {
            call_totals[backend] += calls.get<std::uint64_t>();
        }
    }
    manifest["stages"] = stages;
    for (const auto& [backend, total] : call_totals) {
        call_log[backend] = total;
    }
    manifest["call_log"] = call_log;
    manifest["offline"] = config_.offline;
    write_text_file(out_dir_ / "manifest.json", manifest.dump(2) + "\n");

    Json run_log;
    run_log["written_at"] = iso8601_now();
    Json timings = Json::array();
    for (std::size_t i = 0; i < markers_.size(); ++i) {
        Json t;
        t["name"] = markers_[i].at("stage");
        t["seconds"] = stage_seconds_[i];
        t["skipped"] = static_cast<bool>(skipped_flags[i]);
        timings.push_back(std::move(t));
    }
    run_log["stages"] = timings;
    write_text_file(out_dir_ / "run_log.json", run_log.dump(2) + "\n");

    return manifest;
}

AttackCandidateLists attack_candidates(const PipelineConfig& config,
                                       const std::filesystem::path& out_dir,
                                       const std::string& post_id, std::uint64_t k) {
    if (k == 0) {
        throw ConfigError("k must be positive");
    }
    PipelineRun run(config, out_dir);
    const auto pairs_path = run.checkpoint_path("pairs.jsonl");
    if (!std::filesystem::exists(pairs_path)) {
        throw IncompleteRunError("alignment checkpoint missing; run the pipeline first");
    }

    std::optional<std::string> pair_id;
    for (const Json& pair : read_jsonl(pairs_path)) {
        if (pair.at("post_id").get<std::string>() == post_id) {
            pair_id = pair.at("pair_id").get<std::string>();
            break;
        }
    }
    if (!pair_id) {
        throw UnknownPostError("post '" + post_id + "' has no aligned pair");
    }

    std::optional<EmbeddingVector> post_vector;
    for (const Json& j : read_jsonl(run.checkpoint_path("embeddings_posts.jsonl"))) {
        if (j.at("id").get<std::string>() == post_id) {
            post_vector = EmbeddingVector{j.at("values").get<std::vector<double>>(), true};
            break;
        }
    }
    if (!post_vector) {
        throw UnknownPostError("post '" + post_id + "' has no stored embedding");
    }

    std::map<std::string, const Json*> cg_by_variant;
    const auto cg_records = read_jsonl(run.checkpoint_path("cg_records.jsonl"));
    for (const Json& rec : cg_records) {
        cg_by_variant[rec.at("variant_id").get<std::string>()] = &rec;
    }

    struct VariantText {
        std::string variant_id;
        std::string style;
        std::string text;
        std::string backend_id;
        std::string model_id;
    };
    std::vector<VariantText> variants;
    for (const Json& v : read_jsonl(run.checkpoint_path("variants.jsonl"))) {
        if (v.at("pair_id").get<std::string>() == *pair_id) {
            variants.push_back({v.at("variant_id").get<std::string>(),
                                v.at("style").get<std::string>(),
                                v.at("text").get<std::string>(),
                                v.at("backend_id").get<std::string>(),
                                v.at("model_id").get<std::string>()});
        }
    }
    if (variants.empty()) {
        throw NoCandidatesError("no styled variants for post '" + post_id + "'");
    }

    auto backend = make_embedding_backend(config);
    EmbeddingCache cache(out_dir / "cache" / "embeddings.jsonl");
    std::vector<EmbedRequest> requests;
    for (const VariantText& v : variants) {
        requests.push_back({"variant:" + v.variant_id, v.text});
    }
    RetryPolicy retry;
    retry.max_attempts = config.max_retries;
    const auto vectors = embed_with_cache(requests, *backend, cache, config.batch_size, retry);

    std::vector<AttackCandidate> candidates;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        const auto cg_it = cg_by_variant.find(variants[i].variant_id);
        if (cg_it == cg_by_variant.end()) {
            continue;
        }
        const double similarity = cosine_similarity(vectors[i], *post_vector);
        if (similarity < config.similarity_floor) {
            continue;
        }
        AttackCandidate c;
        c.post_id = post_id;
        c.variant_id = variants[i].variant_id;
        c.style = variants[i].style;
        c.text = variants[i].text;
        c.backend_id = variants[i].backend_id;
        c.model_id = variants[i].model_id;
        c.similarity = similarity;
        c.cg_comment = cg_it->second->at("cg_comment").get<double>();
        c.delta_cg = cg_it->second->at("delta_cg").get<double>();
        c.framing = framing_from_string(cg_it->second->at("framing").get<std::string>());
        candidates.push_back(std::move(c));
    }
    if (candidates.empty()) {
        throw NoCandidatesError("no candidates at or above similarity floor " +
                                std::to_string(config.similarity_floor));
    }

    auto ranked = [&](bool descending) {
        std::vector<AttackCandidate> list = candidates;
        std::sort(list.begin(), list.end(),
                  [&](const AttackCandidate& a, const AttackCandidate& b) {
                      if (a.delta_cg != b.delta_cg) {
                          return descending ? a.delta_cg > b.delta_cg
                                            : a.delta_cg < b.delta_cg;
                      }
                      if (a.similarity != b.similarity) {
                          return a.similarity > b.similarity;
                      }
                      return a.variant_id < b.variant_id;
                  });
        if (list.size() > k) {
            list.resize(k);
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            list[i].rank = i + 1;
        }
        return list;
    };
    return AttackCandidateLists{ranked(true), ranked(false)};
}

std::filesystem::path emit_report(const std::filesystem::path& out_dir) {
    const auto manifest_path = out_dir / "manifest.json";
    if (!std::filesystem::exists(manifest_path)) {
        throw IncompleteRunError("no manifest at " + manifest_path.string());
    }
    const std::string manifest_text = read_text_file(manifest_path);
    Json manifest = Json::parse(manifest_text, nullptr, false);
    if (manifest.is_discarded()) {
        throw ParseError(manifest_path.string() + " is not valid JSON");
    }
    bool evaluated = false;
    for (const Json& stage : manifest.at("stages")) {
        if (stage.at("name") == "evaluate") {
            evaluated = true;
        }
    }
    if (!evaluated) {
        throw IncompleteRunError("evaluate stage has not completed; nothing to report");
    }

    const Json evaluation =
        Json::parse(read_text_file(out_dir / "checkpoints" / "evaluation.json"));
    const auto report_dir = out_dir / "report";
    std::filesystem::create_directories(report_dir);

    // Per-style metric table, one row per (classifier, style).
    {
        std::string tsv =
            "classifier\tstyle\taccuracy\tprecision\trecall\tf1\tmisclassification\t"
            "support\tdegenerate_precision\n";
        for (const auto& [classifier_id, entry] : evaluation.at("classifiers").items()) {
            for (const Json& row : entry.at("per_style")) {
                tsv += classifier_id;
                tsv += '\t';
                tsv += row.at("style").get<std::string>();
                tsv += '\t';
                tsv += format_fixed(row.at("accuracy").get<double>(), 4);
                tsv += '\t';
                tsv += format_fixed(row.at("precision").get<double>(), 4);
                tsv += '\t';
                tsv += format_fixed(row.at("recall").get<double>(), 4);
                tsv += '\t';
                tsv += format_fixed(row.at("f1").get<double>(), 4);
                tsv += '\t';
                tsv += format_fixed(row.at("misclassification").get<double>(), 4);
                tsv += '\t';
                tsv += std::to_string(row.at("support").get<std::uint64_t>());
                tsv += '\t';
                tsv += row.at("degenerate_precision").get<bool>() ? "true" : "false";
                tsv += '\n';
            }
        }
        write_text_file(report_dir / "per_style_metrics.tsv", tsv);
    }

    // One framing table per classifier: Lowest row, then Highest.
    for (const auto& [classifier_id, entry] : evaluation.at("classifiers").items()) {
        std::string tsv =
            "group\taccuracy\tprecision\trecall\tf1\tsupport\tdegenerate_precision\n";
        const Json& framing = entry.at("framing");
        auto emit_row = [&](const char* group, const Json& row) {
            if (row.is_null()) {
                return;
            }
            tsv += group;
            tsv += '\t';
            tsv += format_fixed(row.at("accuracy").get<double>(), 4);
            tsv += '\t';
            tsv += format_fixed(row.at("precision").get<double>(), 4);
            tsv += '\t';
            tsv += format_fixed(row.at("recall").get<double>(), 4);
            tsv += '\t';
            tsv += format_fixed(row.at("f1").get<double>(), 4);
            tsv += '\t';
            tsv += std::to_string(row.at("support").get<std::uint64_t>());
            tsv += '\t';
            tsv += row.at("degenerate_precision").get<bool>() ? "true" : "false";
            tsv += '\n';
        };
        emit_row("Lowest", framing.at("lowest"));
        emit_row("Highest", framing.at("highest"));
        write_text_file(report_dir / ("framing_" + sanitize_for_filename(classifier_id) +
                                      ".tsv"),
                        tsv);
    }

    // Style-distribution data for both framing groups.
    {
        std::string tsv = "group\tstyle\tpercent\n";
        for (const char* group : {"highest", "lowest"}) {
            for (const Json& share : evaluation.at("style_distribution").at(group)) {
                tsv += group;
                tsv += '\t';
                tsv += share.at("style").get<std::string>();
                tsv += '\t';
                tsv += format_fixed(share.at("percent").get<double>(), 1);
                tsv += '\n';
            }
        }
        write_text_file(report_dir / "style_distribution.tsv", tsv);
    }

    // Alignment similarity range, 4-decimal formatting.
    {
        const Json& alignment = evaluation.at("alignment");
        std::string text = "similarity range: " +
                           format_fixed(alignment.at("min_similarity").get<double>(), 4) +
                           " to " +
                           format_fixed(alignment.at("max_similarity").get<double>(), 4) +
                           "\n";
        text += "pair count: " +
                std::to_string(alignment.at("pair_count").get<std::uint64_t>()) + "\n";
        text += "mean similarity: " +
                format_fixed(alignment.at("mean_similarity").get<double>(), 4) + "\n";
        write_text_file(report_dir / "alignment_range.txt", text);
    }

    write_text_file(report_dir / "manifest.json", manifest_text);
    return report_dir;
}

}  // namespace emoclick
