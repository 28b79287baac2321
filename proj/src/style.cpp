#include "emoclick/style.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <sstream>
#include <thread>

#include "emoclick/errors.hpp"
#include "emoclick/hashing.hpp"
#include "emoclick/jsonl.hpp"

namespace emoclick {

namespace {

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string replace_once(std::string text, std::string_view placeholder,
                         std::string_view value) {
    const auto pos = text.find(placeholder);
    if (pos == std::string::npos) {
        throw TemplateMissingError("scaffold lacks placeholder " + std::string(placeholder));
    }
    text.replace(pos, placeholder.size(), value);
    return text;
}

}  // namespace

std::string_view to_string(StyleLabel style) {
    switch (style) {
        case StyleLabel::Clickbait: return "clickbait";
        case StyleLabel::Neutral: return "neutral";
        case StyleLabel::Formal: return "formal";
        case StyleLabel::Casual: return "casual";
        case StyleLabel::Inspirational: return "inspirational";
        case StyleLabel::Humor: return "humor";
    }
    return "clickbait";
}

StyleLabel style_from_string(std::string_view name) {
    for (StyleLabel style : kAllStyles) {
        if (to_string(style) == name) {
            return style;
        }
    }
    throw UnknownStyleError("unknown style label: " + std::string(name));
}

std::string DecodeParams::fingerprint() const {
    std::ostringstream out;
    out.precision(17);
    out << "t=" << temperature << ";p=" << top_p << ";n=" << max_new_tokens;
    return out.str();
}

PromptTemplateSet::PromptTemplateSet(std::string version, std::string scaffold,
                                     std::map<std::string, std::string> style_instructions)
    : version_(std::move(version)),
      scaffold_(std::move(scaffold)),
      style_instructions_(std::move(style_instructions)) {
    if (version_.empty()) {
        throw ParseError("template set requires a version");
    }
    if (scaffold_.find("{{style_instruction}}") == std::string::npos ||
        scaffold_.find("{{source_text}}") == std::string::npos) {
        throw ParseError("template scaffold must contain {{style_instruction}} and {{source_text}}");
    }
}

PromptTemplateSet PromptTemplateSet::load(const std::filesystem::path& path) {
    Json doc = Json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError("template set " + path.string() + " is not valid JSON");
    }
    for (const char* field : {"version", "scaffold", "styles"}) {
        if (!doc.contains(field)) {
            throw ParseError("template set " + path.string() + " missing field '" +
                             field + "'");
        }
    }
    std::map<std::string, std::string> instructions;
    for (const auto& [style, text] : doc.at("styles").items()) {
        instructions[style] = text.get<std::string>();
    }
    return PromptTemplateSet(doc.at("version").get<std::string>(),
                             doc.at("scaffold").get<std::string>(),
                             std::move(instructions));
}

std::string PromptTemplateSet::render(std::string_view source_text, StyleLabel style) const {
    if (source_text.empty() ||
        source_text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw EmptyTextError("cannot render a prompt for empty source text");
    }
    const auto it = style_instructions_.find(std::string(to_string(style)));
    if (it == style_instructions_.end()) {
        throw TemplateMissingError("no template instruction for style '" +
                                   std::string(to_string(style)) + "' in version " +
                                   version_);
    }
    std::string prompt = replace_once(scaffold_, "{{style_instruction}}", it->second);
    prompt = replace_once(std::move(prompt), "{{source_text}}", source_text);
    return prompt;
}

std::string EchoBackend::generate(const std::string& prompt, const DecodeParams&) {
    const auto open = prompt.find(PromptTemplateSet::kSourceFenceOpen);
    if (open == std::string::npos) {
        throw TransportError("echo backend: prompt has no fenced source span");
    }
    const auto begin = open + PromptTemplateSet::kSourceFenceOpen.size();
    const auto close = prompt.find(PromptTemplateSet::kSourceFenceClose, begin);
    if (close == std::string::npos) {
        throw TransportError("echo backend: unterminated source span");
    }
    return prompt.substr(begin, close - begin);
}

std::string normalize_generation(std::string_view raw) {
    auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) {
            return std::string_view{};
        }
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    std::string_view text = trim(raw);
    if (text.size() >= 2) {
        const char first = text.front();
        const char last = text.back();
        if ((first == '"' && last == '"') || (first == '\'' && last == '\'') ||
            (first == '`' && last == '`')) {
            text = trim(text.substr(1, text.size() - 2));
        }
    }
    return std::string(text);
}

GenerationCache::GenerationCache(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
        for (const Json& j : read_jsonl(path_)) {
            Entry e;
            e.key = j.at("key").get<std::string>();
            e.style = j.at("style").get<std::string>();
            e.raw_response = j.at("raw_response").get<std::string>();
            e.text = j.at("text").get<std::string>();
            e.backend_id = j.at("backend_id").get<std::string>();
            e.model_id = j.at("model_id").get<std::string>();
            e.params.temperature = j.at("temperature").get<double>();
            e.params.top_p = j.at("top_p").get<double>();
            e.params.max_new_tokens = j.at("max_new_tokens").get<int>();
            e.template_version = j.at("template_version").get<std::string>();
            e.prompt_hash = j.at("prompt_hash").get<std::string>();
            e.created_at = j.at("created_at").get<std::string>();
            entries_.emplace(e.key, std::move(e));
        }
    }
}

std::string GenerationCache::make_key(const std::string& template_version, StyleLabel style,
                                      const std::string& model_id, const DecodeParams& params,
                                      const std::string& source_text) {
    std::string material;
    material.append(template_version);
    material.push_back('\x1f');
    material.append(to_string(style));
    material.push_back('\x1f');
    material.append(model_id);
    material.push_back('\x1f');
    material.append(params.fingerprint());
    material.push_back('\x1f');
    material.append(source_text);
    return content_hash(material);
}

std::optional<GenerationCache::Entry> GenerationCache::find(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void GenerationCache::append(const Entry& entry) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (entries_.count(entry.key)) {
        return;
    }
    entries_.emplace(entry.key, entry);
    Json record;
    record["key"] = entry.key;
    record["style"] = entry.style;
    record["raw_response"] = entry.raw_response;
    record["text"] = entry.text;
    record["backend_id"] = entry.backend_id;
    record["model_id"] = entry.model_id;
    record["temperature"] = entry.params.temperature;
    record["top_p"] = entry.params.top_p;
    record["max_new_tokens"] = entry.params.max_new_tokens;
    record["template_version"] = entry.template_version;
    record["prompt_hash"] = entry.prompt_hash;
    record["created_at"] = entry.created_at;
    append_jsonl_record(path_, record);
}

StyledVariant stylize(const std::string& source_text, StyleLabel style,
                      GenerationBackend& backend, const DecodeParams& params,
                      const PromptTemplateSet& templates, const StylizeOptions& options) {
    const std::string prompt = templates.render(source_text, style);
    if (prompt.size() > backend.context_chars()) {
        throw ContextOverflowError("prompt of " + std::to_string(prompt.size()) +
                                   " chars exceeds backend context of " +
                                   std::to_string(backend.context_chars()));
    }

    StyledVariant variant;
    variant.style = style;
    variant.backend_id = backend.id();
    variant.model_id = backend.model_id();
    variant.decode_params = params;
    variant.prompt_hash = content_hash(prompt);
    variant.template_version = templates.version();

    const std::string key = GenerationCache::make_key(templates.version(), style,
                                                      backend.model_id(), params,
                                                      source_text);
    if (options.cache) {
        if (auto hit = options.cache->find(key)) {
            variant.text = hit->text;
            variant.backend_id = hit->backend_id;
            variant.created_at = hit->created_at;
            return variant;
        }
    }

    const std::string raw = with_retries(options.retry, [&] {
        return backend.generate(prompt, params);
    });
    const std::string text = normalize_generation(raw);
    if (text.empty()) {
        throw EmptyGenerationError("backend returned a blank generation for style '" +
                                   std::string(to_string(style)) + "'");
    }
    variant.text = text;
    variant.created_at = iso8601_now();

    if (options.cache) {
        GenerationCache::Entry entry;
        entry.key = key;
        entry.style = std::string(to_string(style));
        entry.raw_response = raw;
        entry.text = text;
        entry.backend_id = variant.backend_id;
        entry.model_id = variant.model_id;
        entry.params = params;
        entry.template_version = variant.template_version;
        entry.prompt_hash = variant.prompt_hash;
        entry.created_at = variant.created_at;
        options.cache->append(entry);
    }
    return variant;
}

StylizeCorpusResult stylize_corpus(std::span<const PairText> pairs,
                                   std::span<const StyleLabel> styles,
                                   GenerationBackend& backend, const DecodeParams& params,
                                   const PromptTemplateSet& templates,
                                   const StylizeOptions& options, std::size_t concurrency) {
    if (pairs.empty() || styles.empty()) {
        throw EmptyCorpusError("stylize_corpus requires pairs and styles");
    }
    struct Task {
        const PairText* pair;
        StyleLabel style;
    };
    std::vector<Task> tasks;
    tasks.reserve(pairs.size() * styles.size());
    for (const PairText& pair : pairs) {
        for (StyleLabel style : styles) {
            tasks.push_back({&pair, style});
        }
    }

    std::vector<std::optional<StyledVariant>> slots(tasks.size());
    std::vector<std::optional<StylizeFailure>> failures(tasks.size());

    auto run_task = [&](std::size_t i) {
        const Task& task = tasks[i];
        try {
            StyledVariant v = stylize(task.pair->text, task.style, backend, params,
                                      templates, options);
            v.source_pair_id = task.pair->pair_id;
            slots[i] = std::move(v);
        } catch (const std::exception& e) {
            failures[i] = StylizeFailure{task.pair->pair_id,
                                         std::string(to_string(task.style)), e.what()};
        }
    };

    if (concurrency <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            run_task(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
                run_task(i);
            }
        };
        std::vector<std::thread> threads;
        const std::size_t n = std::min(concurrency, tasks.size());
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t) {
            threads.emplace_back(worker);
        }
        for (std::thread& t : threads) {
            t.join();
        }
    }

    StylizeCorpusResult result;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (slots[i]) {
            result.variants.push_back(std::move(*slots[i]));
        } else if (failures[i]) {
            result.failures.push_back(std::move(*failures[i]));
        }
    }
    if (result.variants.empty()) {
        throw BackendUnavailableError("every stylization attempt failed (" +
                                      std::to_string(result.failures.size()) +
                                      " failures); first: " +
                                      result.failures.front().error);
    }
    return result;
}

}  // namespace emoclick
