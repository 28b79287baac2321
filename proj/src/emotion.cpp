#include "emoclick/emotion.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "emoclick/errors.hpp"
#include "emoclick/jsonl.hpp"

namespace emoclick {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '\'') {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(current);
    }
    return tokens;
}

void validate_against_lexicon(const EmotionDistribution& dist, const VadLexicon& lexicon) {
    for (const auto& [label, w] : dist.weights()) {
        if (!lexicon.contains(label)) {
            throw TaxonomyMismatchError("backend emitted label '" + label +
                                        "' outside taxonomy " + lexicon.taxonomy());
        }
    }
}

AnnotationRecord make_record(const AnnotateRequest& request, EmotionBackend& backend,
                             const VadLexicon& lexicon, EmotionDistribution dist) {
    validate_against_lexicon(dist, lexicon);
    return AnnotationRecord{request.id, std::move(dist), backend.id(), backend.taxonomy()};
}

}  // namespace

AnnotationRecord annotate(const AnnotateRequest& request, EmotionBackend& backend,
                          const VadLexicon& lexicon, const RetryPolicy& retry) {
    if (request.text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw EmptyTextError("empty text for record '" + request.id + "'");
    }
    if (backend.taxonomy() != lexicon.taxonomy()) {
        throw TaxonomyMismatchError("backend taxonomy '" + backend.taxonomy() +
                                    "' does not match configured taxonomy '" +
                                    lexicon.taxonomy() + "'");
    }
    auto dists = with_retries(retry, [&] {
        return backend.classify({request});
    });
    if (dists.size() != 1) {
        throw BackendUnavailableError("backend returned " + std::to_string(dists.size()) +
                                      " distributions for one text");
    }
    return make_record(request, backend, lexicon, std::move(dists.front()));
}

AnnotateBatchResult annotate_batch(const std::vector<AnnotateRequest>& requests,
                                   EmotionBackend& backend, const VadLexicon& lexicon,
                                   std::size_t batch_size, const RetryPolicy& retry) {
    if (batch_size == 0) {
        throw ConfigError("batch_size must be positive");
    }
    if (backend.taxonomy() != lexicon.taxonomy()) {
        throw TaxonomyMismatchError("backend taxonomy '" + backend.taxonomy() +
                                    "' does not match configured taxonomy '" +
                                    lexicon.taxonomy() + "'");
    }
    AnnotateBatchResult result;
    std::vector<AnnotateRequest> usable;
    usable.reserve(requests.size());
    for (const AnnotateRequest& request : requests) {
        if (request.text.find_first_not_of(" \t\r\n") == std::string::npos) {
            result.failures.push_back({request.id, "empty text"});
        } else {
            usable.push_back(request);
        }
    }
    for (std::size_t start = 0; start < usable.size(); start += batch_size) {
        const std::size_t end = std::min(start + batch_size, usable.size());
        std::vector<AnnotateRequest> batch(usable.begin() + static_cast<long>(start),
                                           usable.begin() + static_cast<long>(end));
        bool batch_ok = true;
        try {
            auto dists = with_retries(retry, [&] { return backend.classify(batch); });
            if (dists.size() != batch.size()) {
                throw BackendUnavailableError("short batch from backend");
            }
            std::vector<AnnotationRecord> staged;
            staged.reserve(batch.size());
            for (std::size_t i = 0; i < batch.size(); ++i) {
                staged.push_back(make_record(batch[i], backend, lexicon, std::move(dists[i])));
            }
            for (AnnotationRecord& record : staged) {
                result.records.push_back(std::move(record));
            }
        } catch (const std::exception&) {
            batch_ok = false;
        }
        if (!batch_ok) {
            // Replay one at a time to isolate the failing records.
            for (const AnnotateRequest& request : batch) {
                try {
                    result.records.push_back(annotate(request, backend, lexicon, retry));
                } catch (const std::exception& e) {
                    result.failures.push_back({request.id, e.what()});
                }
            }
        }
    }
    return result;
}

KeywordEmotionBackend::KeywordEmotionBackend(std::map<std::string, std::string> token_to_emotion,
                                             std::string taxonomy_name,
                                             std::string neutral_label)
    : token_to_emotion_(std::move(token_to_emotion)),
      taxonomy_(std::move(taxonomy_name)),
      neutral_label_(std::move(neutral_label)) {}

KeywordEmotionBackend KeywordEmotionBackend::load(const std::filesystem::path& path,
                                                  std::string taxonomy_name,
                                                  std::string neutral_label) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open keyword lexicon " + path.string());
    }
    std::map<std::string, std::string> mapping;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' ||
            line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected `token<TAB>emotion`");
        }
        std::string token = line.substr(0, tab);
        std::string emotion = line.substr(tab + 1);
        while (!emotion.empty() && (emotion.back() == '\r' || emotion.back() == ' ')) {
            emotion.pop_back();
        }
        mapping[token] = emotion;
    }
    return KeywordEmotionBackend(std::move(mapping), std::move(taxonomy_name),
                                 std::move(neutral_label));
}

void KeywordEmotionBackend::validate_closure(const VadLexicon& lexicon) const {
    if (!lexicon.contains(neutral_label_)) {
        throw TaxonomyMismatchError("fallback neutral label '" + neutral_label_ +
                                    "' is not in taxonomy " + lexicon.taxonomy());
    }
    for (const auto& [token, emotion] : token_to_emotion_) {
        if (!lexicon.contains(emotion)) {
            throw TaxonomyMismatchError("keyword lexicon maps '" + token +
                                        "' to unknown emotion '" + emotion + "'");
        }
    }
}

std::vector<EmotionDistribution> KeywordEmotionBackend::classify(
    const std::vector<AnnotateRequest>& batch) {
    std::vector<EmotionDistribution> out;
    out.reserve(batch.size());
    for (const AnnotateRequest& request : batch) {
        std::set<std::string> matched;
        for (const std::string& token : tokenize(request.text)) {
            auto it = token_to_emotion_.find(token);
            if (it != token_to_emotion_.end()) {
                matched.insert(it->second);
            }
        }
        std::map<std::string, double> weights;
        if (matched.empty()) {
            weights[neutral_label_] = 1.0;
        } else {
            const double w = 1.0 / static_cast<double>(matched.size());
            for (const std::string& emotion : matched) {
                weights[emotion] = w;
            }
        }
        out.emplace_back(std::move(weights));
    }
    return out;
}

FileEmotionBackend::FileEmotionBackend(std::string path, std::string taxonomy,
                                       std::map<std::string, std::map<std::string, double>> scores)
    : path_(std::move(path)), taxonomy_(std::move(taxonomy)), scores_(std::move(scores)) {}

FileEmotionBackend FileEmotionBackend::load(const std::filesystem::path& path,
                                            std::string default_taxonomy) {
    std::map<std::string, std::map<std::string, double>> scores;
    std::string taxonomy = std::move(default_taxonomy);
    for (const Json& j : read_jsonl(path)) {
        if (j.contains("taxonomy") && !j.contains("id")) {
            taxonomy = j.at("taxonomy").get<std::string>();
            continue;
        }
        if (!j.contains("id") || !j.contains("scores")) {
            throw ParseError(path.string() + ": score record needs id and scores");
        }
        scores[j.at("id").get<std::string>()] =
            j.at("scores").get<std::map<std::string, double>>();
    }
    return FileEmotionBackend(path.string(), std::move(taxonomy), std::move(scores));
}

std::vector<EmotionDistribution> FileEmotionBackend::classify(
    const std::vector<AnnotateRequest>& batch) {
    std::vector<EmotionDistribution> out;
    out.reserve(batch.size());
    for (const AnnotateRequest& request : batch) {
        auto it = scores_.find(request.id);
        if (it == scores_.end()) {
            throw UnknownLabelError("no precomputed emotion scores for record '" +
                                    request.id + "'");
        }
        out.emplace_back(it->second);
    }
    return out;
}

}  // namespace emoclick
