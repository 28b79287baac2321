#include "emoclick/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "emoclick/errors.hpp"
#include "emoclick/hashing.hpp"
#include "emoclick/jsonl.hpp"

namespace emoclick {

namespace {

bool is_blank(const std::string& text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
}

double l2_norm(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
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

}  // namespace

EmbeddingVector EmbeddingVector::normalized_from(std::vector<double> values) {
    const double norm = l2_norm(values);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ZeroVectorError("cannot normalize a zero or non-finite vector");
    }
    for (double& v : values) {
        v /= norm;
    }
    return EmbeddingVector{std::move(values), true};
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw DimMismatchError("cosine of dims " + std::to_string(a.dim()) + " and " +
                               std::to_string(b.dim()));
    }
    if (a.dim() == 0) {
        throw ZeroVectorError("cosine of empty vectors");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
    }
    if (!a.normalized || !b.normalized) {
        const double na = l2_norm(a.values);
        const double nb = l2_norm(b.values);
        if (!(na > 0.0) || !(nb > 0.0)) {
            throw ZeroVectorError("cosine of a zero vector");
        }
        dot /= na * nb;
    }
    return std::clamp(dot, -1.0, 1.0);
}

std::vector<EmbeddingVector> embed_batch(const std::vector<EmbedRequest>& requests,
                                         EmbeddingBackend& backend,
                                         std::size_t batch_size,
                                         const RetryPolicy& retry) {
    if (batch_size == 0) {
        throw ConfigError("batch_size must be positive");
    }
    for (const EmbedRequest& r : requests) {
        if (r.text.empty() || is_blank(r.text)) {
            throw EmptyTextError("empty text for record '" + r.id + "'");
        }
    }
    std::vector<EmbeddingVector> out;
    out.reserve(requests.size());
    std::size_t dim = 0;
    for (std::size_t start = 0; start < requests.size(); start += batch_size) {
        const std::size_t end = std::min(start + batch_size, requests.size());
        std::vector<EmbedRequest> batch(requests.begin() + static_cast<long>(start),
                                        requests.begin() + static_cast<long>(end));
        auto raw = with_retries(retry, [&] { return backend.embed(batch); });
        if (raw.size() != batch.size()) {
            throw DimMismatchError("backend returned " + std::to_string(raw.size()) +
                                   " vectors for a batch of " +
                                   std::to_string(batch.size()));
        }
        for (auto& values : raw) {
            if (dim == 0) {
                dim = values.size();
                if (dim == 0) {
                    throw DimMismatchError("backend returned an empty vector");
                }
            } else if (values.size() != dim) {
                throw DimMismatchError("inconsistent embedding dims: " +
                                       std::to_string(values.size()) + " vs " +
                                       std::to_string(dim));
            }
            out.push_back(EmbeddingVector::normalized_from(std::move(values)));
        }
    }
    return out;
}

HashEmbeddingBackend::HashEmbeddingBackend(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ == 0) {
        throw ConfigError("hash embedding dim must be positive");
    }
}

std::string HashEmbeddingBackend::model_id() const {
    return "hash-d" + std::to_string(dim_) + "-s" + std::to_string(seed_);
}

std::vector<std::vector<double>> HashEmbeddingBackend::embed(
    const std::vector<EmbedRequest>& batch) {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    for (const EmbedRequest& req : batch) {
        std::vector<double> values(dim_, 0.0);
        const auto tokens = tokenize(req.text);
        if (tokens.empty()) {
            throw EmptyTextError("no tokens in text for record '" + req.id + "'");
        }
        for (const std::string& token : tokens) {
            std::uint64_t stream = splitmix64(fnv1a64(token) ^ seed_);
            for (std::size_t i = 0; i < dim_; ++i) {
                stream = splitmix64(stream);
                // Positive coordinate in (0,1]; keeps pairwise similarities
                // in a moderate-to-high band like real sentence encoders.
                values[i] += static_cast<double>(stream >> 11) /
                             static_cast<double>(1ULL << 53);
            }
        }
        out.push_back(std::move(values));
    }
    return out;
}

FileEmbeddingBackend::FileEmbeddingBackend(std::string path, std::string model_id,
                                           std::map<std::string, std::vector<double>> vectors)
    : path_(std::move(path)), model_id_(std::move(model_id)), vectors_(std::move(vectors)) {}

FileEmbeddingBackend FileEmbeddingBackend::load(const std::filesystem::path& path,
                                                std::string model_id) {
    std::map<std::string, std::vector<double>> vectors;
    for (const Json& j : read_jsonl(path)) {
        if (!j.contains("id") || !j.contains("values")) {
            throw ParseError(path.string() + ": embedding record needs id and values");
        }
        vectors[j.at("id").get<std::string>()] = j.at("values").get<std::vector<double>>();
    }
    return FileEmbeddingBackend(path.string(), std::move(model_id), std::move(vectors));
}

std::vector<std::vector<double>> FileEmbeddingBackend::embed(
    const std::vector<EmbedRequest>& batch) {
    std::vector<std::vector<double>> out;
    out.reserve(batch.size());
    for (const EmbedRequest& req : batch) {
        auto it = vectors_.find(req.id);
        if (it == vectors_.end()) {
            throw UnknownLabelError("no precomputed embedding for record '" + req.id + "'");
        }
        out.push_back(it->second);
    }
    return out;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) {
        for (const Json& j : read_jsonl(path_)) {
            const std::string key = j.at("key").get<std::string>();
            if (!entries_.count(key)) {
                EmbeddingVector vec{j.at("values").get<std::vector<double>>(), true};
                entries_.emplace(key, std::move(vec));
            }
        }
    }
}

std::string EmbeddingCache::make_key(const std::string& backend_id,
                                     const std::string& model_id,
                                     const std::string& text) {
    return content_hash(backend_id + "\x1f" + model_id + "\x1f" + content_hash(text));
}

std::optional<EmbeddingVector> EmbeddingCache::find(const std::string& backend_id,
                                                    const std::string& model_id,
                                                    const std::string& text) const {
    auto it = entries_.find(make_key(backend_id, model_id, text));
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void EmbeddingCache::put(const std::string& backend_id, const std::string& model_id,
                         const std::string& text, const EmbeddingVector& vec) {
    const std::string key = make_key(backend_id, model_id, text);
    if (entries_.count(key)) {
        return;
    }
    entries_.emplace(key, vec);
    Json record;
    record["key"] = key;
    record["backend_id"] = backend_id;
    record["model_id"] = model_id;
    record["dim"] = vec.dim();
    record["values"] = vec.values;
    append_jsonl_record(path_, record);
}

std::vector<EmbeddingVector> embed_with_cache(const std::vector<EmbedRequest>& requests,
                                              EmbeddingBackend& backend,
                                              EmbeddingCache& cache,
                                              std::size_t batch_size,
                                              const RetryPolicy& retry) {
    std::vector<std::optional<EmbeddingVector>> slots(requests.size());
    std::vector<EmbedRequest> misses;
    std::vector<std::size_t> miss_index;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (auto hit = cache.find(backend.id(), backend.model_id(), requests[i].text)) {
            slots[i] = std::move(*hit);
        } else {
            misses.push_back(requests[i]);
            miss_index.push_back(i);
        }
    }
    if (!misses.empty()) {
        auto fresh = embed_batch(misses, backend, batch_size, retry);
        for (std::size_t k = 0; k < fresh.size(); ++k) {
            cache.put(backend.id(), backend.model_id(), misses[k].text, fresh[k]);
            slots[miss_index[k]] = std::move(fresh[k]);
        }
    }
    std::vector<EmbeddingVector> out;
    out.reserve(slots.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

}  // namespace emoclick
