#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoclick/retry.hpp"

namespace emoclick {

// Dense text embedding. Vectors are L2-normalized at ingestion so cosine
// similarity reduces to a dot product.
struct EmbeddingVector {
    std::vector<double> values;
    bool normalized = false;

    std::size_t dim() const { return values.size(); }

    // Normalizes in place; rejects zero vectors.
    static EmbeddingVector normalized_from(std::vector<double> values);
};

// dot(a,b)/(|a||b|), clamped to [-1,1] against rounding.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct EmbedRequest {
    std::string id;
    std::string text;
};

// One transport round trip per call. Returned vectors are raw (not yet
// normalized), one per request, in request order.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string model_id() const = 0;
    virtual std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) = 0;
};

// Validates, batches, retries transport failures, enforces one dimension
// per run, and normalizes. Order-preserving.
std::vector<EmbeddingVector> embed_batch(const std::vector<EmbedRequest>& requests,
                                         EmbeddingBackend& backend,
                                         std::size_t batch_size,
                                         const RetryPolicy& retry = {});

// Deterministic offline backend: seeded hash of the token multiset spread
// over a fixed-dim vector. Identical strings give identical vectors; all
// coordinates are positive so similarities land in a plausible band.
class HashEmbeddingBackend : public EmbeddingBackend {
public:
    explicit HashEmbeddingBackend(std::size_t dim = 64, std::uint64_t seed = 0);

    std::string id() const override { return "builtin:hash"; }
    std::string model_id() const override;
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override;

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

// Serves precomputed vectors keyed by record id from a JSONL file of
// {"id": ..., "values": [...]}.
class FileEmbeddingBackend : public EmbeddingBackend {
public:
    static FileEmbeddingBackend load(const std::filesystem::path& path,
                                     std::string model_id = "precomputed");

    std::string id() const override { return "file:" + path_; }
    std::string model_id() const override { return model_id_; }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override;

private:
    FileEmbeddingBackend(std::string path, std::string model_id,
                         std::map<std::string, std::vector<double>> vectors);

    std::string path_;
    std::string model_id_;
    std::map<std::string, std::vector<double>> vectors_;
};

// Append-only sidecar keyed by (backend id, model id, content hash of the
// text). Tolerates duplicate appends; the first record for a key wins.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path path);

    std::optional<EmbeddingVector> find(const std::string& backend_id,
                                        const std::string& model_id,
                                        const std::string& text) const;
    void put(const std::string& backend_id, const std::string& model_id,
             const std::string& text, const EmbeddingVector& vec);

    static std::string make_key(const std::string& backend_id,
                                const std::string& model_id,
                                const std::string& text);

private:
    std::filesystem::path path_;
    std::map<std::string, EmbeddingVector> entries_;
};

// Cache-aware wrapper used by the pipeline: only cache misses reach the
// backend, in batches of batch_size.
std::vector<EmbeddingVector> embed_with_cache(const std::vector<EmbedRequest>& requests,
                                              EmbeddingBackend& backend,
                                              EmbeddingCache& cache,
                                              std::size_t batch_size,
                                              const RetryPolicy& retry = {});

}  // namespace emoclick
