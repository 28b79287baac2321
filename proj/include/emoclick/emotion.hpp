#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "emoclick/affect.hpp"
#include "emoclick/retry.hpp"

namespace emoclick {

struct AnnotationRecord {
    std::string text_id;
    EmotionDistribution distribution;
    std::string backend_id;
    std::string taxonomy;
};

struct AnnotateRequest {
    std::string id;
    std::string text;
};

// Returns the backend's per-label scores, unnormalized; normalization
// happens exactly once, inside map_emotion_to_vad.
class EmotionBackend {
public:
    virtual ~EmotionBackend() = default;
    virtual std::string id() const = 0;
    virtual std::string taxonomy() const = 0;
    virtual std::vector<EmotionDistribution> classify(
        const std::vector<AnnotateRequest>& batch) = 0;
};

// Annotates one text. Rejects empty text, backends whose taxonomy differs
// from the lexicon's, and distributions carrying labels outside the
// taxonomy, so every emitted record maps through the lexicon.
AnnotationRecord annotate(const AnnotateRequest& request, EmotionBackend& backend,
                          const VadLexicon& lexicon, const RetryPolicy& retry = {});

struct AnnotateFailure {
    std::string text_id;
    std::string error;
};

struct AnnotateBatchResult {
    std::vector<AnnotationRecord> records;
    std::vector<AnnotateFailure> failures;
};

// Order-preserving transport batching. A failing batch is replayed one
// item at a time so single bad records land in the failure ledger instead
// of aborting the corpus.
AnnotateBatchResult annotate_batch(const std::vector<AnnotateRequest>& requests,
                                   EmotionBackend& backend, const VadLexicon& lexicon,
                                   std::size_t batch_size, const RetryPolicy& retry = {});

// Deterministic offline backend: keyword-to-emotion lexicon overlap with
// uniform weights over the matched emotions, falling back to a point mass
// on the designated neutral label when nothing matches. Pure, no I/O after
// construction.
class KeywordEmotionBackend : public EmotionBackend {
public:
    // File format: newline-delimited `token<TAB>emotion-label` records,
    // `#` comment lines allowed.
    static KeywordEmotionBackend load(const std::filesystem::path& path,
                                      std::string taxonomy_name,
                                      std::string neutral_label = "neutral");
    KeywordEmotionBackend(std::map<std::string, std::string> token_to_emotion,
                          std::string taxonomy_name, std::string neutral_label);

    std::string id() const override { return "builtin:keyword-overlap"; }
    std::string taxonomy() const override { return taxonomy_; }
    std::vector<EmotionDistribution> classify(
        const std::vector<AnnotateRequest>& batch) override;

    // Fail-fast closure check: every emotion this backend can emit must be
    // a lexicon label, so no distribution can later hit UnknownLabel.
    void validate_closure(const VadLexicon& lexicon) const;

private:
    std::map<std::string, std::string> token_to_emotion_;
    std::string taxonomy_;
    std::string neutral_label_;
};

// Serves precomputed score tables keyed by text id from a JSONL file of
// {"id": ..., "scores": {label: score}} with a one-record header
// {"taxonomy": ...} allowed as the first line.
class FileEmotionBackend : public EmotionBackend {
public:
    static FileEmotionBackend load(const std::filesystem::path& path,
                                   std::string default_taxonomy);

    std::string id() const override { return "file:" + path_; }
    std::string taxonomy() const override { return taxonomy_; }
    std::vector<EmotionDistribution> classify(
        const std::vector<AnnotateRequest>& batch) override;

private:
    FileEmotionBackend(std::string path, std::string taxonomy,
                       std::map<std::string, std::map<std::string, double>> scores);

    std::string path_;
    std::string taxonomy_;
    std::map<std::string, std::map<std::string, double>> scores_;
};

}  // namespace emoclick
