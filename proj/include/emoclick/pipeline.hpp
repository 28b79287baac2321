#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emoclick/affect.hpp"
#include "emoclick/config.hpp"
#include "emoclick/jsonl.hpp"
#include "emoclick/metrics.hpp"
#include "emoclick/style.hpp"

namespace emoclick {

struct HeadlineRecord {
    std::string id;
    std::string text;
    double label = 0.0;
    bool clickbait = false;
};

struct PostRecord {
    std::string id;
    std::string title;
    std::string body;
    std::string source;
};

struct IngestStats {
    std::uint64_t read = 0;
    std::uint64_t kept = 0;
};

// Newline-delimited JSON ingestion with configurable field names. Labels
// may be graded scores or discrete classes; the threshold binarizes them.
std::vector<HeadlineRecord> ingest_headlines(const std::filesystem::path& path,
                                             const HeadlineFieldMapping& fields,
                                             bool clickbait_only, double label_threshold,
                                             IngestStats* stats = nullptr);

// Reads at most `limit` raw records, then applies the validity filter
// (at least one of title/body non-blank), in that order.
std::vector<PostRecord> ingest_posts(const std::filesystem::path& path,
                                     const PostFieldMapping& fields,
                                     std::optional<std::uint64_t> limit,
                                     IngestStats* stats = nullptr);

// Text used for embedding and emotion annotation of a post:
// title + "\n" + body by default, restrictable to either field.
std::string post_text(const PostRecord& post, const std::string& fields = "both");

class EmbeddingBackend;
class EmbeddingCache;

// Optional semantic-preservation gate: cosine of each (source, variant)
// pair under the configured embedding backend, with a below-floor flag.
// Flagged variants are kept, never dropped.
struct SemanticGateResult {
    std::vector<double> similarity;
    std::vector<bool> flagged;
};

SemanticGateResult semantic_preservation_gate(const std::vector<std::string>& source_texts,
                                              const std::vector<std::string>& variant_texts,
                                              EmbeddingBackend& backend,
                                              EmbeddingCache& cache, double floor,
                                              std::size_t batch_size);

// Checkpointed pipeline: ingest, embed, align, stylize, annotate, score,
// evaluate. Each stage writes newline-delimited artifacts plus a done
// marker carrying input/output content hashes; a stage reruns only when
// its marker, outputs, or recorded inputs no longer verify.
class PipelineRun {
public:
    PipelineRun(PipelineConfig config, std::filesystem::path out_dir);

    static const std::vector<std::string>& stage_names();

    // Runs stages in order up to and including `last_stage` (all when
    // empty) and rewrites manifest.json / run_log.json. Returns the
    // manifest.
    Json run(const std::string& last_stage = "");

    const std::filesystem::path& out_dir() const { return out_dir_; }
    std::filesystem::path checkpoint_path(const std::string& artifact) const;
    Json load_manifest() const;

private:
    struct StageOutcome {
        bool skipped = false;
        Json marker;
    };

    Json stage_marker_path_contents(const std::string& stage) const;
    StageOutcome ensure_stage(const std::string& stage);

    StageOutcome run_ingest();
    StageOutcome run_embed();
    StageOutcome run_align();
    StageOutcome run_stylize();
    StageOutcome run_annotate();
    StageOutcome run_score();
    StageOutcome run_evaluate();

    // Marker bookkeeping shared by all stages.
    Json input_hashes_for(const std::string& stage) const;
    StageOutcome finish_stage(const std::string& stage, const Json& inputs,
                              const std::vector<std::string>& artifacts, Json counts,
                              Json calls);
    std::optional<Json> valid_marker(const std::string& stage, const Json& inputs) const;

    PipelineConfig config_;
    std::filesystem::path out_dir_;
    std::vector<Json> markers_;
    std::vector<double> stage_seconds_;
};

struct AttackCandidate {
    std::string post_id;
    std::string variant_id;
    std::string style;
    std::string text;
    std::string backend_id;
    std::string model_id;
    double similarity = 0.0;
    double cg_comment = 0.0;
    double delta_cg = 0.0;
    Framing framing = Framing::Positive;
    std::uint64_t rank = 0;
};

struct AttackCandidateLists {
    std::vector<AttackCandidate> positive;  // delta_cg descending
    std::vector<AttackCandidate> negative;  // delta_cg ascending
};

// Ranks the styled variants aligned to one post by both extremes of the
// curiosity-gap shift, after filtering on similarity to the post.
AttackCandidateLists attack_candidates(const PipelineConfig& config,
                                       const std::filesystem::path& out_dir,
                                       const std::string& post_id, std::uint64_t k);

// Writes the deterministic report bundle (per-style table, framing tables,
// style-distribution data, alignment range, manifest copy) under
// out_dir/report. Requires a completed evaluate stage.
std::filesystem::path emit_report(const std::filesystem::path& out_dir);

}  // namespace emoclick
