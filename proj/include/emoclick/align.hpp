#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "emoclick/embedding.hpp"

namespace emoclick {

// Headline-to-post match. Indices are corpus ordinals; callers map them
// back to record ids. Similarity is the cosine of the two embeddings.
struct AlignedPair {
    std::size_t headline = 0;
    std::size_t post = 0;
    double similarity = 0.0;
};

struct AlignmentReport {
    std::size_t pair_count = 0;
    double min_similarity = 0.0;
    double max_similarity = 0.0;
    double mean_similarity = 0.0;
    std::size_t unmatched_headlines = 0;
};

// For each headline, the post with maximal cosine similarity; ties go to
// the smaller post index. Posts may repeat across pairs.
std::vector<AlignedPair> top1_align(std::span<const EmbeddingVector> headlines,
                                    std::span<const EmbeddingVector> posts);

// Same rules over a precomputed similarity matrix (rows = headlines).
std::vector<AlignedPair> top1_align_matrix(const std::vector<std::vector<double>>& sim);
std::pair<std::vector<AlignedPair>, AlignmentReport> one_to_one_align_matrix(
    const std::vector<std::vector<double>>& sim);

// Global greedy one-to-one assignment: all (headline, post) pairs sorted by
// similarity descending (ties: smaller headline index, then smaller post
// index); a pair is accepted iff both sides are still unassigned. Each side
// appears at most once; headlines go unmatched only when posts run out.
//
// Matrices larger than max_dense_entries are never materialized; a lazy
// best-candidate scheme produces the identical assignment.
std::pair<std::vector<AlignedPair>, AlignmentReport> one_to_one_align(
    std::span<const EmbeddingVector> headlines, std::span<const EmbeddingVector> posts,
    std::size_t max_dense_entries = 400'000'000);

AlignmentReport report_for_pairs(std::span<const AlignedPair> pairs,
                                 std::size_t headline_count);

}  // namespace emoclick
