#include "emoclick/align.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>

#include "emoclick/errors.hpp"

namespace emoclick {

namespace {

using SimFn = std::function<double(std::size_t, std::size_t)>;

void check_corpora(std::span<const EmbeddingVector> headlines,
                   std::span<const EmbeddingVector> posts) {
    if (headlines.empty() || posts.empty()) {
        throw EmptyCorpusError("alignment requires non-empty corpora");
    }
    const std::size_t dim = headlines.front().dim();
    for (const EmbeddingVector& v : headlines) {
        if (v.dim() != dim) {
            throw DimMismatchError("inconsistent headline embedding dims");
        }
    }
    for (const EmbeddingVector& v : posts) {
        if (v.dim() != dim) {
            throw DimMismatchError("post embedding dim differs from headline dim");
        }
    }
}

void check_matrix(const std::vector<std::vector<double>>& sim) {
    if (sim.empty() || sim.front().empty()) {
        throw EmptyCorpusError("alignment requires a non-empty similarity matrix");
    }
    for (const auto& row : sim) {
        if (row.size() != sim.front().size()) {
            throw DimMismatchError("similarity matrix is ragged");
        }
    }
}

struct Candidate {
    double similarity;
    std::size_t headline;
    std::size_t post;
};

// Greedy acceptance order: similarity descending, then smaller headline
// index, then smaller post index.
bool greedy_before(const Candidate& a, const Candidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.headline != b.headline) return a.headline < b.headline;
    return a.post < b.post;
}

std::vector<AlignedPair> greedy_dense(std::size_t n, std::size_t m, const SimFn& sim) {
    std::vector<Candidate> all;
    all.reserve(n * m);
    for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t p = 0; p < m; ++p) {
            all.push_back({sim(h, p), h, p});
        }
    }
    std::sort(all.begin(), all.end(), greedy_before);

    std::vector<bool> headline_taken(n, false);
    std::vector<bool> post_taken(m, false);
    std::vector<AlignedPair> pairs;
    const std::size_t max_pairs = std::min(n, m);
    for (const Candidate& c : all) {
        if (pairs.size() == max_pairs) {
            break;
        }
        if (!headline_taken[c.headline] && !post_taken[c.post]) {
            headline_taken[c.headline] = true;
            post_taken[c.post] = true;
            pairs.push_back({c.headline, c.post, c.similarity});
        }
    }
    return pairs;
}

// Identical assignment without materializing the matrix: each free headline
// keeps one heap entry holding its best post as of push time. Posts only
// become unavailable over time, so a stored entry is an upper bound; a
// popped entry whose post is still free is the true global maximum.
std::vector<AlignedPair> greedy_lazy(std::size_t n, std::size_t m, const SimFn& sim) {
    std::vector<bool> post_taken(m, false);
    std::vector<bool> headline_taken(n, false);

    auto best_free_post = [&](std::size_t h) -> std::optional<Candidate> {
        std::optional<Candidate> best;
        for (std::size_t p = 0; p < m; ++p) {
            if (post_taken[p]) {
                continue;
            }
            const double s = sim(h, p);
            if (!best || s > best->similarity) {
                best = Candidate{s, h, p};
            }
        }
        return best;
    };

    auto later = [](const Candidate& a, const Candidate& b) { return greedy_before(b, a); };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(later)> heap(later);
    for (std::size_t h = 0; h < n; ++h) {
        heap.push(*best_free_post(h));
    }

    std::vector<AlignedPair> pairs;
    const std::size_t max_pairs = std::min(n, m);
    while (!heap.empty() && pairs.size() < max_pairs) {
        const Candidate c = heap.top();
        heap.pop();
        if (headline_taken[c.headline]) {
            continue;
        }
        if (!post_taken[c.post]) {
            headline_taken[c.headline] = true;
            post_taken[c.post] = true;
            pairs.push_back({c.headline, c.post, c.similarity});
        } else if (auto next = best_free_post(c.headline)) {
            heap.push(*next);
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const AlignedPair& a, const AlignedPair& b) {
        return greedy_before({a.similarity, a.headline, a.post},
                             {b.similarity, b.headline, b.post});
    });
    return pairs;
}

std::vector<AlignedPair> top1_core(std::size_t n, std::size_t m, const SimFn& sim) {
    std::vector<AlignedPair> pairs;
    pairs.reserve(n);
    for (std::size_t h = 0; h < n; ++h) {
        std::size_t best_post = 0;
        double best_sim = sim(h, 0);
        for (std::size_t p = 1; p < m; ++p) {
            const double s = sim(h, p);
            if (s > best_sim) {
                best_sim = s;
                best_post = p;
            }
        }
        pairs.push_back({h, best_post, best_sim});
    }
    return pairs;
}

}  // namespace

std::vector<AlignedPair> top1_align(std::span<const EmbeddingVector> headlines,
                                    std::span<const EmbeddingVector> posts) {
    check_corpora(headlines, posts);
    return top1_core(headlines.size(), posts.size(), [&](std::size_t h, std::size_t p) {
        return cosine_similarity(headlines[h], posts[p]);
    });
}

std::vector<AlignedPair> top1_align_matrix(const std::vector<std::vector<double>>& sim) {
    check_matrix(sim);
    return top1_core(sim.size(), sim.front().size(),
                     [&](std::size_t h, std::size_t p) { return sim[h][p]; });
}

std::pair<std::vector<AlignedPair>, AlignmentReport> one_to_one_align(
    std::span<const EmbeddingVector> headlines, std::span<const EmbeddingVector> posts,
    std::size_t max_dense_entries) {
    check_corpora(headlines, posts);
    const std::size_t n = headlines.size();
    const std::size_t m = posts.size();
    const auto sim = [&](std::size_t h, std::size_t p) {
        return cosine_similarity(headlines[h], posts[p]);
    };
    const bool dense = n <= max_dense_entries / m;
    std::vector<AlignedPair> pairs = dense ? greedy_dense(n, m, sim)
                                           : greedy_lazy(n, m, sim);
    return {pairs, report_for_pairs(pairs, n)};
}

std::pair<std::vector<AlignedPair>, AlignmentReport> one_to_one_align_matrix(
    const std::vector<std::vector<double>>& sim) {
    check_matrix(sim);
    auto pairs = greedy_dense(sim.size(), sim.front().size(),
                              [&](std::size_t h, std::size_t p) { return sim[h][p]; });
    return {pairs, report_for_pairs(pairs, sim.size())};
}

AlignmentReport report_for_pairs(std::span<const AlignedPair> pairs,
                                 std::size_t headline_count) {
    AlignmentReport report;
    report.pair_count = pairs.size();
    report.unmatched_headlines = headline_count - pairs.size();
    if (pairs.empty()) {
        return report;
    }
    double sum = 0.0;
    report.min_similarity = pairs.front().similarity;
    report.max_similarity = pairs.front().similarity;
    for (const AlignedPair& p : pairs) {
        report.min_similarity = std::min(report.min_similarity, p.similarity);
        report.max_similarity = std::max(report.max_similarity, p.similarity);
        sum += p.similarity;
    }
    report.mean_similarity = sum / static_cast<double>(pairs.size());
    return report;
}

}  // namespace emoclick
