#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <random>
#include <set>

#include "emoclick/align.hpp"
#include "emoclick/embedding.hpp"
#include "emoclick/errors.hpp"

using namespace emoclick;

namespace {

EmbeddingVector vec(std::vector<double> values) {
    return EmbeddingVector::normalized_from(std::move(values));
}

// Counts transport calls and serves fixed-dimension deterministic vectors.
class CountingBackend : public EmbeddingBackend {
public:
    explicit CountingBackend(std::size_t dim = 4) : inner_(dim, 99) {}
    std::string id() const override { return "test:counting"; }
    std::string model_id() const override { return "counting"; }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override {
        ++calls;
        return inner_.embed(batch);
    }
    int calls = 0;

private:
    HashEmbeddingBackend inner_;
};

class FlakyBackend : public EmbeddingBackend {
public:
    explicit FlakyBackend(int failures) : failures_left(failures) {}
    std::string id() const override { return "test:flaky"; }
    std::string model_id() const override { return "flaky"; }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override {
        if (failures_left-- > 0) {
            throw TransportError("synthetic outage");
        }
        return inner_.embed(batch);
    }
    int failures_left;

private:
    HashEmbeddingBackend inner_{4, 1};
};

class RaggedBackend : public EmbeddingBackend {
public:
    std::string id() const override { return "test:ragged"; }
    std::string model_id() const override { return "ragged"; }
    std::vector<std::vector<double>> embed(const std::vector<EmbedRequest>& batch) override {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            out.push_back(std::vector<double>(3 + i, 1.0));
        }
        return out;
    }
};

RetryPolicy instant_retry(int attempts) {
    RetryPolicy policy;
    policy.max_attempts = attempts;
    policy.sleeper = [](std::chrono::milliseconds) {};
    return policy;
}

}  // namespace

TEST_CASE("cosine similarity basics") {
    const auto a = vec({1.0, 2.0, 3.0});
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cosine_similarity(vec({1, 0, 0}), vec({0, 1, 0})) == doctest::Approx(0.0));
    CHECK(cosine_similarity(vec({1, 0}), vec({1, 1})) ==
          doctest::Approx(0.7071068).epsilon(1e-6));
    // Symmetry.
    const auto b = vec({0.2, -0.4, 0.9});
    CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
    CHECK_THROWS_AS(cosine_similarity(vec({1, 0}), vec({1, 0, 0})), DimMismatchError);
    CHECK_THROWS_AS(EmbeddingVector::normalized_from({0.0, 0.0}), ZeroVectorError);
}

TEST_CASE("embed_batch batches, preserves order, and normalizes") {
    CountingBackend backend;
    const std::vector<EmbedRequest> requests = {
        {"a", "alpha text"}, {"b", "beta text"}, {"c", "gamma text"}};
    const auto vectors = embed_batch(requests, backend, 2);
    CHECK(backend.calls == 2);  // batches {a,b} and {c}
    REQUIRE(vectors.size() == 3);
    for (const auto& v : vectors) {
        double norm = 0.0;
        for (double x : v.values) norm += x * x;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    }
    // Identical strings embed identically; order matches input order.
    CountingBackend again;
    const auto second = embed_batch(requests, again, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cosine_similarity(vectors[i], second[i]) == doctest::Approx(1.0));
    }
}

TEST_CASE("embed_batch error contracts") {
    CountingBackend backend;
    CHECK_THROWS_AS(embed_batch({{"x", "   "}}, backend, 4), EmptyTextError);
    RaggedBackend ragged;
    CHECK_THROWS_AS(embed_batch({{"a", "one"}, {"b", "two"}}, ragged, 4),
                    DimMismatchError);
}

TEST_CASE("embed_batch retries transport failures") {
    FlakyBackend recovers(2);
    const auto ok = embed_batch({{"a", "hello"}}, recovers, 4, instant_retry(3));
    CHECK(ok.size() == 1);

    FlakyBackend dies(5);
    CHECK_THROWS_AS(embed_batch({{"a", "hello"}}, dies, 4, instant_retry(3)),
                    BackendUnavailableError);
}

TEST_CASE("hash backend is deterministic and separates inputs") {
    HashEmbeddingBackend backend(32, 7);
    const auto first = embed_batch({{"1", "a"}, {"2", "b"}, {"3", "a"}}, backend, 8);
    CHECK(cosine_similarity(first[0], first[2]) == doctest::Approx(1.0));
    CHECK(cosine_similarity(first[0], first[1]) < 1.0);
    // Token multiset, not order: same tokens in different order coincide.
    const auto perm = embed_batch({{"1", "red blue green"}, {"2", "green red blue"}},
                                  backend, 8);
    CHECK(cosine_similarity(perm[0], perm[1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("top1 alignment picks the row maximum with smallest-index ties") {
    const auto forced = top1_align_matrix({{0.42}});
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].headline == 0);
    CHECK(forced[0].post == 0);
    CHECK(forced[0].similarity == doctest::Approx(0.42));

    const auto pairs = top1_align_matrix({{0.9, 0.8, 0.1}, {0.85, 0.7, 0.2}});
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].post == 0);
    CHECK(pairs[1].post == 0);  // posts may repeat

    const auto tied = top1_align_matrix({{0.3, 0.7, 0.7}});
    CHECK(tied[0].post == 1);
}

TEST_CASE("one-to-one greedy alignment on the worked example") {
    const auto [pairs, report] =
        one_to_one_align_matrix({{0.9, 0.8, 0.1}, {0.85, 0.7, 0.2}});
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].headline == 0);
    CHECK(pairs[0].post == 0);
    CHECK(pairs[0].similarity == doctest::Approx(0.9));
    CHECK(pairs[1].headline == 1);
    CHECK(pairs[1].post == 1);
    CHECK(pairs[1].similarity == doctest::Approx(0.7));
    CHECK(report.pair_count == 2);
    CHECK(report.unmatched_headlines == 0);
    CHECK(report.min_similarity == doctest::Approx(0.7));
    CHECK(report.max_similarity == doctest::Approx(0.9));
    CHECK(report.mean_similarity == doctest::Approx(0.8));
}

TEST_CASE("one-to-one alignment degenerate shapes") {
    const auto [single, single_report] = one_to_one_align_matrix({{0.1, 0.9, 0.4}});
    REQUIRE(single.size() == 1);
    CHECK(single[0].post == 1);

    const auto [pigeon, pigeon_report] =
        one_to_one_align_matrix({{0.9, 0.1}, {0.8, 0.2}, {0.7, 0.3}});
    CHECK(pigeon.size() == 2);
    CHECK(pigeon_report.unmatched_headlines == 1);

    CHECK_THROWS_AS(one_to_one_align_matrix({}), EmptyCorpusError);
    CHECK_THROWS_AS(one_to_one_align_matrix({{0.5, 0.5}, {0.5}}), DimMismatchError);
}

TEST_CASE("greedy acceptance is non-increasing and injective") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const std::size_t m = 1 + rng() % 8;
        std::vector<std::vector<double>> sim(n, std::vector<double>(m));
        for (auto& row : sim) {
            for (double& s : row) {
                s = unit(rng);
            }
        }
        const auto [pairs, report] = one_to_one_align_matrix(sim);
        REQUIRE(pairs.size() == std::min(n, m));
        std::set<std::size_t> headlines, posts;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            REQUIRE(headlines.insert(pairs[i].headline).second);
            REQUIRE(posts.insert(pairs[i].post).second);
            if (i > 0) {
                REQUIRE(pairs[i].similarity <= pairs[i - 1].similarity);
            }
        }
        // Per matched headline, top-1 similarity dominates the 1:1 match.
        const auto top1 = top1_align_matrix(sim);
        for (const AlignedPair& p : pairs) {
            REQUIRE(top1[p.headline].similarity >= p.similarity);
        }
    }
}

TEST_CASE("embedding and matrix paths agree, dense and lazy paths agree") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        const std::size_t m = 2 + rng() % 5;
        std::vector<EmbeddingVector> headlines, posts;
        for (std::size_t i = 0; i < n; ++i) {
            headlines.push_back(vec({unit(rng), unit(rng), unit(rng), unit(rng)}));
        }
        for (std::size_t j = 0; j < m; ++j) {
            posts.push_back(vec({unit(rng), unit(rng), unit(rng), unit(rng)}));
        }
        const auto [dense, dense_report] = one_to_one_align(headlines, posts);
        // max_dense_entries 1 forces the lazy streaming path.
        const auto [lazy, lazy_report] = one_to_one_align(headlines, posts, 1);
        REQUIRE(dense.size() == lazy.size());
        for (std::size_t i = 0; i < dense.size(); ++i) {
            REQUIRE(dense[i].headline == lazy[i].headline);
            REQUIRE(dense[i].post == lazy[i].post);
            REQUIRE(dense[i].similarity == lazy[i].similarity);
        }
        // Re-running is bit-identical.
        const auto [again, again_report] = one_to_one_align(headlines, posts);
        for (std::size_t i = 0; i < dense.size(); ++i) {
            REQUIRE(dense[i].similarity == again[i].similarity);
        }
    }
}

TEST_CASE("embedding cache serves repeat texts without backend calls") {
    const auto cache_path = std::filesystem::temp_directory_path() /
                            "emoclick_embed_cache_test.jsonl";
    std::filesystem::remove(cache_path);
    CountingBackend backend;
    {
        EmbeddingCache cache(cache_path);
        const std::vector<EmbedRequest> requests = {{"a", "same text"}, {"b", "other"}};
        embed_with_cache(requests, backend, cache, 8);
        CHECK(backend.calls == 1);
        embed_with_cache(requests, backend, cache, 8);
        CHECK(backend.calls == 1);  // all hits
    }
    // A fresh cache object reloads the sidecar file.
    EmbeddingCache reloaded(cache_path);
    CHECK(reloaded.find("test:counting", "counting", "same text").has_value());
    CHECK_FALSE(reloaded.find("test:counting", "counting", "unseen").has_value());
}
