#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "emoclick/affect.hpp"
#include "emoclick/errors.hpp"

using namespace emoclick;

namespace {

VadLexicon two_label_lexicon() {
    return VadLexicon("tiny-2", "test",
                      {{"fear", VadVector(0.1, 0.8, 0.2)},
                       {"joy", VadVector(0.9, 0.7, 0.6)}});
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("vad vector validates coordinates") {
    CHECK_NOTHROW(VadVector(0.0, 0.0, 0.0));
    CHECK_NOTHROW(VadVector(1.0, 1.0, 1.0));
    CHECK_THROWS_AS(VadVector(-0.01, 0.5, 0.5), OutOfRangeError);
    CHECK_THROWS_AS(VadVector(0.5, 1.01, 0.5), OutOfRangeError);
    CHECK_THROWS_AS(VadVector(0.5, 0.5, 2.0), OutOfRangeError);
}

TEST_CASE("curiosity gap boundary and hand-computed values") {
    CHECK(curiosity_gap(VadVector(0.0, 0.0, 1.0)) == 0.0);
    CHECK(curiosity_gap(VadVector(1.0, 1.0, 0.0)) == 2.0);
    // 0.8 * 0.7 + 0.5
    CHECK(curiosity_gap(VadVector(0.5, 0.8, 0.3)) == doctest::Approx(1.06).epsilon(1e-12));
}

TEST_CASE("delta cg examples") {
    const VadVector same(1.0, 1.0, 0.0);
    CHECK(delta_cg(same, same) == 0.0);
    CHECK(delta_cg(VadVector(0.5, 0.8, 0.3), VadVector(0.0, 0.0, 1.0)) ==
          doctest::Approx(1.06).epsilon(1e-12));
    CHECK(delta_cg(VadVector(0.0, 0.0, 1.0), VadVector(1.0, 1.0, 0.0)) == -2.0);
}

TEST_CASE("framing classification follows the >= 0 rule exactly") {
    CHECK(classify_framing(0.0) == Framing::Positive);
    CHECK(classify_framing(0.37) == Framing::Positive);
    CHECK(classify_framing(-0.01) == Framing::Negative);
    CHECK(classify_framing(2.0) == Framing::Positive);
    CHECK(classify_framing(-2.0) == Framing::Negative);
    CHECK_THROWS_AS(classify_framing(2.1), OutOfRangeError);
    CHECK_THROWS_AS(classify_framing(-2.0000001), OutOfRangeError);
}

TEST_CASE("vad drift is euclidean distance") {
    const VadVector a(0.3, 0.4, 0.5);
    CHECK(vad_drift(a, a) == 0.0);
    CHECK(vad_drift(VadVector(0, 0, 0), VadVector(1, 1, 1)) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    // sqrt(0.16 + 0.0025 + 0.04) = 0.45
    CHECK(vad_drift(VadVector(0.5, 0.75, 0.4), VadVector(0.9, 0.7, 0.6)) ==
          doctest::Approx(0.45).epsilon(1e-9));
    // symmetry
    const VadVector b(0.9, 0.1, 0.2);
    CHECK(vad_drift(a, b) == vad_drift(b, a));
}

TEST_CASE("emotion distribution invariants") {
    CHECK_THROWS_AS(EmotionDistribution({}), EmptyDistributionError);
    CHECK_THROWS_AS(EmotionDistribution({{"joy", 0.0}, {"fear", 0.0}}),
                    EmptyDistributionError);
    CHECK_THROWS_AS(EmotionDistribution({{"joy", -0.1}}), OutOfRangeError);

    const EmotionDistribution dist({{"joy", 2.0}, {"fear", 6.0}});
    const auto norm = dist.normalized();
    double sum = 0.0;
    for (const auto& [label, w] : norm) {
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(norm.at("joy") == doctest::Approx(0.25));

    // Tie goes to the lexicographically smallest label.
    const EmotionDistribution tie({{"joy", 0.5}, {"fear", 0.5}});
    CHECK(tie.top_label() == "fear");
}

TEST_CASE("map_emotion_to_vad point mass, weighted mean, and top1") {
    const auto lex = two_label_lexicon();

    const VadVector point = map_emotion_to_vad(EmotionDistribution({{"joy", 1.0}}), lex,
                                               VadAggregation::WeightedMean);
    CHECK(point == VadVector(0.9, 0.7, 0.6));

    const VadVector mean = map_emotion_to_vad(
        EmotionDistribution({{"joy", 0.5}, {"fear", 0.5}}), lex,
        VadAggregation::WeightedMean);
    CHECK(mean.valence() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mean.arousal() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(mean.dominance() == doctest::Approx(0.4).epsilon(1e-12));

    const VadVector top = map_emotion_to_vad(
        EmotionDistribution({{"joy", 0.2}, {"fear", 0.8}}), lex, VadAggregation::Top1);
    CHECK(top == VadVector(0.1, 0.8, 0.2));
}

TEST_CASE("map_emotion_to_vad errors and the weight floor") {
    const auto lex = two_label_lexicon();
    CHECK_THROWS_AS(map_emotion_to_vad(EmotionDistribution({{"anger", 1.0}}), lex),
                    UnknownLabelError);
    // Every weight below the floor leaves nothing to aggregate.
    CHECK_THROWS_AS(map_emotion_to_vad(EmotionDistribution({{"joy", 0.1}}), lex,
                                       VadAggregation::WeightedMean, 0.5),
                    EmptyDistributionError);
    // The floor keeps only joy here.
    const VadVector kept = map_emotion_to_vad(
        EmotionDistribution({{"joy", 0.9}, {"fear", 0.05}}), lex,
        VadAggregation::WeightedMean, 0.1);
    CHECK(kept == VadVector(0.9, 0.7, 0.6));
}

TEST_CASE("weighted mean is invariant under uniform weight scaling") {
    const auto lex = two_label_lexicon();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double wj = unit(rng);
        const double wf = unit(rng);
        const double scale = unit(rng) * 10.0;
        const VadVector a = map_emotion_to_vad(
            EmotionDistribution({{"joy", wj}, {"fear", wf}}), lex);
        const VadVector b = map_emotion_to_vad(
            EmotionDistribution({{"joy", wj * scale}, {"fear", wf * scale}}), lex);
        CHECK(a.valence() == doctest::Approx(b.valence()).epsilon(1e-12));
        CHECK(a.arousal() == doctest::Approx(b.arousal()).epsilon(1e-12));
        CHECK(a.dominance() == doctest::Approx(b.dominance()).epsilon(1e-12));
    }
}

TEST_CASE("cg properties over randomized vad space") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = unit(rng), a = unit(rng), d = unit(rng);
        const VadVector vad(v, a, d);
        const double cg = curiosity_gap(vad);
        REQUIRE(cg >= 0.0);
        REQUIRE(cg <= 2.0);

        // Strictly increasing in valence.
        if (v < 0.9) {
            REQUIRE(curiosity_gap(VadVector(v + 0.1, a, d)) > cg);
        }
        // Non-decreasing in arousal; strict when dominance < 1.
        if (a < 0.9) {
            const double bumped = curiosity_gap(VadVector(v, a + 0.1, d));
            REQUIRE(bumped >= cg);
            if (d < 1.0 - 1e-9) {
                REQUIRE(bumped > cg);
            }
        }
        // Non-increasing in dominance; strict when arousal > 0.
        if (d < 0.9) {
            const double bumped = curiosity_gap(VadVector(v, a, d + 0.1));
            REQUIRE(bumped <= cg);
            if (a > 1e-9) {
                REQUIRE(bumped < cg);
            }
        }

        const VadVector other(unit(rng), unit(rng), unit(rng));
        REQUIRE(delta_cg(vad, other) == -delta_cg(other, vad));
        const double delta = delta_cg(vad, other);
        const Framing framing = classify_framing(delta);
        REQUIRE(framing == (delta >= 0.0 ? Framing::Positive : Framing::Negative));
    }
}

TEST_CASE("make_cg_record derives delta and framing with the same arithmetic") {
    const CgRecord rec = make_cg_record(1.2, 0.7, "humor");
    CHECK(rec.delta_cg == 1.2 - 0.7);
    CHECK(rec.framing == Framing::Positive);
    CHECK(rec.style == "humor");
    const CgRecord neg = make_cg_record(0.3, 0.9, "formal");
    CHECK(neg.framing == Framing::Negative);
}

TEST_CASE("lexicon file loading") {
    const auto good = write_temp("emoclick_lex_good.tsv",
                                 "# taxonomy=tiny-2 version=v9\n"
                                 "fear\t0.1\t0.8\t0.2\n"
                                 "joy\t0.9\t0.7\t0.6\n");
    const VadLexicon lex = VadLexicon::load(good);
    CHECK(lex.taxonomy() == "tiny-2");
    CHECK(lex.version() == "v9");
    CHECK(lex.vector_for("joy") == VadVector(0.9, 0.7, 0.6));
    CHECK(lex.contains("fear"));
    CHECK_FALSE(lex.contains("anger"));
    CHECK_THROWS_AS(lex.vector_for("anger"), UnknownLabelError);

    const auto out_of_range = write_temp("emoclick_lex_oor.tsv",
                                         "# taxonomy=tiny version=v1\n"
                                         "joy\t1.5\t0.7\t0.6\n");
    CHECK_THROWS_AS(VadLexicon::load(out_of_range), ParseError);

    const auto duplicate = write_temp("emoclick_lex_dup.tsv",
                                      "# taxonomy=tiny version=v1\n"
                                      "joy\t0.9\t0.7\t0.6\n"
                                      "joy\t0.8\t0.7\t0.6\n");
    CHECK_THROWS_AS(VadLexicon::load(duplicate), ParseError);

    const auto headerless = write_temp("emoclick_lex_nohdr.tsv", "joy\t0.9\t0.7\t0.6\n");
    CHECK_THROWS_AS(VadLexicon::load(headerless), ParseError);

    // The builtin taxonomy demands all 28 labels.
    const auto incomplete = write_temp("emoclick_lex_incomplete.tsv",
                                       "# taxonomy=goemotions-28 version=v1\n"
                                       "joy\t0.9\t0.7\t0.6\n");
    CHECK_THROWS_AS(VadLexicon::load(incomplete), UnknownLabelError);
}

TEST_CASE("bundled lexicon covers the default taxonomy") {
    const auto path = std::filesystem::path(EMOCLICK_SOURCE_DATA_DIR) / "lexicon" /
                      "vad_goemotions_v1.tsv";
    const VadLexicon lex = VadLexicon::load(path);
    CHECK(lex.taxonomy() == std::string(kGoEmotionsTaxonomyName));
    CHECK(lex.entries().size() == 28);
    CHECK(goemotions_taxonomy().size() == 28);
    for (const std::string& label : goemotions_taxonomy()) {
        CHECK(lex.contains(label));
    }
    // Lexicon totality: any distribution over the taxonomy maps cleanly.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& labels = goemotions_taxonomy();
    for (int i = 0; i < 100; ++i) {
        std::map<std::string, double> weights;
        for (int k = 0; k < 5; ++k) {
            weights[labels[rng() % labels.size()]] = unit(rng) + 1e-6;
        }
        CHECK_NOTHROW(map_emotion_to_vad(EmotionDistribution(weights), lex));
    }
}

TEST_CASE("lexicon save/load round trip") {
    const auto lex = two_label_lexicon();
    const auto path = std::filesystem::temp_directory_path() / "emoclick_lex_rt.tsv";
    lex.save(path);
    const VadLexicon reloaded = VadLexicon::load(path);
    CHECK(reloaded.taxonomy() == lex.taxonomy());
    CHECK(reloaded.version() == lex.version());
    CHECK(reloaded.entries().size() == lex.entries().size());
    CHECK(reloaded.vector_for("joy").valence() ==
          doctest::Approx(lex.vector_for("joy").valence()).epsilon(1e-9));
}
