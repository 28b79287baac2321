#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace emoclick {

// Point in the valence/arousal/dominance cube [0,1]^3. Coordinates are
// validated at construction; all affect math downstream can assume them.
class VadVector {
public:
    VadVector(double valence, double arousal, double dominance);

    double valence() const { return valence_; }
    double arousal() const { return arousal_; }
    double dominance() const { return dominance_; }

    bool operator==(const VadVector& other) const = default;

private:
    double valence_;
    double arousal_;
    double dominance_;
};

// Curiosity Gap score: arousal * (1 - dominance) + valence.
// High arousal with low dominance models activated uncertainty; valence
// adds the positive-framing pull. Result lies in [0, 2].
double curiosity_gap(const VadVector& v);

// CG(post) - CG(comment). Positive values mean the post scores higher
// than the styled comment; the sign convention is kept exactly as is.
double delta_cg(const VadVector& post, const VadVector& comment);

enum class Framing { Positive, Negative };

std::string_view to_string(Framing framing);
Framing framing_from_string(std::string_view name);

// Positive iff delta >= 0 (exact sign of the computed double, no epsilon).
// Rejects |delta| > 2 + 1e-9.
Framing classify_framing(double delta);

// Euclidean distance in VAD space. Placeholder drift metric: no standard
// definition exists for emotional drift, so outputs must label this value
// as a placeholder wherever it is reported.
double vad_drift(const VadVector& a, const VadVector& b);

// Per-label emotion scores. Weights are non-negative, at least one is
// positive, and they need not sum to one (multi-label classifier output);
// normalized() is the probability view.
class EmotionDistribution {
public:
    explicit EmotionDistribution(std::map<std::string, double> weights);

    const std::map<std::string, double>& weights() const { return weights_; }
    std::map<std::string, double> normalized() const;

    // Max-weight label; ties go to the lexicographically smallest label.
    const std::string& top_label() const;

private:
    std::map<std::string, double> weights_;
};

// The 28 GoEmotions category names, sorted; the default taxonomy.
const std::vector<std::string>& goemotions_taxonomy();
inline constexpr std::string_view kGoEmotionsTaxonomyName = "goemotions-28";

// Total map from emotion label to VAD coordinates for one named taxonomy.
// Loaded from a versioned lexicon file so results are reproducible per
// lexicon version.
class VadLexicon {
public:
    VadLexicon(std::string taxonomy, std::string version,
               std::map<std::string, VadVector> entries);

    // File format: one header line `# taxonomy=<name> version=<version>`,
    // then one tab-separated record per label: label, valence, arousal,
    // dominance as decimal text. Rejects out-of-range coordinates,
    // duplicate labels, and (for the builtin taxonomy) missing labels.
    static VadLexicon load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    const std::string& taxonomy() const { return taxonomy_; }
    const std::string& version() const { return version_; }
    const std::map<std::string, VadVector>& entries() const { return entries_; }

    bool contains(const std::string& label) const;
    const VadVector& vector_for(const std::string& label) const;
    std::vector<std::string> labels() const;

private:
    std::string taxonomy_;
    std::string version_;
    std::map<std::string, VadVector> entries_;
};

enum class VadAggregation { WeightedMean, Top1 };

VadAggregation aggregation_from_string(std::string_view name);
std::string_view to_string(VadAggregation mode);

// Collapses an emotion distribution to a single VAD point.
// WeightedMean: coordinate-wise mean of lexicon vectors weighted by the
// normalized distribution, restricted to labels with weight >= weight_floor.
// Top1: the lexicon vector of the max-weight label.
VadVector map_emotion_to_vad(const EmotionDistribution& dist, const VadLexicon& lex,
                             VadAggregation mode = VadAggregation::WeightedMean,
                             double weight_floor = 0.0);

// One scored (post, styled comment) pair. delta_cg and framing are always
// derived from cg_post/cg_comment by the same arithmetic as the free
// functions; use make_cg_record to keep that invariant.
struct CgRecord {
    double cg_post = 0.0;
    double cg_comment = 0.0;
    double delta_cg = 0.0;
    Framing framing = Framing::Positive;
    std::string style;
};

CgRecord make_cg_record(double cg_post, double cg_comment, std::string style);

}  // namespace emoclick
