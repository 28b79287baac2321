#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emoclick {

// One externally produced detector prediction. The positive class is
// "clickbait" everywhere. `style` is a style label or "original".
struct PredictionRecord {
    std::string text_id;
    std::string style;
    bool true_clickbait = false;
    bool predicted_clickbait = false;
    std::string classifier_id;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        fp += other.fp;
        tn += other.tn;
        fn += other.fn;
        return *this;
    }
};

// accuracy = (tp+tn)/total; precision = tp/(tp+fp); recall = tp/(tp+fn);
// f1 = harmonic mean. Empty denominators yield 0.0 with the matching
// degenerate flag set instead of an implicit 1.0, so downstream readers
// cannot mistake an undefined metric for a perfect one.
struct MetricRow {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    bool degenerate_precision = false;
    bool degenerate_recall = false;
};

ConfusionCounts confusion_counts(std::span<const PredictionRecord> records);

MetricRow metrics_from_counts(const ConfusionCounts& counts);

// Canonical row order of the per-style table: original first, then the six
// styles in their fixed order. Only styles present in the input appear.
struct StyleMetrics {
    std::string style;
    MetricRow row;
};

std::vector<StyleMetrics> evaluate_per_style(std::span<const PredictionRecord> records);

// Prediction joined with the pair's curiosity-gap shift.
struct FramedPrediction {
    PredictionRecord prediction;
    double delta_cg = 0.0;
};

// Framing groups follow the sign of delta_cg: the "highest" group holds
// positive framing (delta >= 0), the "lowest" group negative framing.
// An empty group is an absent row, not a failure.
struct FramingReport {
    std::optional<MetricRow> highest;
    std::optional<MetricRow> lowest;
};

FramingReport split_by_framing(std::span<const FramedPrediction> records);

// Percentage share per style, one decimal place, corrected by largest
// remainder so shares sum to exactly 100.0. Sorted by share descending,
// then by style name.
struct StyleShare {
    std::string style;
    double percent = 0.0;
};

std::vector<StyleShare> style_distribution(std::span<const std::string> styles);

}  // namespace emoclick
