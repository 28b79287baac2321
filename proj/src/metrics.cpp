#include "emoclick/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "emoclick/errors.hpp"

namespace emoclick {

namespace {

const std::vector<std::string>& table_row_order() {
    static const std::vector<std::string> order = {
        "original", "clickbait", "neutral", "formal",
        "casual",   "inspirational", "humor",
    };
    return order;
}

}  // namespace

ConfusionCounts confusion_counts(std::span<const PredictionRecord> records) {
    if (records.empty()) {
        throw EmptyInputError("no prediction records to tally");
    }
    ConfusionCounts c;
    for (const PredictionRecord& r : records) {
        if (r.true_clickbait) {
            r.predicted_clickbait ? ++c.tp : ++c.fn;
        } else {
            r.predicted_clickbait ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

MetricRow metrics_from_counts(const ConfusionCounts& c) {
    const std::uint64_t total = c.total();
    if (total == 0) {
        throw EmptyInputError("confusion counts are all zero");
    }
    MetricRow row;
    row.support = total;
    row.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
    if (c.tp + c.fp == 0) {
        row.precision = 0.0;
        row.degenerate_precision = true;
    } else {
        row.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn == 0) {
        row.recall = 0.0;
        row.degenerate_recall = true;
    } else {
        row.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (row.precision + row.recall > 0.0) {
        row.f1 = 2.0 * row.precision * row.recall / (row.precision + row.recall);
    } else {
        row.f1 = 0.0;
    }
    return row;
}

std::vector<StyleMetrics> evaluate_per_style(std::span<const PredictionRecord> records) {
    if (records.empty()) {
        throw EmptyInputError("no prediction records to evaluate");
    }
    std::map<std::string, ConfusionCounts> by_style;
    for (const PredictionRecord& r : records) {
        ConfusionCounts& c = by_style[r.style];
        if (r.true_clickbait) {
            r.predicted_clickbait ? ++c.tp : ++c.fn;
        } else {
            r.predicted_clickbait ? ++c.fp : ++c.tn;
        }
    }
    std::vector<StyleMetrics> out;
    for (const std::string& style : table_row_order()) {
        auto it = by_style.find(style);
        if (it != by_style.end()) {
            out.push_back({style, metrics_from_counts(it->second)});
            by_style.erase(it);
        }
    }
    // Styles outside the canonical table order (foreign taxonomies) follow
    // in name order so output stays deterministic.
    for (const auto& [style, counts] : by_style) {
        out.push_back({style, metrics_from_counts(counts)});
    }
    return out;
}

FramingReport split_by_framing(std::span<const FramedPrediction> records) {
    if (records.empty()) {
        throw EmptyInputError("no framed prediction records");
    }
    ConfusionCounts highest;
    ConfusionCounts lowest;
    for (const FramedPrediction& fr : records) {
        // delta == 0 lands in the positive ("highest") group.
        ConfusionCounts& c = fr.delta_cg >= 0.0 ? highest : lowest;
        if (fr.prediction.true_clickbait) {
            fr.prediction.predicted_clickbait ? ++c.tp : ++c.fn;
        } else {
            fr.prediction.predicted_clickbait ? ++c.fp : ++c.tn;
        }
    }
    FramingReport report;
    if (highest.total() > 0) {
        report.highest = metrics_from_counts(highest);
    }
    if (lowest.total() > 0) {
        report.lowest = metrics_from_counts(lowest);
    }
    return report;
}

std::vector<StyleShare> style_distribution(std::span<const std::string> styles) {
    if (styles.empty()) {
        throw EmptyInputError("no styles to summarize");
    }
    std::map<std::string, std::uint64_t> counts;
    for (const std::string& s : styles) {
        ++counts[s];
    }
    const double total = static_cast<double>(styles.size());

    // Largest-remainder rounding in tenths of a percent.
    struct Work {
        std::string style;
        std::uint64_t count;
        long long tenths;
        double remainder;
    };
    std::vector<Work> work;
    long long assigned = 0;
    for (const auto& [style, count] : counts) {
        const double exact_tenths = 1000.0 * static_cast<double>(count) / total;
        const long long floor_tenths = static_cast<long long>(std::floor(exact_tenths));
        work.push_back({style, count, floor_tenths, exact_tenths - floor_tenths});
        assigned += floor_tenths;
    }
    long long leftover = 1000 - assigned;
    std::vector<std::size_t> order(work.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (work[a].remainder != work[b].remainder) {
            return work[a].remainder > work[b].remainder;
        }
        return work[a].style < work[b].style;
    });
    for (std::size_t i = 0; leftover > 0 && i < order.size(); ++i, --leftover) {
        ++work[order[i]].tenths;
    }

    std::vector<StyleShare> out;
    out.reserve(work.size());
    for (const Work& w : work) {
        out.push_back({w.style, static_cast<double>(w.tenths) / 10.0});
    }
    std::sort(out.begin(), out.end(), [](const StyleShare& a, const StyleShare& b) {
        if (a.percent != b.percent) {
            return a.percent > b.percent;
        }
        return a.style < b.style;
    });
    return out;
}

}  // namespace emoclick
