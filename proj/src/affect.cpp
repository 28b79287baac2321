#include "emoclick/affect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "emoclick/errors.hpp"

namespace emoclick {

namespace {

void check_coordinate(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << name << " coordinate " << value << " outside [0,1]";
        throw OutOfRangeError(msg.str());
    }
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

VadVector::VadVector(double valence, double arousal, double dominance)
    : valence_(valence), arousal_(arousal), dominance_(dominance) {
    check_coordinate(valence, "valence");
    check_coordinate(arousal, "arousal");
    check_coordinate(dominance, "dominance");
}

double curiosity_gap(const VadVector& v) {
    return v.arousal() * (1.0 - v.dominance()) + v.valence();
}

double delta_cg(const VadVector& post, const VadVector& comment) {
    return curiosity_gap(post) - curiosity_gap(comment);
}

std::string_view to_string(Framing framing) {
    return framing == Framing::Positive ? "positive" : "negative";
}

Framing framing_from_string(std::string_view name) {
    if (name == "positive") return Framing::Positive;
    if (name == "negative") return Framing::Negative;
    throw ParseError("unknown framing label: " + std::string(name));
}

Framing classify_framing(double delta) {
    if (std::abs(delta) > 2.0 + 1e-9) {
        throw OutOfRangeError("delta_cg " + std::to_string(delta) + " outside [-2,2]");
    }
    return delta >= 0.0 ? Framing::Positive : Framing::Negative;
}

double vad_drift(const VadVector& a, const VadVector& b) {
    const double dv = a.valence() - b.valence();
    const double da = a.arousal() - b.arousal();
    const double dd = a.dominance() - b.dominance();
    return std::sqrt(dv * dv + da * da + dd * dd);
}

EmotionDistribution::EmotionDistribution(std::map<std::string, double> weights)
    : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw EmptyDistributionError("emotion distribution has no labels");
    }
    bool any_positive = false;
    for (const auto& [label, w] : weights_) {
        if (label.empty()) {
            throw UnknownLabelError("empty emotion label");
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw OutOfRangeError("weight for '" + label + "' must be finite and >= 0");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw EmptyDistributionError("all emotion weights are zero");
    }
}

std::map<std::string, double> EmotionDistribution::normalized() const {
    double sum = 0.0;
    for (const auto& [label, w] : weights_) {
        sum += w;
    }
    std::map<std::string, double> out;
    for (const auto& [label, w] : weights_) {
        out[label] = w / sum;
    }
    return out;
}

const std::string& EmotionDistribution::top_label() const {
    // std::map iterates labels in lexicographic order, so the first strict
    // maximum is also the tie-break winner.
    const std::string* best = nullptr;
    double best_weight = -1.0;
    for (const auto& [label, w] : weights_) {
        if (w > best_weight) {
            best = &label;
            best_weight = w;
        }
    }
    return *best;
}

const std::vector<std::string>& goemotions_taxonomy() {
    static const std::vector<std::string> labels = {
        "admiration",    "amusement",   "anger",       "annoyance",
        "approval",      "caring",      "confusion",   "curiosity",
        "desire",        "disappointment", "disapproval", "disgust",
        "embarrassment", "excitement",  "fear",        "gratitude",
        "grief",         "joy",         "love",        "nervousness",
        "neutral",       "optimism",    "pride",       "realization",
        "relief",        "remorse",     "sadness",     "surprise",
    };
    return labels;
}

VadLexicon::VadLexicon(std::string taxonomy, std::string version,
                       std::map<std::string, VadVector> entries)
    : taxonomy_(std::move(taxonomy)),
      version_(std::move(version)),
      entries_(std::move(entries)) {
    if (taxonomy_.empty() || version_.empty()) {
        throw ParseError("lexicon requires non-empty taxonomy name and version");
    }
    if (entries_.empty()) {
        throw ParseError("lexicon has no entries");
    }
    if (taxonomy_ == kGoEmotionsTaxonomyName) {
        for (const std::string& label : goemotions_taxonomy()) {
            if (!entries_.count(label)) {
                throw UnknownLabelError("lexicon for " + taxonomy_ +
                                        " is missing label '" + label + "'");
            }
        }
    }
}

VadLexicon VadLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open lexicon " + path.string());
    }
    std::string line;
    std::string taxonomy;
    std::string version;
    std::map<std::string, VadVector> entries;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (t.front() == '#') {
            // `# taxonomy=<name> version=<version>`
            std::istringstream hdr(t.substr(1));
            std::string token;
            while (hdr >> token) {
                if (token.rfind("taxonomy=", 0) == 0) {
                    taxonomy = token.substr(9);
                } else if (token.rfind("version=", 0) == 0) {
                    version = token.substr(8);
                }
            }
            header_seen = true;
            continue;
        }
        if (!header_seen) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": lexicon data before header line");
        }
        std::istringstream row(t);
        std::string label;
        double v = -1.0, a = -1.0, d = -1.0;
        if (!(row >> label >> v >> a >> d)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected `label v a d`");
        }
        if (entries.count(label)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate label '" + label + "'");
        }
        try {
            entries.emplace(label, VadVector(v, a, d));
        } catch (const OutOfRangeError& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
    if (taxonomy.empty() || version.empty()) {
        throw ParseError(path.string() + ": missing `# taxonomy=... version=...` header");
    }
    return VadLexicon(taxonomy, version, std::move(entries));
}

void VadLexicon::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write lexicon " + path.string());
    }
    out << "# taxonomy=" << taxonomy_ << " version=" << version_ << "\n";
    out.precision(6);
    for (const auto& [label, vec] : entries_) {
        out << label << '\t' << vec.valence() << '\t' << vec.arousal() << '\t'
            << vec.dominance() << '\n';
    }
}

bool VadLexicon::contains(const std::string& label) const {
    return entries_.count(label) > 0;
}

const VadVector& VadLexicon::vector_for(const std::string& label) const {
    auto it = entries_.find(label);
    if (it == entries_.end()) {
        throw UnknownLabelError("label '" + label + "' not in lexicon for " + taxonomy_);
    }
    return it->second;
}

std::vector<std::string> VadLexicon::labels() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [label, vec] : entries_) {
        out.push_back(label);
    }
    return out;
}

VadAggregation aggregation_from_string(std::string_view name) {
    if (name == "weighted_mean") return VadAggregation::WeightedMean;
    if (name == "top1") return VadAggregation::Top1;
    throw ConfigError("unknown aggregation mode: " + std::string(name));
}

std::string_view to_string(VadAggregation mode) {
    return mode == VadAggregation::WeightedMean ? "weighted_mean" : "top1";
}

VadVector map_emotion_to_vad(const EmotionDistribution& dist, const VadLexicon& lex,
                             VadAggregation mode, double weight_floor) {
    for (const auto& [label, w] : dist.weights()) {
        if (!lex.contains(label)) {
            throw UnknownLabelError("label '" + label + "' not in lexicon for " +
                                    lex.taxonomy());
        }
    }
    if (mode == VadAggregation::Top1) {
        return lex.vector_for(dist.top_label());
    }
    double sum = 0.0;
    double v = 0.0, a = 0.0, d = 0.0;
    for (const auto& [label, w] : dist.weights()) {
        if (w <= 0.0 || w < weight_floor) {
            continue;
        }
        const VadVector& vec = lex.vector_for(label);
        v += w * vec.valence();
        a += w * vec.arousal();
        d += w * vec.dominance();
        sum += w;
    }
    if (sum <= 0.0) {
        throw EmptyDistributionError("no emotion weight at or above floor " +
                                     std::to_string(weight_floor));
    }
    return VadVector(v / sum, a / sum, d / sum);
}

CgRecord make_cg_record(double cg_post, double cg_comment, std::string style) {
    CgRecord rec;
    rec.cg_post = cg_post;
    rec.cg_comment = cg_comment;
    rec.delta_cg = cg_post - cg_comment;
    rec.framing = classify_framing(rec.delta_cg);
    rec.style = std::move(style);
    return rec;
}

}  // namespace emoclick
