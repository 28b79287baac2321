#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emoclick/affect.hpp"
#include "emoclick/align.hpp"
#include "emoclick/embedding.hpp"
#include "emoclick/errors.hpp"
#include "emoclick/metrics.hpp"
#include "emoclick/style.hpp"

namespace py = pybind11;
using namespace emoclick;

namespace {

EmbeddingVector vector_from_list(const std::vector<double>& values) {
    return EmbeddingVector::normalized_from(values);
}

std::vector<EmbeddingVector> vectors_from_lists(
    const std::vector<std::vector<double>>& rows) {
    std::vector<EmbeddingVector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(EmbeddingVector::normalized_from(row));
    }
    return out;
}

py::dict metric_row_dict(const MetricRow& row) {
    py::dict d;
    d["accuracy"] = row.accuracy;
    d["precision"] = row.precision;
    d["recall"] = row.recall;
    d["f1"] = row.f1;
    d["support"] = row.support;
    d["degenerate_precision"] = row.degenerate_precision;
    d["degenerate_recall"] = row.degenerate_recall;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "emoclick core: curiosity-gap affect math, alignment, and metrics";

    py::register_exception<Error>(m, "EmoclickError");

    py::enum_<Framing>(m, "Framing")
        .value("POSITIVE", Framing::Positive)
        .value("NEGATIVE", Framing::Negative);

    py::class_<VadVector>(m, "VadVector")
        .def(py::init<double, double, double>(), py::arg("valence"), py::arg("arousal"),
             py::arg("dominance"))
        .def_property_readonly("valence", &VadVector::valence)
        .def_property_readonly("arousal", &VadVector::arousal)
        .def_property_readonly("dominance", &VadVector::dominance)
        .def("__repr__", [](const VadVector& v) {
            return "VadVector(" + std::to_string(v.valence()) + ", " +
                   std::to_string(v.arousal()) + ", " + std::to_string(v.dominance()) + ")";
        });

    m.def("curiosity_gap", &curiosity_gap, py::arg("vad"),
          "Curiosity Gap score A*(1-D)+V of a VAD point.");
    m.def("delta_cg", &delta_cg, py::arg("post"), py::arg("comment"),
          "CG(post) - CG(comment).");
    m.def("classify_framing", &classify_framing, py::arg("delta"),
          "POSITIVE iff delta >= 0.");
    m.def("vad_drift", &vad_drift, py::arg("a"), py::arg("b"),
          "Euclidean VAD distance (placeholder drift metric).");

    py::class_<VadLexicon>(m, "VadLexicon")
        .def_static("load",
                    [](const std::string& path) { return VadLexicon::load(path); },
                    py::arg("path"))
        .def_property_readonly("taxonomy", &VadLexicon::taxonomy)
        .def_property_readonly("version", &VadLexicon::version)
        .def("labels", &VadLexicon::labels)
        .def("vector_for", &VadLexicon::vector_for, py::arg("label"),
             py::return_value_policy::copy);

    m.def(
        "map_emotion_to_vad",
        [](const std::map<std::string, double>& weights, const VadLexicon& lexicon,
           const std::string& mode, double weight_floor) {
            return map_emotion_to_vad(EmotionDistribution(weights), lexicon,
                                      aggregation_from_string(mode), weight_floor);
        },
        py::arg("weights"), py::arg("lexicon"), py::arg("mode") = "weighted_mean",
        py::arg("weight_floor") = 0.0,
        "Collapse per-label emotion weights to a VAD point through the lexicon.");

    m.def(
        "cosine_similarity",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return cosine_similarity(vector_from_list(a), vector_from_list(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "hash_embed",
        [](const std::vector<std::string>& texts, std::size_t dim, std::uint64_t seed) {
            HashEmbeddingBackend backend(dim, seed);
            std::vector<EmbedRequest> requests;
            for (std::size_t i = 0; i < texts.size(); ++i) {
                requests.push_back({std::to_string(i), texts[i]});
            }
            std::vector<std::vector<double>> out;
            for (const EmbeddingVector& v : embed_batch(requests, backend, 64)) {
                out.push_back(v.values);
            }
            return out;
        },
        py::arg("texts"), py::arg("dim") = 64, py::arg("seed") = 0,
        "Deterministic offline embedding of a list of texts (L2-normalized).");

    auto pair_tuples = [](const std::vector<AlignedPair>& pairs) {
        std::vector<std::tuple<std::size_t, std::size_t, double>> out;
        out.reserve(pairs.size());
        for (const AlignedPair& p : pairs) {
            out.emplace_back(p.headline, p.post, p.similarity);
        }
        return out;
    };

    m.def(
        "top1_align",
        [pair_tuples](const std::vector<std::vector<double>>& headlines,
                      const std::vector<std::vector<double>>& posts) {
            return pair_tuples(top1_align(vectors_from_lists(headlines),
                                          vectors_from_lists(posts)));
        },
        py::arg("headlines"), py::arg("posts"),
        "Per-headline best post as (headline, post, similarity) tuples.");

    m.def(
        "one_to_one_align",
        [pair_tuples](const std::vector<std::vector<double>>& headlines,
                      const std::vector<std::vector<double>>& posts) {
            auto [pairs, report] = one_to_one_align(vectors_from_lists(headlines),
                                                    vectors_from_lists(posts));
            py::dict rep;
            rep["pair_count"] = report.pair_count;
            rep["min_similarity"] = report.min_similarity;
            rep["max_similarity"] = report.max_similarity;
            rep["mean_similarity"] = report.mean_similarity;
            rep["unmatched_headlines"] = report.unmatched_headlines;
            return py::make_tuple(pair_tuples(pairs), rep);
        },
        py::arg("headlines"), py::arg("posts"),
        "Greedy one-to-one assignment plus its alignment report.");

    m.def(
        "one_to_one_align_matrix",
        [pair_tuples](const std::vector<std::vector<double>>& sim) {
            auto [pairs, report] = one_to_one_align_matrix(sim);
            return pair_tuples(pairs);
        },
        py::arg("similarity_matrix"));

    m.def(
        "metrics_from_counts",
        [](std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) {
            return metric_row_dict(metrics_from_counts(ConfusionCounts{tp, fp, tn, fn}));
        },
        py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"),
        "Accuracy/precision/recall/F1 with degenerate-denominator flags.");

    m.def(
        "style_distribution",
        [](const std::vector<std::string>& styles) {
            std::vector<std::pair<std::string, double>> out;
            for (const StyleShare& share : style_distribution(styles)) {
                out.emplace_back(share.style, share.percent);
            }
            return out;
        },
        py::arg("styles"),
        "Percentage share per style (one decimal, largest-remainder corrected).");

    m.def("styles", [] {
        std::vector<std::string> out;
        for (StyleLabel s : kAllStyles) {
            out.emplace_back(to_string(s));
        }
        return out;
    });
}
