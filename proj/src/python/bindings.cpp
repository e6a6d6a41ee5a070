#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forge/core_types.hpp"
#include "forge/corpus_filter.hpp"
#include "forge/curriculum.hpp"
#include "forge/errors.hpp"
#include "forge/metrics.hpp"
#include "forge/noiser.hpp"
#include "forge/report.hpp"
#include "forge/serializer.hpp"
#include "forge/subword.hpp"
#include "forge/triple_dedup.hpp"

namespace py = pybind11;
using namespace forge;

namespace {

using StrTriple = std::tuple<std::string, std::string, std::string>;

TripleSet tripleset_from_tuples(const std::vector<StrTriple>& triples) {
    TripleSet ts;
    for (const auto& [s, p, o] : triples) ts.triples.emplace_back(s, p, o);
    return ts;
}

std::vector<StrTriple> tuples_from_tripleset(const TripleSet& ts) {
    std::vector<StrTriple> out;
    for (const auto& t : ts.triples) out.emplace_back(t.subject, t.predicate, t.object);
    return out;
}

TaggedSentence tagged_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& tagged) {
    TaggedSentence sent;
    for (const auto& [surface, tag] : tagged) {
        auto upos = upos_from_string(tag);
        if (!upos) throw DataError("unknown POS tag \"" + tag + "\"");
        sent.tokens.emplace_back(surface, *upos);
    }
    return sent;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Corpus engineering and evaluation toolkit for RDF-to-text generation";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("word_tokenize", &subword::word_tokenize, py::arg("text"));
    m.def("detokenize", &subword::detokenize, py::arg("tokens"));

    m.def(
        "linearize",
        [](const std::vector<StrTriple>& triples) {
            return serializer::linearize_tripleset(tripleset_from_tuples(triples));
        },
        py::arg("triples"), "Flatten (subject, predicate, object) tuples into the "
                            "marker-token sequence");
    m.def(
        "delinearize",
        [](const std::string& seq) {
            return tuples_from_tripleset(serializer::delinearize(seq));
        },
        py::arg("sequence"));

    m.def(
        "tag_fallback",
        [](const std::vector<std::string>& tokens) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& tok : noiser::tag_fallback(tokens).tokens)
                out.emplace_back(tok.surface, std::string(to_string(tok.upos)));
            return out;
        },
        py::arg("tokens"));
    m.def(
        "corrupt",
        [](const std::string& sentence) {
            auto toks = subword::word_tokenize(sentence);
            return noiser::corrupt_sentence(noiser::tag_fallback(toks),
                                            noiser::NoiseConfig{});
        },
        py::arg("sentence"),
        "Corrupt a raw sentence using the fallback tagger and default noise config");
    m.def(
        "corrupt_tagged",
        [](const std::vector<std::pair<std::string, std::string>>& tagged) {
            return noiser::corrupt_sentence(tagged_from_pairs(tagged),
                                            noiser::NoiseConfig{});
        },
        py::arg("tagged_tokens"), "Corrupt (surface, tag) pairs");

    m.def(
        "filter_sentence",
        [](const std::string& sentence, std::size_t max_tokens) {
            filter::FilterConfig cfg;
            cfg.max_tokens = max_tokens;
            return std::string(filter::to_string(filter::filter_sentence(sentence, cfg)));
        },
        py::arg("sentence"), py::arg("max_tokens") = 50,
        "Returns \"kept\" or the rejection reason");

    m.def(
        "dedup_triples",
        [](const std::string& sentence, const std::vector<StrTriple>& candidates,
           std::size_t max_edit_distance, double bleu_threshold) {
            dedup::ExtractionRecord rec;
            rec.sentence = sentence;
            for (const auto& [s, p, o] : candidates) rec.candidates.emplace_back(s, p, o);
            return tuples_from_tripleset(dedup::dedup_tripleset(
                rec, dedup::DedupConfig{max_edit_distance, bleu_threshold}));
        },
        py::arg("sentence"), py::arg("candidates"), py::arg("max_edit_distance") = 2,
        py::arg("bleu_threshold") = 50.0);

    m.def("levenshtein", &metrics::levenshtein, py::arg("a"), py::arg("b"));
    m.def(
        "sentence_bleu",
        [](const std::string& hyp, const std::vector<std::string>& refs) {
            std::vector<metrics::Tokens> ref_tokens;
            for (const auto& r : refs) ref_tokens.push_back(subword::word_tokenize(r));
            return metrics::bleu_sentence_smoothed(subword::word_tokenize(hyp),
                                                   ref_tokens);
        },
        py::arg("hyp"), py::arg("refs"), "Smoothed sentence BLEU on the 0-100 scale");
    m.def(
        "chrf",
        [](const std::string& hyp, const std::vector<std::string>& refs) {
            return metrics::chrf_pp(hyp, refs);
        },
        py::arg("hyp"), py::arg("refs"));
    m.def(
        "meteor",
        [](const std::string& hyp, const std::vector<std::string>& refs) {
            std::vector<metrics::Tokens> ref_tokens;
            for (const auto& r : refs) ref_tokens.push_back(subword::word_tokenize(r));
            return metrics::meteor_simplified(subword::word_tokenize(hyp), ref_tokens);
        },
        py::arg("hyp"), py::arg("refs"));
    m.def(
        "corpus_scores",
        [](const std::vector<std::string>& hyps,
           const std::vector<std::vector<std::string>>& refs, bool lowercase) {
            auto scores = report::score_corpus(hyps, refs, lowercase);
            return py::dict(py::arg("bleu") = scores.bleu, py::arg("meteor") = scores.meteor,
                            py::arg("chrf") = scores.chrf,
                            py::arg("segments") = scores.segments);
        },
        py::arg("hyps"), py::arg("refs"), py::arg("lowercase") = false,
        "Corpus BLEU plus macro-averaged METEOR and chrF++");
    m.def("relative_increase", &report::relative_increase, py::arg("base"),
          py::arg("new_value"));

    py::class_<subword::BpeModel>(m, "BpeModel")
        .def_static(
            "learn",
            [](const std::vector<std::string>& tokens, std::size_t num_merges) {
                return subword::bpe_learn(tokens, num_merges);
            },
            py::arg("tokens"), py::arg("num_merges"))
        .def_static("load",
                    [](const std::string& path) { return subword::load_model(path); },
                    py::arg("path"))
        .def("save",
             [](const subword::BpeModel& model, const std::string& path) {
                 subword::save_model(model, path);
             },
             py::arg("path"))
        .def("apply", &subword::bpe_apply, py::arg("tokens"))
        .def("restrict",
             [](const subword::BpeModel& model, const std::vector<std::string>& tokens) {
                 return subword::build_transduction_vocab(model, tokens);
             },
             py::arg("reference_tokens"),
             "New model whose vocabulary is restricted to the pieces seen on the "
             "reference tokens")
        .def_property_readonly(
            "merges", [](const subword::BpeModel& model) { return model.merges; })
        .def_property_readonly("vocab", [](const subword::BpeModel& model) {
            return std::vector<std::string>(model.vocab.begin(), model.vocab.end());
        });
    m.def("bpe_undo", &subword::bpe_undo, py::arg("subwords"));

    m.def(
        "schedule_json",
        [](bool curriculum) {
            return curriculum::schedule_to_json(curriculum::make_schedule(curriculum));
        },
        py::arg("curriculum") = true);
}
