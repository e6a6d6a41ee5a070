#include "forge/triple_dedup.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"
#include "forge/metrics.hpp"
#include "forge/subword.hpp"

namespace forge::dedup {

using ordered_json = nlohmann::ordered_json;

std::string extraction_to_jsonl(const ExtractionRecord& rec) {
    ordered_json candidates = ordered_json::array();
    for (const auto& t : rec.candidates)
        candidates.push_back({{"s", t.subject}, {"p", t.predicate}, {"o", t.object}});
    return ordered_json{{"sentence", rec.sentence}, {"candidates", std::move(candidates)}}
        .dump();
}

ExtractionRecord extraction_from_json_line(std::string_view line) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("sentence") || !obj.contains("candidates"))
        throw DataError("extraction record needs \"sentence\" and \"candidates\"");
    ExtractionRecord rec;
    rec.sentence = obj["sentence"].get<std::string>();
    if (trim(rec.sentence).empty()) throw DataError("extraction sentence is empty");
    if (!obj["candidates"].is_array())
        throw DataError("\"candidates\" must be an array");
    for (const auto& t : obj["candidates"]) {
        if (!t.is_object() || !t.contains("s") || !t.contains("p") || !t.contains("o"))
            throw DataError("candidate must be an object with \"s\", \"p\" and \"o\"");
        rec.candidates.emplace_back(t["s"].get<std::string>(), t["p"].get<std::string>(),
                                    t["o"].get<std::string>());
    }
    return rec;
}

namespace {

void append_normalized(std::string& out, const std::string& field) {
    std::size_t i = 0;
    while (i < field.size()) {
        while (i < field.size() && std::isspace(static_cast<unsigned char>(field[i]))) ++i;
        if (i >= field.size()) break;
        std::size_t j = i;
        while (j < field.size() && !std::isspace(static_cast<unsigned char>(field[j]))) ++j;
        if (!out.empty()) out.push_back(' ');
        out.append(field, i, j - i);
        i = j;
    }
}

std::size_t whitespace_token_count(const std::string& s) {
    std::size_t n = 0;
    bool in_tok = false;
    for (char c : s) {
        bool sp = std::isspace(static_cast<unsigned char>(c));
        if (!sp && !in_tok) ++n;
        in_tok = !sp;
    }
    return n;
}

double symmetric_bleu(const std::string& a, const std::string& b) {
    auto ta = subword::word_tokenize(a);
    auto tb = subword::word_tokenize(b);
    double ab = metrics::bleu_sentence_smoothed(ta, {tb});
    double ba = metrics::bleu_sentence_smoothed(tb, {ta});
    return std::max(ab, ba);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string linearize_for_compare(const Triple& t) {
    std::string out;
    append_normalized(out, t.subject);
    append_normalized(out, t.predicate);
    append_normalized(out, t.object);
    return out;
}

PairVerdict is_redundant_pair(const Triple& a, const Triple& b, const DedupConfig& cfg) {
    if (cfg.bleu_threshold < 0.0 || cfg.bleu_threshold > 100.0)
        throw DataError("bleu_threshold must be within [0, 100]");

    std::string la = linearize_for_compare(a);
    std::string lb = linearize_for_compare(b);

    PairVerdict v;
    v.by_containment = la.find(lb) != std::string::npos ||
                       lb.find(la) != std::string::npos;
    v.by_edit_distance = metrics::levenshtein(la, lb) <= cfg.max_edit_distance;
    v.by_bleu = symmetric_bleu(la, lb) > cfg.bleu_threshold;
    v.redundant = v.by_containment || v.by_edit_distance || v.by_bleu;
    if (v.redundant) {
        // the longest triple carries the most sentence coverage
        v.keep_index = whitespace_token_count(lb) > whitespace_token_count(la) ? 1 : 0;
    }
    return v;
}

TripleSet dedup_tripleset(const ExtractionRecord& rec, const DedupConfig& cfg) {
    const auto& cands = rec.candidates;
    if (cands.empty()) throw DataError("extraction record has no candidate triples");

    const std::size_t n = cands.size();
    UnionFind groups(n);
    std::vector<bool> pair_bleu_flag;  // parallel to redundant pairs found
    std::vector<std::pair<std::size_t, std::size_t>> redundant_pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            PairVerdict v = is_redundant_pair(cands[i], cands[j], cfg);
            if (v.redundant) {
                groups.unite(i, j);
                redundant_pairs.emplace_back(i, j);
                pair_bleu_flag.push_back(v.by_bleu);
            }
        }

    std::vector<bool> group_by_bleu(n, false);
    for (std::size_t k = 0; k < redundant_pairs.size(); ++k)
        if (pair_bleu_flag[k]) group_by_bleu[groups.find(redundant_pairs[k].first)] = true;

    // survivor per group: BLEU-vs-sentence overrides the length rule
    auto sentence_tokens = subword::word_tokenize(rec.sentence);
    std::vector<std::ptrdiff_t> survivor(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = groups.find(i);
        if (survivor[root] < 0) {
            survivor[root] = static_cast<std::ptrdiff_t>(i);
            continue;
        }
        auto cur = static_cast<std::size_t>(survivor[root]);
        if (group_by_bleu[root]) {
            double cur_score = metrics::bleu_sentence_smoothed(
                subword::word_tokenize(linearize_for_compare(cands[cur])),
                {sentence_tokens});
            double cand_score = metrics::bleu_sentence_smoothed(
                subword::word_tokenize(linearize_for_compare(cands[i])),
                {sentence_tokens});
            if (cand_score > cur_score) survivor[root] = static_cast<std::ptrdiff_t>(i);
        } else {
            std::size_t cur_len =
                whitespace_token_count(linearize_for_compare(cands[cur]));
            std::size_t cand_len =
                whitespace_token_count(linearize_for_compare(cands[i]));
            if (cand_len > cur_len) survivor[root] = static_cast<std::ptrdiff_t>(i);
        }
    }

    std::vector<bool> keep(n, false);
    for (std::size_t i = 0; i < n; ++i)
        if (survivor[i] >= 0) keep[static_cast<std::size_t>(survivor[i])] = true;

    TripleSet out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.triples.push_back(cands[i]);
    return out;
}

St1Result build_st1(const std::vector<ExtractionRecord>& records,
                    const DedupConfig& cfg) {
    St1Result result;
    result.records.reserve(records.size());
    for (const auto& rec : records) {
        try {
            TripleSet ts = dedup_tripleset(rec, cfg);
            result.records.emplace_back(std::move(ts), Verbalization(rec.sentence, 0),
                                        "augmented", Split::train);
        } catch (const DataError&) {
            ++result.failures;
        }
    }
    return result;
}

}  // namespace forge::dedup
