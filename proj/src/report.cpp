#include "forge/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"
#include "forge/metrics.hpp"
#include "forge/serializer.hpp"
#include "forge/subword.hpp"
#include "forge/unicode.hpp"

namespace forge::report {

using ordered_json = nlohmann::ordered_json;

CorpusScores score_corpus(const std::vector<std::string>& hyps,
                          const std::vector<std::vector<std::string>>& refs_per_segment,
                          bool lowercase) {
    if (hyps.size() != refs_per_segment.size())
        throw DataError("hypothesis and reference segment counts differ (" +
                        std::to_string(hyps.size()) + " vs " +
                        std::to_string(refs_per_segment.size()) + ")");
    CorpusScores scores;
    scores.segments = hyps.size();
    if (hyps.empty()) return scores;

    metrics::BleuStats merged;
    double meteor_sum = 0.0;
    double chrf_sum = 0.0;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        std::string hyp = lowercase ? uni::lowercase(hyps[i]) : hyps[i];
        std::vector<std::string> refs;
        for (const auto& r : refs_per_segment[i]) {
            std::string text = lowercase ? uni::lowercase(r) : r;
            if (!trim(text).empty()) refs.push_back(std::move(text));
        }
        if (refs.empty())
            throw DataError("segment " + std::to_string(i + 1) + " has no reference");

        auto hyp_tokens = subword::word_tokenize(hyp);
        std::vector<metrics::Tokens> ref_tokens;
        ref_tokens.reserve(refs.size());
        for (const auto& r : refs) ref_tokens.push_back(subword::word_tokenize(r));

        if (hyp_tokens.empty()) {
            // empty hypothesis line: zero matches, shortest reference length
            metrics::BleuStats empty_stats;
            auto shortest = std::min_element(
                ref_tokens.begin(), ref_tokens.end(),
                [](const auto& a, const auto& b) { return a.size() < b.size(); });
            empty_stats.closest_ref_len = static_cast<std::int64_t>(shortest->size());
            merged = metrics::merge_stats(merged, empty_stats);
        } else {
            merged = metrics::merge_stats(merged, metrics::bleu_stats(hyp_tokens, ref_tokens));
            meteor_sum += metrics::meteor_simplified(hyp_tokens, ref_tokens);
        }
        chrf_sum += metrics::chrf_pp(hyp, refs);
    }
    scores.bleu = merged.hyp_len > 0 ? metrics::bleu_corpus(merged) : 0.0;
    scores.meteor = meteor_sum / static_cast<double>(hyps.size());
    scores.chrf = chrf_sum / static_cast<double>(hyps.size());
    return scores;
}

std::vector<std::vector<std::string>> grouped_references(
    const std::vector<PairRecord>& records) {
    std::vector<std::vector<std::string>> groups;
    std::map<std::string, std::size_t> index_by_key;
    for (const auto& rec : records) {
        std::string key = serializer::linearize_tripleset(rec.tripleset);
        auto [it, inserted] = index_by_key.emplace(key, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(rec.verbalization.text);
    }
    return groups;
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::array<int, 4> flag_key(const AblationFlags& f) {
    return {f.webnlg ? 0 : 1, f.ws1 ? 1 : 0, f.st1 ? 1 : 0, f.cl ? 1 : 0};
}

}  // namespace

std::vector<AblationRow> build_report(const std::vector<EvalGroup>& groups,
                                      bool lowercase) {
    std::vector<AblationRow> rows;
    rows.reserve(groups.size());
    for (const auto& group : groups) {
        if (group.refs.empty())
            throw DataError("report group has no reference files");
        auto hyps = read_lines(group.hyp);
        std::vector<std::vector<std::string>> refs(hyps.size());
        for (const auto& ref_path : group.refs) {
            auto ref_lines = read_lines(ref_path);
            if (ref_lines.size() != hyps.size())
                throw DataError("reference " + ref_path.string() + " has " +
                                std::to_string(ref_lines.size()) + " lines, expected " +
                                std::to_string(hyps.size()));
            for (std::size_t i = 0; i < hyps.size(); ++i)
                refs[i].push_back(ref_lines[i]);
        }
        CorpusScores scores = score_corpus(hyps, refs, lowercase);
        rows.push_back({group.flags, group.split, scores.bleu, scores.meteor, scores.chrf});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const AblationRow& a, const AblationRow& b) {
                         auto ka = flag_key(a.flags), kb = flag_key(b.flags);
                         if (ka != kb) return ka < kb;
                         return static_cast<int>(a.split) < static_cast<int>(b.split);
                     });
    return rows;
}

namespace {

std::string fixed(double value, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << value;
    return os.str();
}

}  // namespace

std::string report_tsv(const std::vector<AblationRow>& rows) {
    std::string out = "webnlg\tws1\tst1\tcl\tsplit\tBLEU\tMETEOR\tchrf++\n";
    for (const auto& row : rows) {
        out += row.flags.webnlg ? "1\t" : "0\t";
        out += row.flags.ws1 ? "1\t" : "0\t";
        out += row.flags.st1 ? "1\t" : "0\t";
        out += row.flags.cl ? "1\t" : "0\t";
        out += std::string(to_string(row.split)) + "\t";
        out += fixed(row.bleu, 2) + "\t" + fixed(row.meteor, 3) + "\t" +
               fixed(row.chrf, 2) + "\n";
    }
    return out;
}

std::string report_json(const std::vector<AblationRow>& rows) {
    ordered_json out;
    out["rows"] = ordered_json::array();
    for (const auto& row : rows) {
        out["rows"].push_back({
            {"webnlg", row.flags.webnlg},
            {"ws1", row.flags.ws1},
            {"st1", row.flags.st1},
            {"cl", row.flags.cl},
            {"split", std::string(to_string(row.split))},
            {"bleu", row.bleu},
            {"meteor", row.meteor},
            {"chrf", row.chrf},
            {"bleurt", "n/a"},
        });
    }

    // relative BLEU increase over the plain-WebNLG baseline of each split
    std::map<Split, std::ptrdiff_t> baseline_by_split;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].flags.ws1 && !rows[i].flags.st1 && !rows[i].flags.cl &&
            !baseline_by_split.count(rows[i].split))
            baseline_by_split[rows[i].split] = static_cast<std::ptrdiff_t>(i);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto it = baseline_by_split.find(rows[i].split);
        if (it == baseline_by_split.end()) continue;
        const AblationRow& base = rows[static_cast<std::size_t>(it->second)];
        if (base.bleu <= 0.0 || it->second == static_cast<std::ptrdiff_t>(i)) continue;
        double rel = relative_increase(base.bleu, rows[i].bleu);
        out["rows"][i]["bleu_relative_increase"] = std::round(rel * 100.0) / 100.0;
    }

    // best and second-best row index per split and metric
    ordered_json highlights = ordered_json::object();
    std::map<std::string, std::vector<std::size_t>> rows_by_split;
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows_by_split[std::string(to_string(rows[i].split))].push_back(i);
    for (const auto& [split, indices] : rows_by_split) {
        ordered_json per_metric = ordered_json::object();
        auto mark = [&](const char* name, auto getter) {
            std::ptrdiff_t best = -1, second = -1;
            for (std::size_t i : indices) {
                double v = getter(rows[i]);
                if (best < 0 || v > getter(rows[static_cast<std::size_t>(best)])) {
                    second = best;
                    best = static_cast<std::ptrdiff_t>(i);
                } else if (second < 0 ||
                           v > getter(rows[static_cast<std::size_t>(second)])) {
                    second = static_cast<std::ptrdiff_t>(i);
                }
            }
            ordered_json entry;
            entry["best"] = best;
            if (second >= 0) entry["second"] = second;
            per_metric[name] = entry;
        };
        mark("bleu", [](const AblationRow& r) { return r.bleu; });
        mark("meteor", [](const AblationRow& r) { return r.meteor; });
        mark("chrf", [](const AblationRow& r) { return r.chrf; });
        highlights[split] = per_metric;
    }
    out["highlights"] = highlights;
    return out.dump(2);
}

double relative_increase(double base, double new_value) {
    if (base <= 0.0) throw DataError("relative increase needs a positive base score");
    return (new_value - base) / base * 100.0;
}

std::vector<EvalGroup> load_groups(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw DataError(path.string() + ": expected a JSON array");

    std::vector<EvalGroup> groups;
    for (const auto& g : doc) {
        EvalGroup group;
        if (g.contains("flags")) {
            const auto& f = g["flags"];
            group.flags.webnlg = f.value("webnlg", true);
            group.flags.ws1 = f.value("ws1", false);
            group.flags.st1 = f.value("st1", false);
            group.flags.cl = f.value("cl", false);
        }
        if (!group.flags.webnlg)
            throw DataError("the webnlg flag is always true; every run trains on it");
        auto split = split_from_string(g.value("split", "test_seen"));
        if (!split) throw DataError("unknown split in report group");
        group.split = *split;
        if (!g.contains("hyp")) throw DataError("report group is missing \"hyp\"");
        group.hyp = g["hyp"].get<std::string>();
        for (const auto& r : g.value("refs", ordered_json::array()))
            group.refs.emplace_back(r.get<std::string>());
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace forge::report
