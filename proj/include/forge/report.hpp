#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "forge/core_types.hpp"

namespace forge::report {

struct AblationFlags {
    bool webnlg = true;  // every configuration trains on WebNLG
    bool ws1 = false;
    bool st1 = false;
    bool cl = false;
};

struct EvalGroup {
    AblationFlags flags;
    Split split = Split::test_seen;
    std::filesystem::path hyp;
    std::vector<std::filesystem::path> refs;
};

struct AblationRow {
    AblationFlags flags;
    Split split = Split::test_seen;
    double bleu = 0.0;    // 0-100
    double meteor = 0.0;  // 0-1
    double chrf = 0.0;    // 0-100
};

struct CorpusScores {
    double bleu = 0.0;
    double meteor = 0.0;
    double chrf = 0.0;
    std::size_t segments = 0;
};

/// Scores a hypothesis corpus against per-segment reference sets: corpus
/// BLEU from merged statistics, macro-averaged METEOR and chrF++.
CorpusScores score_corpus(const std::vector<std::string>& hyps,
                          const std::vector<std::vector<std::string>>& refs_per_segment,
                          bool lowercase = false);

/// Groups records with identical linearized triplesets into one
/// multi-reference item each, in first-occurrence order.
std::vector<std::vector<std::string>> grouped_references(
    const std::vector<PairRecord>& records);

/// Scores every group; rows come back sorted by flags then split,
/// independent of input order. Missing files raise forge::IoError.
std::vector<AblationRow> build_report(const std::vector<EvalGroup>& groups,
                                      bool lowercase = false);

/// Tab-separated table: webnlg, ws1, st1, cl, split, BLEU, METEOR, chrf++.
std::string report_tsv(const std::vector<AblationRow>& rows);

/// JSON rows plus best/second-best marks per split and metric. The BLEURT
/// column is always "n/a"; this toolkit never fabricates it.
std::string report_json(const std::vector<AblationRow>& rows);

/// (new - base) / base * 100. Callers print it to two decimals.
double relative_increase(double base, double new_value);

std::vector<EvalGroup> load_groups(const std::filesystem::path& path);

}  // namespace forge::report
