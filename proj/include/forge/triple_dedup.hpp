#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "forge/core_types.hpp"

namespace forge::dedup {

struct DedupConfig {
    std::size_t max_edit_distance = 2;
    double bleu_threshold = 50.0;  // 0-100 scale
};

/// One source sentence with the candidate triples an extractor produced
/// for it.
struct ExtractionRecord {
    std::string sentence;
    std::vector<Triple> candidates;
};

std::string extraction_to_jsonl(const ExtractionRecord& rec);
ExtractionRecord extraction_from_json_line(std::string_view line);

/// Subject, predicate and object joined by single spaces, inner whitespace
/// normalized.
std::string linearize_for_compare(const Triple& t);

struct PairVerdict {
    bool redundant = false;
    std::size_t keep_index = 0;  // 0 keeps `a`, 1 keeps `b`
    bool by_containment = false;
    bool by_edit_distance = false;
    bool by_bleu = false;
};

/// Redundant when one linearization contains the other, their edit
/// distance is within bounds, or their symmetric smoothed BLEU exceeds the
/// threshold. The longer triple (whitespace tokens) is kept; ties keep the
/// lower index.
PairVerdict is_redundant_pair(const Triple& a, const Triple& b, const DedupConfig& cfg);

/// Collapses redundancy groups (transitive closure over pairs) to one
/// survivor each, preserving input order. Groups touched by the BLEU
/// similarity test keep the triple scoring highest against the source
/// sentence; containment/edit-only groups keep the longest.
TripleSet dedup_tripleset(const ExtractionRecord& rec, const DedupConfig& cfg);

struct St1Result {
    std::vector<PairRecord> records;
    std::size_t failures = 0;
};

/// Deduped tripleset as source, sentence as target; category "augmented",
/// split train. Per-record failures are counted, not fatal.
St1Result build_st1(const std::vector<ExtractionRecord>& records,
                    const DedupConfig& cfg);

}  // namespace forge::dedup
