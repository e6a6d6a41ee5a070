#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forge::metrics {

inline constexpr int kMaxBleuOrder = 4;

/// Sufficient statistics for corpus BLEU; merged additively across segments.
struct BleuStats {
    std::array<std::int64_t, kMaxBleuOrder> clipped_matches{};
    std::array<std::int64_t, kMaxBleuOrder> hyp_ngrams{};
    std::int64_t hyp_len = 0;
    std::int64_t closest_ref_len = 0;

    bool operator==(const BleuStats&) const = default;
};

using Tokens = std::vector<std::string>;

/// Clipped n-gram match counts of `hyp` against the reference set.
/// closest_ref_len picks the reference length nearest hyp_len, ties going
/// to the shorter reference.
BleuStats bleu_stats(const Tokens& hyp, const std::vector<Tokens>& refs);

BleuStats merge_stats(const BleuStats& a, const BleuStats& b);

/// Corpus BLEU on the 0-100 scale. Uniform weights over the orders that
/// have at least one possible hypothesis n-gram; any zero precision among
/// those orders yields 0.
double bleu_corpus(const BleuStats& stats);

/// Sentence BLEU with exponential smoothing: the k-th zero precision
/// (ascending n) is replaced by 1/2^k. Scale 0-100.
double bleu_sentence_smoothed(const Tokens& hyp, const std::vector<Tokens>& refs);

/// chrF++ on the 0-100 scale: character n-grams n=1..6 (whitespace removed)
/// plus word n-grams n=1..2, F-beta with beta=2, averaged over all orders.
/// Multi-reference by best per-reference score.
double chrf_pp(std::string_view hyp, const std::vector<std::string>& refs);

/// Exact-match METEOR variant on the 0-1 scale (alpha=0.9, beta=3,
/// gamma=0.5); no stemming or synonymy. Multi-reference by max.
double meteor_simplified(const Tokens& hyp, const std::vector<Tokens>& refs);

/// Unit-cost edit distance over codepoints.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace forge::metrics
