#include "forge/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "forge/errors.hpp"
#include "forge/subword.hpp"
#include "forge/unicode.hpp"

namespace forge::metrics {

namespace {

// n-grams are keyed by their tokens joined with a separator byte that
// cannot occur inside a token.
constexpr char kSep = '\x1f';

std::unordered_map<std::string, std::int64_t> count_ngrams(const Tokens& tokens, int n) {
    std::unordered_map<std::string, std::int64_t> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int k = 1; k < n; ++k) {
            key.push_back(kSep);
            key += tokens[i + k];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

BleuStats bleu_stats(const Tokens& hyp, const std::vector<Tokens>& refs) {
    if (refs.empty()) throw DataError("bleu_stats needs at least one reference");
    if (hyp.empty()) throw DataError("bleu_stats needs a non-empty hypothesis");

    BleuStats stats;
    stats.hyp_len = static_cast<std::int64_t>(hyp.size());

    // closest reference length; ties go to the shorter reference
    std::int64_t best_len = static_cast<std::int64_t>(refs.front().size());
    for (const auto& ref : refs) {
        auto len = static_cast<std::int64_t>(ref.size());
        auto d = std::llabs(len - stats.hyp_len);
        auto best_d = std::llabs(best_len - stats.hyp_len);
        if (d < best_d || (d == best_d && len < best_len)) best_len = len;
    }
    stats.closest_ref_len = best_len;

    for (int n = 1; n <= kMaxBleuOrder; ++n) {
        auto hyp_counts = count_ngrams(hyp, n);
        std::int64_t possible = std::max<std::int64_t>(0, stats.hyp_len - n + 1);
        stats.hyp_ngrams[n - 1] = possible;
        if (hyp_counts.empty()) continue;

        std::unordered_map<std::string, std::int64_t> max_ref_counts;
        for (const auto& ref : refs)
            for (const auto& [gram, c] : count_ngrams(ref, n)) {
                auto& slot = max_ref_counts[gram];
                slot = std::max(slot, c);
            }
        std::int64_t clipped = 0;
        for (const auto& [gram, c] : hyp_counts) {
            auto it = max_ref_counts.find(gram);
            if (it != max_ref_counts.end()) clipped += std::min(c, it->second);
        }
        stats.clipped_matches[n - 1] = clipped;
    }
    return stats;
}

BleuStats merge_stats(const BleuStats& a, const BleuStats& b) {
    BleuStats out;
    for (int i = 0; i < kMaxBleuOrder; ++i) {
        out.clipped_matches[i] = a.clipped_matches[i] + b.clipped_matches[i];
        out.hyp_ngrams[i] = a.hyp_ngrams[i] + b.hyp_ngrams[i];
    }
    out.hyp_len = a.hyp_len + b.hyp_len;
    out.closest_ref_len = a.closest_ref_len + b.closest_ref_len;
    return out;
}

namespace {

double brevity_penalty(const BleuStats& stats) {
    if (stats.hyp_len > stats.closest_ref_len) return 1.0;
    return std::exp(1.0 - static_cast<double>(stats.closest_ref_len) /
                              static_cast<double>(stats.hyp_len));
}

double bleu_from_precisions(const BleuStats& stats, bool smooth) {
    if (stats.hyp_len <= 0) throw DataError("BLEU needs a non-empty hypothesis");
    int included = 0;
    for (int i = 0; i < kMaxBleuOrder; ++i)
        if (stats.hyp_ngrams[i] > 0) ++included;
    double log_sum = 0.0;
    int zeros = 0;
    for (int i = 0; i < kMaxBleuOrder; ++i) {
        if (stats.hyp_ngrams[i] <= 0) continue;  // order excluded, not zeroed
        double p;
        if (stats.clipped_matches[i] == 0) {
            if (!smooth) return 0.0;
            ++zeros;
            p = std::pow(0.5, zeros);
        } else {
            p = static_cast<double>(stats.clipped_matches[i]) /
                static_cast<double>(stats.hyp_ngrams[i]);
        }
        log_sum += std::log(p) / included;
    }
    return 100.0 * brevity_penalty(stats) * std::exp(log_sum);
}

}  // namespace

double bleu_corpus(const BleuStats& stats) { return bleu_from_precisions(stats, false); }

double bleu_sentence_smoothed(const Tokens& hyp, const std::vector<Tokens>& refs) {
    return bleu_from_precisions(bleu_stats(hyp, refs), true);
}

namespace {

constexpr int kChrfCharOrder = 6;
constexpr int kChrfWordOrder = 2;
constexpr double kChrfBeta = 2.0;

std::u32string strip_whitespace(std::string_view text) {
    std::u32string cps = uni::decode_utf8(text);
    std::u32string out;
    out.reserve(cps.size());
    for (char32_t cp : cps)
        if (!(cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\v' ||
              cp == U'\f'))
            out.push_back(cp);
    return out;
}

struct NgramF {
    std::int64_t hyp_total = 0;
    std::int64_t ref_total = 0;
    std::int64_t matched = 0;

    bool present() const { return hyp_total > 0 || ref_total > 0; }

    double f_beta() const {
        if (hyp_total == 0 || ref_total == 0) return 0.0;
        double p = static_cast<double>(matched) / static_cast<double>(hyp_total);
        double r = static_cast<double>(matched) / static_cast<double>(ref_total);
        double denom = kChrfBeta * kChrfBeta * p + r;
        if (denom == 0.0) return 0.0;
        return (1.0 + kChrfBeta * kChrfBeta) * p * r / denom;
    }
};

NgramF char_ngram_f(const std::u32string& hyp, const std::u32string& ref, int n) {
    NgramF out;
    std::unordered_map<std::u32string, std::int64_t> ref_counts;
    if (static_cast<int>(ref.size()) >= n) {
        out.ref_total = static_cast<std::int64_t>(ref.size()) - n + 1;
        for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[ref.substr(i, n)];
    }
    if (static_cast<int>(hyp.size()) >= n) {
        out.hyp_total = static_cast<std::int64_t>(hyp.size()) - n + 1;
        for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
            auto it = ref_counts.find(hyp.substr(i, n));
            if (it != ref_counts.end() && it->second > 0) {
                --it->second;
                ++out.matched;
            }
        }
    }
    return out;
}

NgramF word_ngram_f(const Tokens& hyp, const Tokens& ref, int n) {
    NgramF out;
    auto ref_counts = count_ngrams(ref, n);
    for (const auto& [gram, c] : ref_counts) out.ref_total += c;
    out.hyp_total =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(hyp.size()) - n + 1);
    for (const auto& [gram, c] : count_ngrams(hyp, n)) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) out.matched += std::min(c, it->second);
    }
    return out;
}

// Orders with no n-grams on either side are excluded from the average, so
// identical texts score exactly 100 regardless of length.
double chrf_single(std::string_view hyp, std::string_view ref) {
    std::u32string hyp_chars = strip_whitespace(hyp);
    std::u32string ref_chars = strip_whitespace(ref);
    Tokens hyp_words = subword::word_tokenize(std::string(hyp));
    Tokens ref_words = subword::word_tokenize(std::string(ref));

    double f_sum = 0.0;
    int included = 0;
    for (int n = 1; n <= kChrfCharOrder; ++n) {
        NgramF f = char_ngram_f(hyp_chars, ref_chars, n);
        if (!f.present()) continue;
        f_sum += f.f_beta();
        ++included;
    }
    for (int n = 1; n <= kChrfWordOrder; ++n) {
        NgramF f = word_ngram_f(hyp_words, ref_words, n);
        if (!f.present()) continue;
        f_sum += f.f_beta();
        ++included;
    }
    return included > 0 ? 100.0 * f_sum / included : 0.0;
}

}  // namespace

double chrf_pp(std::string_view hyp, const std::vector<std::string>& refs) {
    if (refs.empty()) throw DataError("chrF++ needs at least one reference");
    double best = 0.0;
    for (const auto& ref : refs) best = std::max(best, chrf_single(hyp, ref));
    return best;
}

namespace {

constexpr double kMeteorAlpha = 0.9;
constexpr double kMeteorBeta = 3.0;
constexpr double kMeteorGamma = 0.5;

double meteor_single(const Tokens& hyp, const Tokens& ref) {
    // Exact-match alignment, left to right over the hypothesis. Prefer the
    // reference position that extends the current chunk, otherwise the
    // leftmost unused occurrence.
    std::vector<bool> used(ref.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    bool prev_matched = false;
    std::size_t last_j = 0;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        std::size_t j = ref.size();
        if (prev_matched && last_j + 1 < ref.size() && !used[last_j + 1] &&
            ref[last_j + 1] == hyp[i]) {
            j = last_j + 1;
        } else {
            for (std::size_t k = 0; k < ref.size(); ++k)
                if (!used[k] && ref[k] == hyp[i]) {
                    j = k;
                    break;
                }
        }
        if (j < ref.size()) {
            used[j] = true;
            pairs.emplace_back(i, j);
            prev_matched = true;
            last_j = j;
        } else {
            prev_matched = false;
        }
    }
    if (pairs.empty()) return 0.0;

    std::size_t chunks = 1;
    for (std::size_t k = 1; k < pairs.size(); ++k)
        if (pairs[k].first != pairs[k - 1].first + 1 ||
            pairs[k].second != pairs[k - 1].second + 1)
            ++chunks;

    double m = static_cast<double>(pairs.size());
    double precision = m / static_cast<double>(hyp.size());
    double recall = m / static_cast<double>(ref.size());
    double fmean =
        precision * recall / (kMeteorAlpha * precision + (1.0 - kMeteorAlpha) * recall);
    double penalty =
        kMeteorGamma * std::pow(static_cast<double>(chunks) / m, kMeteorBeta);
    return fmean * (1.0 - penalty);
}

}  // namespace

double meteor_simplified(const Tokens& hyp, const std::vector<Tokens>& refs) {
    if (refs.empty()) throw DataError("METEOR needs at least one reference");
    if (hyp.empty()) throw DataError("METEOR needs a non-empty hypothesis");
    double best = 0.0;
    for (const auto& ref : refs)
        if (!ref.empty()) best = std::max(best, meteor_single(hyp, ref));
    return best;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    std::u32string ca = uni::decode_utf8(a);
    std::u32string cb = uni::decode_utf8(b);
    if (ca.empty()) return cb.size();
    if (cb.empty()) return ca.size();

    std::vector<std::size_t> prev(cb.size() + 1), cur(cb.size() + 1);
    for (std::size_t j = 0; j <= cb.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= ca.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= cb.size(); ++j) {
            std::size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[cb.size()];
}

}  // namespace forge::metrics
