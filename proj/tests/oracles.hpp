// Independent reference implementations used to cross-check the library.
// These deliberately use different data structures and formula arrangements
// than the production code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "forge/subword.hpp"
#include "forge/unicode.hpp"

namespace oracle {

using Tokens = std::vector<std::string>;

inline std::map<std::vector<std::string>, long> ngram_counts(const Tokens& t, int n) {
    std::map<std::vector<std::string>, long> counts;
    for (int i = 0; i + n <= static_cast<int>(t.size()); ++i)
        ++counts[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
    return counts;
}

// Corpus BLEU by explicit n-gram enumeration; precisions combined with a
// pow of the product rather than log-space averaging.
inline double corpus_bleu(const std::vector<Tokens>& hyps,
                          const std::vector<std::vector<Tokens>>& refs) {
    long clipped[4] = {0, 0, 0, 0};
    long total[4] = {0, 0, 0, 0};
    long hyp_len = 0, ref_len = 0;
    for (std::size_t s = 0; s < hyps.size(); ++s) {
        const long h = static_cast<long>(hyps[s].size());
        hyp_len += h;
        long best = -1;
        for (const auto& r : refs[s]) {
            const long len = static_cast<long>(r.size());
            if (best < 0 || std::labs(len - h) < std::labs(best - h) ||
                (std::labs(len - h) == std::labs(best - h) && len < best))
                best = len;
        }
        ref_len += best;
        for (int n = 1; n <= 4; ++n) {
            std::map<std::vector<std::string>, long> max_ref;
            for (const auto& r : refs[s])
                for (const auto& [g, c] : ngram_counts(r, n))
                    if (c > max_ref[g]) max_ref[g] = c;
            for (const auto& [g, c] : ngram_counts(hyps[s], n)) {
                total[n - 1] += c;
                auto it = max_ref.find(g);
                if (it != max_ref.end()) clipped[n - 1] += std::min(c, it->second);
            }
        }
    }
    double product = 1.0;
    int orders = 0;
    for (int n = 0; n < 4; ++n) {
        if (total[n] == 0) continue;
        ++orders;
        if (clipped[n] == 0) return 0.0;
        product *= static_cast<double>(clipped[n]) / static_cast<double>(total[n]);
    }
    double bp = hyp_len > ref_len ? 1.0
                                  : std::exp(1.0 - static_cast<double>(ref_len) /
                                                       static_cast<double>(hyp_len));
    return 100.0 * bp * std::pow(product, 1.0 / orders);
}

// Full-matrix edit distance over codepoints.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::u32string ca = forge::uni::decode_utf8(a);
    std::u32string cb = forge::uni::decode_utf8(b);
    const std::size_t n = ca.size(), m = cb.size();
    std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1)});
    return d[n][m];
}

// chrF++ from the published formula: character n-grams n=1..6 with
// whitespace removed plus word n-grams n=1..2, F-beta with beta=2, averaged
// over the orders that occur on either side; harmonic-mean form of F.
inline double chrf_pp_single(const std::string& hyp, const std::string& ref) {
    auto strip = [](const std::string& s) {
        std::u32string out;
        for (char32_t cp : forge::uni::decode_utf8(s))
            if (cp != U' ' && cp != U'\t' && cp != U'\n' && cp != U'\r' && cp != U'\v' &&
                cp != U'\f')
                out.push_back(cp);
        return out;
    };
    auto char_grams = [](const std::u32string& s, int n) {
        std::map<std::u32string, long> counts;
        for (int i = 0; i + n <= static_cast<int>(s.size()); ++i)
            ++counts[s.substr(i, n)];
        return counts;
    };
    auto word_grams = [](const Tokens& t, int n) {
        std::map<std::vector<std::string>, long> counts;
        for (int i = 0; i + n <= static_cast<int>(t.size()); ++i)
            ++counts[std::vector<std::string>(t.begin() + i, t.begin() + i + n)];
        return counts;
    };
    auto f_from = [](long hyp_total, long ref_total, long matched) -> double {
        if (hyp_total == 0 || ref_total == 0 || matched == 0) return 0.0;
        double p = static_cast<double>(matched) / hyp_total;
        double r = static_cast<double>(matched) / ref_total;
        const double beta2 = 4.0;
        return (1.0 + beta2) / (beta2 / r + 1.0 / p);
    };

    std::u32string hc = strip(hyp), rc = strip(ref);
    Tokens hw = forge::subword::word_tokenize(hyp);
    Tokens rw = forge::subword::word_tokenize(ref);

    double f_sum = 0.0;
    int included = 0;
    for (int n = 1; n <= 6; ++n) {
        auto h = char_grams(hc, n), r = char_grams(rc, n);
        long hyp_total = 0, ref_total = 0, matched = 0;
        for (const auto& [g, c] : h) hyp_total += c;
        for (const auto& [g, c] : r) ref_total += c;
        for (const auto& [g, c] : h) {
            auto it = r.find(g);
            if (it != r.end()) matched += std::min(c, it->second);
        }
        if (hyp_total == 0 && ref_total == 0) continue;
        f_sum += f_from(hyp_total, ref_total, matched);
        ++included;
    }
    for (int n = 1; n <= 2; ++n) {
        auto h = word_grams(hw, n), r = word_grams(rw, n);
        long hyp_total = 0, ref_total = 0, matched = 0;
        for (const auto& [g, c] : h) hyp_total += c;
        for (const auto& [g, c] : r) ref_total += c;
        for (const auto& [g, c] : h) {
            auto it = r.find(g);
            if (it != r.end()) matched += std::min(c, it->second);
        }
        if (hyp_total == 0 && ref_total == 0) continue;
        f_sum += f_from(hyp_total, ref_total, matched);
        ++included;
    }
    return included > 0 ? 100.0 * f_sum / included : 0.0;
}

inline double chrf_pp(const std::string& hyp, const std::vector<std::string>& refs) {
    double best = 0.0;
    for (const auto& r : refs) best = std::max(best, chrf_pp_single(hyp, r));
    return best;
}

}  // namespace oracle
