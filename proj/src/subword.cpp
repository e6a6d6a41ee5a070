#include "forge/subword.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "forge/core_types.hpp"
#include "forge/errors.hpp"
#include "forge/unicode.hpp"

namespace forge::subword {

namespace {

constexpr std::string_view kEow = "</w>";

bool is_splittable_punct(char c) {
    switch (c) {
        case '.': case ',': case ';': case ':': case '!': case '?':
        case '(': case ')': case '"':
            return true;
        default:
            return false;
    }
}

bool is_marker(std::string_view tok) {
    return std::find(kMarkerTokens.begin(), kMarkerTokens.end(), tok) !=
           kMarkerTokens.end();
}

bool is_protected(std::string_view tok) { return is_marker(tok) || tok == kUnkToken; }

bool model_protected(const BpeModel& model, const std::string& tok) {
    return model.protected_tokens.count(tok) > 0 || tok == kUnkToken;
}

}  // namespace

std::unordered_set<std::string> default_protected_tokens() {
    std::unordered_set<std::string> tokens;
    for (auto m : kMarkerTokens) tokens.emplace(m);
    return tokens;
}

std::vector<std::string> word_tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        std::string_view chunk(s.data() + i, j - i);
        i = j;

        if (is_protected(chunk)) {
            out.emplace_back(chunk);
            continue;
        }
        std::size_t b = 0, e = chunk.size();
        while (b < e && is_splittable_punct(chunk[b])) out.emplace_back(1, chunk[b++]);
        std::size_t tail_start = e;
        while (tail_start > b && is_splittable_punct(chunk[tail_start - 1])) --tail_start;
        if (tail_start > b) out.emplace_back(chunk.substr(b, tail_start - b));
        for (std::size_t k = tail_start; k < e; ++k) out.emplace_back(1, chunk[k]);
    }
    return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        bool no_space = out.empty() ||
                        (tok.size() == 1 && is_splittable_punct(tok[0]) && tok != "(" &&
                         tok != "\"") ||
                        (i > 0 && tokens[i - 1] == "(");
        if (!no_space) out.push_back(' ');
        out += tok;
    }
    return out;
}

namespace {

using Symbols = std::vector<std::string>;
using MergePair = std::pair<std::string, std::string>;

struct PairHash {
    std::size_t operator()(const MergePair& p) const {
        std::size_t h1 = std::hash<std::string>{}(p.first);
        std::size_t h2 = std::hash<std::string>{}(p.second);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

Symbols initial_symbols(const std::string& word) {
    std::u32string cps = uni::decode_utf8(word);
    Symbols syms;
    syms.reserve(cps.size());
    for (char32_t cp : cps) {
        std::string s;
        uni::append_utf8(s, cp);
        syms.push_back(std::move(s));
    }
    syms.back() += kEow;
    return syms;
}

// One left-to-right pass merging all non-overlapping occurrences of `pair`.
bool merge_once(Symbols& syms, const MergePair& pair) {
    bool changed = false;
    Symbols out;
    out.reserve(syms.size());
    std::size_t i = 0;
    while (i < syms.size()) {
        if (i + 1 < syms.size() && syms[i] == pair.first && syms[i + 1] == pair.second) {
            out.push_back(syms[i] + syms[i + 1]);
            i += 2;
            changed = true;
        } else {
            out.push_back(std::move(syms[i]));
            ++i;
        }
    }
    syms = std::move(out);
    return changed;
}

std::vector<std::string> render_pieces(const Symbols& syms, const std::string& marker) {
    std::vector<std::string> pieces;
    pieces.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) {
        std::string piece = syms[i];
        if (i + 1 == syms.size()) {
            // strip the end-of-word suffix; it never leaves the model
            piece.resize(piece.size() - kEow.size());
        } else {
            piece += marker;
        }
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

struct LearnState {
    std::vector<Symbols> words;
    std::vector<std::int64_t> freqs;
    std::unordered_map<MergePair, std::int64_t, PairHash> pair_counts;
    std::unordered_map<MergePair, std::unordered_set<std::size_t>, PairHash> pair_words;

    // lazy max-heap; entries are (count, pair, generation snapshot)
    struct Entry {
        std::int64_t count;
        MergePair pair;
        bool operator<(const Entry& other) const {
            if (count != other.count) return count < other.count;
            return pair > other.pair;  // smaller pair wins ties
        }
    };
    std::priority_queue<Entry> heap;

    void add_pairs(std::size_t w, std::int64_t sign) {
        const Symbols& syms = words[w];
        for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
            MergePair p{syms[i], syms[i + 1]};
            auto& c = pair_counts[p];
            c += sign * freqs[w];
            if (sign > 0) {
                pair_words[p].insert(w);
                heap.push({c, p});
            } else {
                heap.push({c, p});
            }
        }
    }
};

}  // namespace

BpeModel bpe_learn(const std::vector<std::string>& corpus_tokens, std::size_t num_merges) {
    if (corpus_tokens.empty()) throw DataError("bpe_learn needs a non-empty corpus");

    BpeModel model;
    std::map<std::string, std::int64_t> word_freq;
    for (const auto& tok : corpus_tokens) {
        if (tok.empty() || model_protected(model, tok)) continue;
        ++word_freq[tok];
    }
    if (word_freq.empty()) {
        // corpus of markers only; nothing to learn
        model.vocab = model.protected_tokens;
        model.vocab.emplace(kUnkToken);
        return model;
    }

    LearnState st;
    st.words.reserve(word_freq.size());
    for (const auto& [word, freq] : word_freq) {
        st.words.push_back(initial_symbols(word));
        st.freqs.push_back(freq);
    }
    for (std::size_t w = 0; w < st.words.size(); ++w) st.add_pairs(w, +1);

    while (model.merges.size() < num_merges && !st.heap.empty()) {
        auto top = st.heap.top();
        st.heap.pop();
        auto it = st.pair_counts.find(top.pair);
        if (it == st.pair_counts.end() || it->second != top.count) continue;  // stale
        if (top.count < 2) break;

        model.merges.push_back(top.pair);
        auto affected = st.pair_words[top.pair];
        for (std::size_t w : affected) {
            st.add_pairs(w, -1);
            merge_once(st.words[w], top.pair);
            st.add_pairs(w, +1);
        }
        st.pair_counts.erase(top.pair);
        st.pair_words.erase(top.pair);
    }

    for (const auto& syms : st.words)
        for (auto& piece : render_pieces(syms, model.continuation_marker))
            model.vocab.insert(std::move(piece));
    model.vocab.insert(model.protected_tokens.begin(), model.protected_tokens.end());
    model.vocab.emplace(kUnkToken);
    return model;
}

namespace {

std::vector<std::string> segment_token(
    const BpeModel& model,
    const std::unordered_map<MergePair, std::size_t, PairHash>& ranks,
    const std::string& token) {
    Symbols syms = initial_symbols(token);
    while (syms.size() > 1) {
        std::size_t best_rank = ranks.size();
        for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
            auto it = ranks.find({syms[i], syms[i + 1]});
            if (it != ranks.end() && it->second < best_rank) best_rank = it->second;
        }
        if (best_rank == ranks.size()) break;
        merge_once(syms, model.merges[best_rank]);
    }
    return render_pieces(syms, model.continuation_marker);
}

std::vector<std::string> apply_impl(const BpeModel& model,
                                    const std::vector<std::string>& tokens,
                                    bool replay) {
    std::unordered_map<MergePair, std::size_t, PairHash> ranks;
    if (!replay)
        for (std::size_t r = 0; r < model.merges.size(); ++r) ranks[model.merges[r]] = r;

    std::unordered_map<std::string, std::vector<std::string>> cache;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        if (tok.empty()) continue;
        if (model_protected(model, tok)) {
            out.push_back(tok);
            continue;
        }
        auto it = cache.find(tok);
        if (it == cache.end()) {
            std::vector<std::string> pieces;
            if (replay) {
                Symbols syms = initial_symbols(tok);
                for (const auto& merge : model.merges) merge_once(syms, merge);
                pieces = render_pieces(syms, model.continuation_marker);
            } else {
                pieces = segment_token(model, ranks, tok);
            }
            if (!model.vocab.empty())
                for (auto& p : pieces)
                    if (!model.vocab.count(p)) p = kUnkToken;
            it = cache.emplace(tok, std::move(pieces)).first;
        }
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

}  // namespace

std::vector<std::string> bpe_apply(const BpeModel& model,
                                   const std::vector<std::string>& tokens) {
    return apply_impl(model, tokens, false);
}

std::vector<std::string> bpe_apply_replay(const BpeModel& model,
                                          const std::vector<std::string>& tokens) {
    return apply_impl(model, tokens, true);
}

std::vector<std::string> bpe_undo(const std::vector<std::string>& subwords) {
    std::vector<std::string> out;
    std::string pending;
    bool continuing = false;
    const std::string marker = "@@";
    for (const auto& piece : subwords) {
        if (piece.size() >= marker.size() && !is_protected(piece) &&
            piece.compare(piece.size() - marker.size(), marker.size(), marker) == 0) {
            pending += piece.substr(0, piece.size() - marker.size());
            continuing = true;
        } else {
            pending += piece;
            out.push_back(std::move(pending));
            pending.clear();
            continuing = false;
        }
    }
    if (continuing)
        throw DataError("dangling continuation marker at end of subword sequence");
    return out;
}

BpeModel build_transduction_vocab(const BpeModel& model,
                                  const std::vector<std::string>& reference_tokens) {
    if (reference_tokens.empty())
        throw DataError("transduction vocabulary needs non-empty reference text");
    BpeModel restricted = model;
    restricted.vocab.clear();

    BpeModel unrestricted = model;
    unrestricted.vocab.clear();  // no <unk> mapping while collecting pieces
    for (auto& piece : bpe_apply(unrestricted, reference_tokens))
        restricted.vocab.insert(std::move(piece));
    restricted.vocab.insert(restricted.protected_tokens.begin(),
                            restricted.protected_tokens.end());
    restricted.vocab.emplace(kUnkToken);
    return restricted;
}

void save_model(const BpeModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file for writing: " + path.string());
    out << "#forge-bpe v1\n";
    for (const auto& [l, r] : model.merges) out << l << ' ' << r << '\n';
    if (!out) throw IoError("failed writing model file: " + path.string());
}

BpeModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "#forge-bpe v1")
        throw DataError("bad model header in " + path.string() +
                        " (expected \"#forge-bpe v1\")");
    BpeModel model;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto sp = line.find(' ');
        if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size() ||
            line.find(' ', sp + 1) != std::string::npos)
            throw DataError("malformed merge at " + path.string() + ":" +
                            std::to_string(lineno));
        model.merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
    }
    return model;
}

void save_vocab(const BpeModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open vocab file for writing: " + path.string());
    std::vector<std::string> sorted(model.vocab.begin(), model.vocab.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& piece : sorted) out << piece << '\n';
    if (!out) throw IoError("failed writing vocab file: " + path.string());
}

void load_vocab(BpeModel& model, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vocab file: " + path.string());
    model.vocab.clear();
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) model.vocab.insert(line);
}

}  // namespace forge::subword
