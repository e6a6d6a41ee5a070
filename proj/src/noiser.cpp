#include "forge/noiser.hpp"

#include <unordered_map>

#include "forge/errors.hpp"
#include "forge/unicode.hpp"

namespace forge::noiser {

namespace {

const std::unordered_set<std::string>& be_have_do_forms() {
    static const std::unordered_set<std::string> forms{
        "am", "is", "are", "was", "were", "be", "been", "being",
        "has", "have", "had", "having", "do", "does", "did", "doing", "done",
    };
    return forms;
}

const std::unordered_map<std::string, Upos>& closed_class_lexicon() {
    static const std::unordered_map<std::string, Upos> lex = [] {
        std::unordered_map<std::string, Upos> m;
        auto add = [&m](std::initializer_list<const char*> words, Upos tag) {
            for (const char* w : words) m.emplace(w, tag);
        };
        add({"the", "a", "an", "this", "that", "these", "those", "each", "every",
             "either", "neither", "some", "any", "no", "all", "both", "another",
             "such"},
            Upos::DET);
        add({"of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
             "onto", "over", "under", "about", "after", "before", "between",
             "during", "through", "against", "among", "around", "above", "below",
             "near", "off", "within", "without", "upon", "toward", "towards",
             "across", "behind", "beyond", "despite", "except", "inside",
             "outside", "per", "since", "until", "via", "amid", "along",
             "beneath", "besides"},
            Upos::ADP);
        add({"i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
             "us", "them", "myself", "yourself", "himself", "herself", "itself",
             "ourselves", "yourselves", "themselves", "who", "whom", "whose",
             "which", "what", "something", "anything", "nothing", "everything",
             "someone", "anyone", "everyone", "somebody", "anybody", "nobody",
             "everybody", "my", "your", "his", "its", "our", "their", "mine",
             "yours", "hers", "ours", "theirs"},
            Upos::PRON);
        add({"and", "or", "but", "nor", "plus"}, Upos::CCONJ);
        add({"because", "if", "while", "although", "though", "unless", "whereas",
             "whether", "as", "than"},
            Upos::SCONJ);
        // modals; be/have/do stay VERB so copulas survive corruption
        add({"can", "could", "may", "might", "must", "shall", "should", "will",
             "would", "ought"},
            Upos::AUX);
        add({"not"}, Upos::PART);
        add({"oh", "hey", "wow", "yeah", "yes"}, Upos::INTJ);
        add({"few", "many", "several", "own", "same", "other"}, Upos::ADJ);
        add({"very", "too", "so", "quite", "rather", "also", "just", "only",
             "even", "again", "always", "never", "now", "then", "here", "there",
             "soon", "still", "almost", "already", "perhaps", "often",
             "sometimes", "usually"},
            Upos::ADV);
        for (const auto& w : be_have_do_forms()) m.emplace(w, Upos::VERB);
        return m;
    }();
    return lex;
}

bool all_punct(const std::string& tok) {
    std::size_t pos = 0;
    char32_t cp;
    while (pos < tok.size()) {
        std::size_t next = uni::decode_one(tok, pos, cp);
        if (next == pos) return false;
        if (uni::is_letter(cp) || uni::is_ascii_digit(cp)) return false;
        if (cp >= 0x80) return false;  // only ASCII punctuation counts
        if (std::isalnum(static_cast<unsigned char>(static_cast<char>(cp)))) return false;
        pos = next;
    }
    return pos > 0;
}

bool has_digit(const std::string& tok) {
    for (char c : tok)
        if (c >= '0' && c <= '9') return true;
    return false;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

TaggedSentence tag_fallback(const std::vector<std::string>& tokens) {
    if (tokens.empty()) throw DataError("tag_fallback needs a non-empty token sequence");
    TaggedSentence out;
    out.tokens.reserve(tokens.size());
    for (const auto& tok : tokens) {
        std::string lower = uni::lowercase(tok);
        Upos tag = Upos::NOUN;
        const auto& lex = closed_class_lexicon();
        if (auto it = lex.find(lower); it != lex.end()) {
            tag = it->second;
        } else if (has_digit(tok)) {
            tag = Upos::NUM;
        } else if (all_punct(tok)) {
            tag = Upos::PUNCT;
        } else if (ends_with(lower, "ly")) {
            tag = Upos::ADV;
        } else if (ends_with(lower, "ed") || ends_with(lower, "ing")) {
            tag = Upos::VERB;
        } else if (ends_with(lower, "ous") || ends_with(lower, "ful") ||
                   ends_with(lower, "ive")) {
            tag = Upos::ADJ;
        }
        out.tokens.emplace_back(tok, tag);
    }
    return out;
}

std::string corrupt_sentence(const TaggedSentence& s, const NoiseConfig& cfg) {
    if (s.tokens.empty()) throw DataError("cannot corrupt an empty sentence");
    if (cfg.keep_tags.empty()) throw DataError("keep_tags must be non-empty");

    std::vector<const std::string*> kept;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const TaggedToken& tok = s.tokens[i];
        if (!cfg.keep_tags.count(tok.upos)) continue;
        std::string lower = uni::lowercase(tok.surface);
        if (cfg.modal_lexicon.count(lower)) continue;
        if (tok.upos == Upos::AUX) continue;
        if (tok.upos == Upos::VERB && be_have_do_forms().count(lower) &&
            i + 1 < s.tokens.size() &&
            (s.tokens[i + 1].upos == Upos::VERB || s.tokens[i + 1].upos == Upos::AUX))
            continue;  // auxiliary of a passive/perfect chain
        kept.push_back(&tok.surface);
    }
    if (kept.empty()) throw DataError("fully-corrupted sentence");

    std::string out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i) out.push_back(' ');
        out += *kept[i];
    }
    if (cfg.keep_terminal_period && s.tokens.back().surface == ".") out += " .";
    return out;
}

Ws1Pairs build_ws1_pairs(const std::vector<TaggedSentence>& sentences,
                         const NoiseConfig& cfg) {
    Ws1Pairs result;
    result.pairs.reserve(sentences.size());
    for (const auto& sent : sentences) {
        std::string original;
        for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
            if (i) original.push_back(' ');
            original += sent.tokens[i].surface;
        }
        try {
            result.pairs.emplace_back(corrupt_sentence(sent, cfg), std::move(original));
        } catch (const DataError&) {
            ++result.skipped;
        }
    }
    return result;
}

}  // namespace forge::noiser
