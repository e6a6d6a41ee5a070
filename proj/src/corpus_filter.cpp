#include "forge/corpus_filter.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "forge/core_types.hpp"
#include "forge/errors.hpp"
#include "forge/unicode.hpp"

namespace forge::filter {

std::string_view to_string(Reason r) {
    switch (r) {
        case Reason::kept: return "kept";
        case Reason::rejected_case: return "case";
        case Reason::rejected_terminal: return "terminal";
        case Reason::rejected_length: return "length";
        case Reason::rejected_charset: return "charset";
        case Reason::rejected_duplicate: return "duplicate";
    }
    return "kept";
}

void FilterStats::count(Reason r) {
    ++seen;
    switch (r) {
        case Reason::kept: ++kept; break;
        case Reason::rejected_case: ++rejected_case; break;
        case Reason::rejected_terminal: ++rejected_terminal; break;
        case Reason::rejected_length: ++rejected_length; break;
        case Reason::rejected_charset: ++rejected_charset; break;
        case Reason::rejected_duplicate: ++rejected_duplicate; break;
    }
}

bool FilterStats::balanced() const {
    return seen == kept + rejected_case + rejected_terminal + rejected_length +
                       rejected_charset + rejected_duplicate;
}

std::string FilterStats::to_json() const {
    nlohmann::ordered_json obj{
        {"seen", seen},
        {"kept", kept},
        {"rejected_case", rejected_case},
        {"rejected_terminal", rejected_terminal},
        {"rejected_length", rejected_length},
        {"rejected_charset", rejected_charset},
        {"rejected_duplicate", rejected_duplicate},
    };
    return obj.dump(2);
}

namespace {

bool allowed_char(char32_t cp, const FilterConfig& cfg) {
    if (cp == U' ') return true;
    if (uni::is_ascii_digit(cp)) return true;
    if (uni::is_letter(cp)) return true;
    return cfg.allowed_punct.find(cp) != std::u32string::npos;
}

}  // namespace

Reason filter_sentence(std::string_view s, const FilterConfig& cfg) {
    if (cfg.max_tokens < 1) throw DataError("max_tokens must be at least 1");

    std::size_t first = s.find_first_not_of(" \t");
    std::size_t last = s.find_last_not_of(" \t");
    if (cfg.require_initial_uppercase) {
        if (first == std::string_view::npos) return Reason::rejected_case;
        char32_t cp;
        std::size_t next = uni::decode_one(s, first, cp);
        if (next == first || !uni::is_upper(cp)) return Reason::rejected_case;
    }
    if (cfg.require_terminal_period) {
        if (last == std::string_view::npos || s[last] != '.')
            return Reason::rejected_terminal;
    }

    std::size_t tokens = 0;
    bool in_token = false;
    for (char c : s) {
        bool space = (c == ' ' || c == '\t');
        if (!space && !in_token) ++tokens;
        in_token = !space;
    }
    if (tokens > cfg.max_tokens) return Reason::rejected_length;

    std::size_t pos = 0;
    char32_t cp;
    while (pos < s.size()) {
        std::size_t next = uni::decode_one(s, pos, cp);
        if (next == pos)
            throw DataError("invalid UTF-8 at byte offset " + std::to_string(pos));
        if (!allowed_char(cp, cfg)) return Reason::rejected_charset;
        pos = next;
    }
    return Reason::kept;
}

FilterStats filter_corpus(std::istream& in, std::ostream& out, const FilterConfig& cfg) {
    FilterStats stats;
    std::unordered_set<std::string> seen_sentences;
    std::string line;
    std::uint64_t stream_offset = 0;
    while (std::getline(in, line)) {
        std::uint64_t line_bytes = line.size() + 1;  // getline consumed '\n'
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::size_t bad = 0;
        if (!uni::validate_utf8(line, bad))
            throw DataError("invalid UTF-8 at byte offset " +
                            std::to_string(stream_offset + bad));

        Reason r = filter_sentence(line, cfg);
        if (r == Reason::kept) {
            std::string trimmed = trim(line);
            if (!seen_sentences.insert(trimmed).second) {
                r = Reason::rejected_duplicate;
            } else {
                out << trimmed << '\n';
            }
        }
        stats.count(r);
        stream_offset += line_bytes;
    }
    return stats;
}

}  // namespace forge::filter
