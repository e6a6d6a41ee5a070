#include "forge/unicode.hpp"

#include <algorithm>
#include <array>

#include "forge/errors.hpp"

namespace forge::uni {

std::size_t decode_one(std::string_view s, std::size_t pos, char32_t& out) {
    out = kInvalid;
    if (pos >= s.size()) return pos;
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        out = b0;
        return pos + 1;
    }
    std::size_t len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return pos;  // stray continuation or invalid lead byte
    }
    if (pos + len > s.size()) return pos;
    for (std::size_t i = 1; i < len; ++i) {
        unsigned char bi = byte(pos + i);
        if ((bi & 0xC0) != 0x80) return pos;
        cp = (cp << 6) | (bi & 0x3F);
    }
    // reject overlong encodings, surrogates and out-of-range values
    static constexpr char32_t min_for_len[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len]) return pos;
    if (cp >= 0xD800 && cp <= 0xDFFF) return pos;
    if (cp > 0x10FFFF) return pos;
    out = cp;
    return pos + len;
}

bool validate_utf8(std::string_view s, std::size_t& bad_offset) {
    std::size_t pos = 0;
    char32_t cp;
    while (pos < s.size()) {
        std::size_t next = decode_one(s, pos, cp);
        if (next == pos) {
            bad_offset = pos;
            return false;
        }
        pos = next;
    }
    return true;
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    char32_t cp;
    while (pos < s.size()) {
        std::size_t next = decode_one(s, pos, cp);
        if (next == pos)
            throw DataError("invalid UTF-8 at byte offset " + std::to_string(pos));
        out.push_back(cp);
        pos = next;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

namespace {

struct Range {
    char32_t lo, hi;
};

// Letter blocks: Latin (incl. extensions and IPA), Greek, Cyrillic.
constexpr std::array<Range, 14> kLetterRanges{{
    {0x0041, 0x005A}, {0x0061, 0x007A},
    {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF},
    {0x0386, 0x0386}, {0x0388, 0x038A}, {0x038C, 0x038C},
    {0x038E, 0x03A1}, {0x03A3, 0x03FF},
    {0x0400, 0x052F},
    {0x1E00, 0x1FFF},
    {0x2C60, 0x2C7F},
    {0xA720, 0xA7CA},
}};

// Plain uppercase ranges (no alternating case pattern inside).
constexpr std::array<Range, 8> kUpperRanges{{
    {0x0041, 0x005A},
    {0x00C0, 0x00D6}, {0x00D8, 0x00DE},
    {0x0386, 0x0386}, {0x0388, 0x038F},
    {0x0391, 0x03A1}, {0x03A3, 0x03AB},
    {0x0400, 0x042F},
}};

bool in_ranges(char32_t cp, const Range* ranges, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (cp >= ranges[i].lo && cp <= ranges[i].hi) return true;
    return false;
}

// Latin Extended-A/B and Latin Extended Additional alternate
// uppercase/lowercase pairwise; parity gives the case.
bool upper_by_parity(char32_t cp) {
    if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2) == 0;
    if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2) == 1;
    if (cp >= 0x014A && cp <= 0x0177) return (cp % 2) == 0;
    if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2) == 1;
    if (cp >= 0x1E00 && cp <= 0x1EFF) return (cp % 2) == 0;
    return false;
}

}  // namespace

bool is_letter(char32_t cp) {
    return in_ranges(cp, kLetterRanges.data(), kLetterRanges.size());
}

bool is_upper(char32_t cp) {
    if (in_ranges(cp, kUpperRanges.data(), kUpperRanges.size())) return true;
    return upper_by_parity(cp);
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if ((cp >= 0x00C0 && cp <= 0x00D6) || (cp >= 0x00D8 && cp <= 0x00DE)) return cp + 0x20;
    if (upper_by_parity(cp)) return cp + 1;
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
    return cp;
}

std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    char32_t cp;
    while (pos < s.size()) {
        std::size_t next = decode_one(s, pos, cp);
        if (next == pos) {  // pass invalid bytes through untouched
            out.push_back(s[pos]);
            ++pos;
            continue;
        }
        append_utf8(out, to_lower(cp));
        pos = next;
    }
    return out;
}

}  // namespace forge::uni
