#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace forge::uni {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

/// Decodes one UTF-8 sequence starting at `pos`. On success stores the
/// codepoint in `out` and returns the position one past the sequence.
/// On malformed input stores kInvalid and returns `pos`.
std::size_t decode_one(std::string_view s, std::size_t pos, char32_t& out);

/// Returns true if `s` is entirely well-formed UTF-8; otherwise stores the
/// offset of the first offending byte in `bad_offset`.
bool validate_utf8(std::string_view s, std::size_t& bad_offset);

/// Strict decode; throws forge::DataError naming the byte offset.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

// Character classification over a built-in range table covering Basic Latin,
// Latin-1/Extended, IPA, Greek and Cyrillic. Codepoints outside those blocks
// are not letters as far as this toolkit is concerned; the corpus pipeline
// only targets English and European scripts.
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_ascii_digit(char32_t cp);

/// Best-effort lowercasing over the same blocks; identity elsewhere.
char32_t to_lower(char32_t cp);

/// Lowercases a UTF-8 string (best effort, see to_lower).
std::string lowercase(std::string_view s);

}  // namespace forge::uni
