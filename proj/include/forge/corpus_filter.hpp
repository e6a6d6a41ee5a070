#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>

namespace forge::filter {

/// Sentence-pool selection rules. Letters, ASCII digits and the space
/// character are always allowed; `allowed_punct` lists the additional
/// codepoints that do not count as special characters.
struct FilterConfig {
    std::size_t max_tokens = 50;
    std::u32string allowed_punct = U".,;:'\"()-%&/?!";
    bool require_initial_uppercase = true;
    bool require_terminal_period = true;
};

enum class Reason : std::uint8_t {
    kept,
    rejected_case,      // first non-space character not uppercase
    rejected_terminal,  // last non-space character not '.'
    rejected_length,    // more than max_tokens whitespace tokens
    rejected_charset,   // a character outside the allowed classes
    rejected_duplicate,
};

std::string_view to_string(Reason r);

struct FilterStats {
    std::uint64_t seen = 0;
    std::uint64_t kept = 0;
    std::uint64_t rejected_case = 0;
    std::uint64_t rejected_terminal = 0;
    std::uint64_t rejected_length = 0;
    std::uint64_t rejected_charset = 0;
    std::uint64_t rejected_duplicate = 0;

    void count(Reason r);
    bool balanced() const;
    std::string to_json() const;
    bool operator==(const FilterStats&) const = default;
};

/// Applies the rules in order: case, terminal period, length, charset.
/// The first failing rule is the reported reason. Never flags duplicates;
/// that is filter_corpus's job.
Reason filter_sentence(std::string_view s, const FilterConfig& cfg);

/// Streams `in` line by line, writing kept sentences (outer whitespace
/// trimmed) to `out` in input order with exact duplicates dropped.
/// Invalid UTF-8 raises forge::DataError naming the absolute byte offset.
FilterStats filter_corpus(std::istream& in, std::ostream& out, const FilterConfig& cfg);

}  // namespace forge::filter
