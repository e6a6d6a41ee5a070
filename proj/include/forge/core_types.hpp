#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// Marker tokens used to serialize triples into flat sequences. Reserved:
// input fields must never contain them.
inline constexpr std::string_view kSubjectMarker = "<subject>";
inline constexpr std::string_view kPredicateMarker = "<predicate>";
inline constexpr std::string_view kObjectMarker = "<object>";
inline constexpr std::string_view kEotMarker = "<eot>";
inline constexpr std::string_view kUnkToken = "<unk>";

inline constexpr std::array<std::string_view, 4> kMarkerTokens{
    kSubjectMarker, kPredicateMarker, kObjectMarker, kEotMarker};

/// True if `text` contains any of the four reserved marker tokens.
bool contains_marker(std::string_view text);

/// Trims ASCII whitespace from both ends.
std::string trim(std::string_view s);

/// One <subject; predicate; object> fact. Fields are trimmed at
/// construction; empty or marker-bearing fields are rejected.
struct Triple {
    std::string subject;
    std::string predicate;
    std::string object;

    Triple() = default;
    Triple(std::string subject, std::string predicate, std::string object);

    bool operator==(const Triple&) const = default;
};

struct TripleSet {
    std::vector<Triple> triples;

    std::size_t size() const { return triples.size(); }
    bool empty() const { return triples.empty(); }
    bool operator==(const TripleSet&) const = default;
};

/// One of the k alternative texts for a tripleset.
struct Verbalization {
    std::string text;
    std::size_t index = 0;

    Verbalization() = default;
    Verbalization(std::string text, std::size_t index);

    bool operator==(const Verbalization&) const = default;
};

enum class Split {
    train,
    dev,
    test_seen,
    test_unseen_entities,
    test_unseen_categories,
};

std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

/// One tripleset paired with one of its verbalizations.
struct PairRecord {
    TripleSet tripleset;
    Verbalization verbalization;
    std::string category;
    Split split = Split::train;

    PairRecord() = default;
    PairRecord(TripleSet ts, Verbalization v, std::string category, Split split);

    bool operator==(const PairRecord&) const = default;
};

// Universal POS inventory.
enum class Upos {
    NOUN, PROPN, VERB, AUX, ADJ, ADV, NUM, PRON, DET, ADP,
    CCONJ, SCONJ, PART, INTJ, PUNCT, SYM, X,
};

std::string_view to_string(Upos t);
std::optional<Upos> upos_from_string(std::string_view s);

struct TaggedToken {
    std::string surface;
    Upos upos = Upos::X;

    TaggedToken() = default;
    TaggedToken(std::string surface, Upos upos);

    bool operator==(const TaggedToken&) const = default;
};

struct TaggedSentence {
    std::vector<TaggedToken> tokens;

    bool operator==(const TaggedSentence&) const = default;
};

// JSONL record form, one object per line:
//   {"triples":[{"s":"...","p":"...","o":"..."}],"text":"...",
//    "category":"...","split":"train"}
// An optional "index" field carries the lexicalization index (absent = 0).
std::string to_jsonl(const PairRecord& rec);
PairRecord pair_record_from_json_line(std::string_view line);

}  // namespace forge
