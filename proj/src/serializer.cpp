#include "forge/serializer.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "forge/errors.hpp"

namespace forge::serializer {

namespace {

void append_field_tokens(std::string& out, std::string_view field) {
    // normalize inner whitespace runs to single spaces
    std::size_t i = 0;
    bool first = true;
    while (i < field.size()) {
        while (i < field.size() && std::isspace(static_cast<unsigned char>(field[i]))) ++i;
        if (i >= field.size()) break;
        std::size_t j = i;
        while (j < field.size() && !std::isspace(static_cast<unsigned char>(field[j]))) ++j;
        if (!first) out.push_back(' ');
        out.append(field.substr(i, j - i));
        first = false;
        i = j;
    }
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        toks.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return toks;
}

bool is_any_marker(std::string_view tok) {
    return std::find(kMarkerTokens.begin(), kMarkerTokens.end(), tok) !=
           kMarkerTokens.end();
}

}  // namespace

std::string linearize_tripleset(const TripleSet& ts) {
    if (ts.empty()) throw DataError("cannot linearize an empty tripleset");
    std::string out;
    for (const auto& t : ts.triples) {
        if (!out.empty()) out.push_back(' ');
        out += kSubjectMarker;
        out.push_back(' ');
        append_field_tokens(out, t.subject);
        out.push_back(' ');
        out += kPredicateMarker;
        out.push_back(' ');
        append_field_tokens(out, t.predicate);
        out.push_back(' ');
        out += kObjectMarker;
        out.push_back(' ');
        append_field_tokens(out, t.object);
        out.push_back(' ');
        out += kEotMarker;
    }
    return out;
}

namespace {

struct TokenCursor {
    const std::vector<std::string>& toks;
    std::size_t pos = 0;  // 0-based; reported positions are 1-based

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError("delinearize: " + what + " at token " + std::to_string(pos + 1));
    }

    void expect_marker(std::string_view marker) {
        if (pos >= toks.size())
            throw DataError("delinearize: expected " + std::string(marker) +
                            " but sequence ended");
        if (toks[pos] != marker) fail("expected " + std::string(marker));
        ++pos;
    }

    std::string collect_field(std::string_view until, const char* field_name) {
        std::string field;
        while (pos < toks.size() && toks[pos] != until) {
            if (is_any_marker(toks[pos])) fail(std::string("unexpected ") + toks[pos]);
            if (!field.empty()) field.push_back(' ');
            field += toks[pos];
            ++pos;
        }
        if (pos >= toks.size())
            throw DataError("delinearize: missing " + std::string(until) +
                            " marker before end of sequence");
        if (field.empty()) fail(std::string("empty ") + field_name + " field");
        return field;
    }
};

}  // namespace

TripleSet delinearize(std::string_view seq) {
    auto toks = whitespace_tokens(seq);
    if (toks.empty()) throw DataError("delinearize: empty sequence");
    TokenCursor cur{toks};
    TripleSet ts;
    while (cur.pos < toks.size()) {
        cur.expect_marker(kSubjectMarker);
        std::string subject = cur.collect_field(kPredicateMarker, "subject");
        cur.expect_marker(kPredicateMarker);
        std::string predicate = cur.collect_field(kObjectMarker, "predicate");
        cur.expect_marker(kObjectMarker);
        std::string object = cur.collect_field(kEotMarker, "object");
        cur.expect_marker(kEotMarker);
        ts.triples.emplace_back(std::move(subject), std::move(predicate),
                                std::move(object));
    }
    return ts;
}

std::pair<std::string, std::string> build_training_pair(const PairRecord& rec) {
    if (contains_marker(rec.verbalization.text))
        throw DataError("verbalization text contains a reserved marker token");
    return {linearize_tripleset(rec.tripleset), rec.verbalization.text};
}

}  // namespace forge::serializer
