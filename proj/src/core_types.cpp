#include "forge/core_types.hpp"

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"

namespace forge {

using ordered_json = nlohmann::ordered_json;

bool contains_marker(std::string_view text) {
    for (auto marker : kMarkerTokens)
        if (text.find(marker) != std::string_view::npos) return true;
    return false;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

namespace {

std::string checked_field(std::string value, const char* name) {
    std::string t = trim(value);
    if (t.empty()) throw DataError(std::string("triple ") + name + " is empty");
    if (contains_marker(t))
        throw DataError(std::string("triple ") + name + " contains a reserved marker token");
    return t;
}

}  // namespace

Triple::Triple(std::string subject_, std::string predicate_, std::string object_)
    : subject(checked_field(std::move(subject_), "subject")),
      predicate(checked_field(std::move(predicate_), "predicate")),
      object(checked_field(std::move(object_), "object")) {}

Verbalization::Verbalization(std::string text_, std::size_t index_)
    : text(std::move(text_)), index(index_) {
    if (trim(text).empty()) throw DataError("verbalization text is empty");
}

PairRecord::PairRecord(TripleSet ts, Verbalization v, std::string category_, Split split_)
    : tripleset(std::move(ts)),
      verbalization(std::move(v)),
      category(std::move(category_)),
      split(split_) {
    if (tripleset.empty()) throw DataError("pair record has an empty tripleset");
}

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::dev: return "dev";
        case Split::test_seen: return "test_seen";
        case Split::test_unseen_entities: return "test_unseen_entities";
        case Split::test_unseen_categories: return "test_unseen_categories";
    }
    return "train";
}

std::optional<Split> split_from_string(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "dev") return Split::dev;
    if (s == "test_seen") return Split::test_seen;
    if (s == "test_unseen_entities") return Split::test_unseen_entities;
    if (s == "test_unseen_categories") return Split::test_unseen_categories;
    return std::nullopt;
}

namespace {

constexpr std::string_view kUposNames[] = {
    "NOUN", "PROPN", "VERB", "AUX", "ADJ", "ADV", "NUM", "PRON", "DET",
    "ADP", "CCONJ", "SCONJ", "PART", "INTJ", "PUNCT", "SYM", "X",
};

}  // namespace

std::string_view to_string(Upos t) { return kUposNames[static_cast<int>(t)]; }

std::optional<Upos> upos_from_string(std::string_view s) {
    for (std::size_t i = 0; i < std::size(kUposNames); ++i)
        if (s == kUposNames[i]) return static_cast<Upos>(i);
    return std::nullopt;
}

TaggedToken::TaggedToken(std::string surface_, Upos upos_)
    : surface(std::move(surface_)), upos(upos_) {
    if (surface.empty()) throw DataError("tagged token has an empty surface");
}

std::string to_jsonl(const PairRecord& rec) {
    ordered_json triples = ordered_json::array();
    for (const auto& t : rec.tripleset.triples)
        triples.push_back({{"s", t.subject}, {"p", t.predicate}, {"o", t.object}});
    ordered_json obj{
        {"triples", std::move(triples)},
        {"text", rec.verbalization.text},
        {"category", rec.category},
        {"split", to_string(rec.split)},
    };
    if (rec.verbalization.index != 0) obj["index"] = rec.verbalization.index;
    return obj.dump();
}

PairRecord pair_record_from_json_line(std::string_view line) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw DataError("record is not a JSON object");
    for (const char* key : {"triples", "text", "category", "split"})
        if (!obj.contains(key))
            throw DataError(std::string("record is missing required field \"") + key + "\"");
    if (!obj["triples"].is_array() || obj["triples"].empty())
        throw DataError("\"triples\" must be a non-empty array");

    TripleSet ts;
    for (const auto& t : obj["triples"]) {
        if (!t.is_object() || !t.contains("s") || !t.contains("p") || !t.contains("o"))
            throw DataError("triple must be an object with \"s\", \"p\" and \"o\"");
        ts.triples.emplace_back(t["s"].get<std::string>(), t["p"].get<std::string>(),
                                t["o"].get<std::string>());
    }
    if (!obj["text"].is_string()) throw DataError("\"text\" must be a string");
    std::size_t index = 0;
    if (obj.contains("index")) {
        if (!obj["index"].is_number_unsigned())
            throw DataError("\"index\" must be a non-negative integer");
        index = obj["index"].get<std::size_t>();
    }
    auto split = split_from_string(obj["split"].get<std::string>());
    if (!split)
        throw DataError("unknown split label \"" + obj["split"].get<std::string>() + "\"");
    return PairRecord(std::move(ts), Verbalization(obj["text"].get<std::string>(), index),
                      obj["category"].get<std::string>(), *split);
}

}  // namespace forge
