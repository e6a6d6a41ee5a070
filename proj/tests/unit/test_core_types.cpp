#include <doctest.h>

#include "forge/core_types.hpp"
#include "forge/errors.hpp"
#include "test_util.hpp"

using namespace forge;

TEST_CASE("triple fields are trimmed and validated") {
    Triple t("  Alan Bean ", "birthDate", " 1932");
    CHECK(t.subject == "Alan Bean");
    CHECK(t.object == "1932");

    CHECK_THROWS_AS(Triple("", "p", "o"), DataError);
    CHECK_THROWS_AS(Triple("s", "   ", "o"), DataError);
    CHECK_THROWS_AS(Triple("s", "p", "x <eot> y"), DataError);
    CHECK_THROWS_AS(Triple("<subject>", "p", "o"), DataError);
}

TEST_CASE("marker detection covers all four tokens") {
    CHECK(contains_marker("a <subject> b"));
    CHECK(contains_marker("<predicate>"));
    CHECK(contains_marker("x<object>y"));
    CHECK(contains_marker("end <eot>"));
    CHECK_FALSE(contains_marker("subject predicate object eot"));
}

TEST_CASE("split labels round-trip") {
    for (Split s : {Split::train, Split::dev, Split::test_seen,
                    Split::test_unseen_entities, Split::test_unseen_categories})
        CHECK(split_from_string(to_string(s)) == s);
    CHECK_FALSE(split_from_string("test").has_value());
}

TEST_CASE("pair record requires a non-empty tripleset") {
    CHECK_THROWS_AS(PairRecord(TripleSet{}, Verbalization("text", 0), "cat", Split::train),
                    DataError);
    CHECK_THROWS_AS(Verbalization("  ", 0), DataError);
}

TEST_CASE("jsonl schema example parses") {
    auto rec = pair_record_from_json_line(
        R"({"triples":[{"s":"Italy","p":"capital","o":"Rome"}],)"
        R"("text":"Rome is the capital of Italy .","category":"Country","split":"train"})");
    CHECK(rec.tripleset.size() == 1);
    CHECK(rec.tripleset.triples[0].predicate == "capital");
    CHECK(rec.verbalization.text == "Rome is the capital of Italy .");
    CHECK(rec.verbalization.index == 0);
    CHECK(rec.split == Split::train);
}

TEST_CASE("jsonl parse errors name the offending field") {
    CHECK_THROWS_WITH_AS(
        pair_record_from_json_line(
            R"({"triples":[{"s":"a","p":"b","o":"c"}],"category":"x","split":"train"})"),
        doctest::Contains("text"), DataError);
    CHECK_THROWS_AS(pair_record_from_json_line("not json"), DataError);
    CHECK_THROWS_AS(pair_record_from_json_line(
                        R"({"triples":[],"text":"t","category":"c","split":"train"})"),
                    DataError);
    CHECK_THROWS_AS(
        pair_record_from_json_line(
            R"({"triples":[{"s":"a","p":"b","o":"c"}],"text":"t","category":"c","split":"validation"})"),
        DataError);
}

TEST_CASE("jsonl round-trip is the identity on randomized records") {
    std::mt19937 rng(42);
    for (int i = 0; i < 500; ++i) {
        PairRecord rec = testutil::random_record(rng);
        PairRecord back = pair_record_from_json_line(to_jsonl(rec));
        CHECK(back == rec);
    }
}
