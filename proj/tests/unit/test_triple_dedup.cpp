#include <doctest.h>

#include <random>

#include "forge/errors.hpp"
#include "forge/triple_dedup.hpp"
#include "test_util.hpp"

using namespace forge;
using dedup::DedupConfig;
using dedup::ExtractionRecord;

namespace {

ExtractionRecord obama_record() {
    ExtractionRecord rec;
    rec.sentence = "Barack Obama was born in Hawaii.";
    rec.candidates = {Triple("Barack Obama", "was", "born"),
                      Triple("Barack Obama", "was born in", "Hawaii")};
    return rec;
}

}  // namespace

TEST_CASE("linearization for comparison joins and normalizes") {
    CHECK(dedup::linearize_for_compare(Triple("Barack Obama", "was", "born")) ==
          "Barack Obama was born");
    CHECK(dedup::linearize_for_compare(Triple("He", "retired", "1990")) ==
          "He retired 1990");
    CHECK(dedup::linearize_for_compare(Triple("A  B", "c   d", "e")) == "A B c d e");
}

TEST_CASE("pair redundancy via containment keeps the longer triple") {
    DedupConfig cfg;
    auto v = dedup::is_redundant_pair(Triple("Barack Obama", "was", "born"),
                                      Triple("Barack Obama", "was born in", "Hawaii"),
                                      cfg);
    CHECK(v.redundant);
    CHECK(v.by_containment);
    CHECK(v.keep_index == 1);
}

TEST_CASE("identical triples are redundant and keep the first") {
    DedupConfig cfg;
    Triple t("Italy", "capital", "Rome");
    auto v = dedup::is_redundant_pair(t, t, cfg);
    CHECK(v.redundant);
    CHECK(v.keep_index == 0);
}

TEST_CASE("edit distance catches minor variations") {
    DedupConfig cfg;
    auto v = dedup::is_redundant_pair(Triple("He", "owns", "a cat"),
                                      Triple("He", "owns", "a cats"), cfg);
    CHECK(v.redundant);
    CHECK(v.by_edit_distance);
}

TEST_CASE("unrelated triples stay distinct under all three tests") {
    DedupConfig cfg;
    auto v = dedup::is_redundant_pair(Triple("Italy", "capital", "Rome"),
                                      Triple("He", "retired", "1990"), cfg);
    CHECK_FALSE(v.redundant);
    CHECK_FALSE(v.by_containment);
    CHECK_FALSE(v.by_edit_distance);
    CHECK_FALSE(v.by_bleu);
}

TEST_CASE("the spurious extraction example collapses to one triple") {
    auto ts = dedup::dedup_tripleset(obama_record(), DedupConfig{});
    REQUIRE(ts.size() == 1);
    CHECK(ts.triples[0] == Triple("Barack Obama", "was born in", "Hawaii"));
}

TEST_CASE("single candidate passes through unchanged") {
    ExtractionRecord rec;
    rec.sentence = "He retired in 1990.";
    rec.candidates = {Triple("He", "retired", "1990")};
    auto ts = dedup::dedup_tripleset(rec, DedupConfig{});
    REQUIRE(ts.size() == 1);
    CHECK(ts.triples[0] == rec.candidates[0]);
}

TEST_CASE("contained triple drops while the distinct one survives") {
    ExtractionRecord rec;
    rec.sentence = "The old bridge spans the wide river near the town.";
    rec.candidates = {Triple("bridge", "spans", "river"),
                      Triple("old bridge", "spans", "wide river"),
                      Triple("town", "is near", "river")};
    // #1 is contained in #2 once linearized? not literally; use a true
    // containment pair instead
    rec.candidates[0] = Triple("old bridge", "spans", "wide");
    auto ts = dedup::dedup_tripleset(rec, DedupConfig{});
    REQUIRE(ts.size() == 2);
    CHECK(ts.triples[0] == rec.candidates[1]);
    CHECK(ts.triples[1] == rec.candidates[2]);
}

TEST_CASE("empty candidate list is an error") {
    ExtractionRecord rec;
    rec.sentence = "Nothing extracted.";
    CHECK_THROWS_AS(dedup::dedup_tripleset(rec, DedupConfig{}), DataError);
}

TEST_CASE("bleu threshold bounds are validated") {
    DedupConfig cfg;
    cfg.bleu_threshold = 101.0;
    CHECK_THROWS_AS(dedup::is_redundant_pair(Triple("a", "b", "c"),
                                             Triple("d", "e", "f"), cfg),
                    DataError);
}

namespace {

ExtractionRecord random_extraction(std::mt19937& rng) {
    ExtractionRecord rec;
    rec.sentence = testutil::random_phrase(rng, 4, 9) + " .";
    std::uniform_int_distribution<std::size_t> n_dist(1, 5);
    std::uniform_int_distribution<int> mutate(0, 3);
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && mutate(rng) == 0) {
            // derive a near-duplicate of an earlier candidate
            Triple base = rec.candidates[i - 1];
            switch (mutate(rng)) {
                case 0: base.object += "s"; break;
                case 1: base.object = base.object + " " + testutil::random_word(rng); break;
                default: break;
            }
            rec.candidates.push_back(base);
        } else {
            rec.candidates.push_back(testutil::random_triple(rng));
        }
    }
    return rec;
}

}  // namespace

TEST_CASE("dedup output is a sub-multiset of the candidates") {
    std::mt19937 rng(53);
    DedupConfig cfg;
    for (int i = 0; i < 200; ++i) {
        ExtractionRecord rec = random_extraction(rng);
        TripleSet out = dedup::dedup_tripleset(rec, cfg);
        REQUIRE(!out.empty());
        std::vector<Triple> pool = rec.candidates;
        for (const auto& t : out.triples) {
            auto it = std::find(pool.begin(), pool.end(), t);
            REQUIRE(it != pool.end());
            pool.erase(it);
        }
    }
}

TEST_CASE("dedup is a fixed point on its own output") {
    std::mt19937 rng(59);
    DedupConfig cfg;
    for (int i = 0; i < 200; ++i) {
        ExtractionRecord rec = random_extraction(rng);
        TripleSet once = dedup::dedup_tripleset(rec, cfg);
        ExtractionRecord again;
        again.sentence = rec.sentence;
        again.candidates = once.triples;
        CHECK(dedup::dedup_tripleset(again, cfg) == once);
    }
}

TEST_CASE("dedup is deterministic") {
    std::mt19937 rng(61);
    DedupConfig cfg;
    ExtractionRecord rec = random_extraction(rng);
    auto a = dedup::dedup_tripleset(rec, cfg);
    auto b = dedup::dedup_tripleset(rec, cfg);
    CHECK(a == b);
}

TEST_CASE("st1 records carry the augmented category and train split") {
    auto result = dedup::build_st1({obama_record()}, DedupConfig{});
    REQUIRE(result.records.size() == 1);
    CHECK(result.failures == 0);
    const auto& rec = result.records[0];
    CHECK(rec.tripleset.size() == 1);
    CHECK(rec.category == "augmented");
    CHECK(rec.split == Split::train);
    CHECK(rec.verbalization.text == "Barack Obama was born in Hawaii.");
}

TEST_CASE("st1 counts per-record failures without halting") {
    std::mt19937 rng(67);
    std::vector<ExtractionRecord> records;
    for (int i = 0; i < 100; ++i) {
        ExtractionRecord rec = random_extraction(rng);
        if (i % 10 == 0) rec.candidates.clear();  // forces a per-record failure
        records.push_back(std::move(rec));
    }
    auto result = dedup::build_st1(records, DedupConfig{});
    CHECK(result.failures == 10);
    CHECK(result.records.size() + result.failures == records.size());
}

TEST_CASE("extraction records round-trip through jsonl") {
    ExtractionRecord rec = obama_record();
    auto back = dedup::extraction_from_json_line(dedup::extraction_to_jsonl(rec));
    CHECK(back.sentence == rec.sentence);
    CHECK(back.candidates == rec.candidates);

    CHECK_THROWS_AS(dedup::extraction_from_json_line("{}"), DataError);
    CHECK_THROWS_AS(
        dedup::extraction_from_json_line(R"({"sentence":"  ","candidates":[]})"),
        DataError);
}
