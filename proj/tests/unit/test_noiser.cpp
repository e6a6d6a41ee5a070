#include <doctest.h>

#include <random>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/noiser.hpp"
#include "forge/subword.hpp"
#include "test_util.hpp"

using namespace forge;
using noiser::NoiseConfig;

namespace {

TaggedSentence tag_line(const std::string& line) {
    return noiser::tag_fallback(subword::word_tokenize(line));
}

TaggedSentence pretagged(const std::string& line) {
    TaggedSentence sent;
    std::istringstream ss(line);
    std::string item;
    while (ss >> item) {
        auto us = item.rfind('_');
        REQUIRE(us != std::string::npos);
        auto tag = upos_from_string(item.substr(us + 1));
        REQUIRE(tag.has_value());
        sent.tokens.emplace_back(item.substr(0, us), *tag);
    }
    return sent;
}

}  // namespace

TEST_CASE("corruption keeps the semantic mass of the sentence") {
    NoiseConfig cfg;
    CHECK(noiser::corrupt_sentence(
              tag_line("In 1860 few of the streets north of 42nd had been graded ."),
              cfg) == "1860 few streets north 42nd graded .");

    // same sentence with external-style tags: auxiliaries tagged AUX
    CHECK(noiser::corrupt_sentence(
              pretagged("In_ADP 1860_NUM few_ADJ of_ADP the_DET streets_NOUN "
                        "north_ADV of_ADP 42nd_NUM had_AUX been_AUX graded_VERB ._PUNCT"),
              cfg) == "1860 few streets north 42nd graded .");
}

TEST_CASE("copular be survives; auxiliary chains do not") {
    NoiseConfig cfg;
    CHECK(noiser::corrupt_sentence(tag_line("Rome is the capital of Italy ."), cfg) ==
          "Rome is capital Italy .");
    CHECK(noiser::corrupt_sentence(tag_line("He should go home ."), cfg) == "go home .");
    CHECK(noiser::corrupt_sentence(tag_line("She has finished the report ."), cfg) ==
          "finished report .");
}

TEST_CASE("terminal period handling follows the config") {
    NoiseConfig cfg;
    CHECK(noiser::corrupt_sentence(tag_line("Dogs bark loudly"), cfg) ==
          "Dogs bark loudly");
    cfg.keep_terminal_period = false;
    CHECK(noiser::corrupt_sentence(tag_line("Dogs bark loudly ."), cfg) ==
          "Dogs bark loudly");
}

TEST_CASE("fully corrupted sentences raise an error") {
    NoiseConfig cfg;
    CHECK_THROWS_WITH_AS(noiser::corrupt_sentence(tag_line("of the in ."), cfg),
                         doctest::Contains("fully-corrupted"), DataError);
}

TEST_CASE("fallback tagger rules") {
    auto tags = [](const std::vector<std::string>& toks) {
        std::vector<Upos> out;
        for (const auto& t : noiser::tag_fallback(toks).tokens) out.push_back(t.upos);
        return out;
    };
    CHECK(tags({"1860"}) == std::vector<Upos>{Upos::NUM});
    CHECK(tags({"quickly"}) == std::vector<Upos>{Upos::ADV});
    CHECK(tags({"the", "cat"}) == std::vector<Upos>{Upos::DET, Upos::NOUN});
    CHECK(tags({"famous"}) == std::vector<Upos>{Upos::ADJ});
    CHECK(tags({"graded"}) == std::vector<Upos>{Upos::VERB});
    CHECK(tags({"."}) == std::vector<Upos>{Upos::PUNCT});
    CHECK(tags({"should"}) == std::vector<Upos>{Upos::AUX});
    CHECK(tags({"is"}) == std::vector<Upos>{Upos::VERB});
    CHECK_THROWS_AS(noiser::tag_fallback({}), DataError);
}

TEST_CASE("ws1 pair building skips fully corrupted sentences") {
    std::vector<TaggedSentence> sentences;
    for (int i = 0; i < 9; ++i)
        sentences.push_back(tag_line("Engineers build bridges quickly ."));
    sentences.push_back(tag_line("of the in ."));

    auto result = noiser::build_ws1_pairs(sentences, NoiseConfig{});
    CHECK(result.pairs.size() == 9);
    CHECK(result.skipped == 1);
    CHECK(result.pairs[0].first == "Engineers build bridges quickly .");
    CHECK(result.pairs[0].second == "Engineers build bridges quickly .");
}

TEST_CASE("ws1 targets are the detagged originals") {
    auto result = noiser::build_ws1_pairs(
        {tag_line("In 1860 few of the streets north of 42nd had been graded .")},
        NoiseConfig{});
    REQUIRE(result.pairs.size() == 1);
    CHECK(result.pairs[0].first == "1860 few streets north 42nd graded .");
    CHECK(result.pairs[0].second ==
          "In 1860 few of the streets north of 42nd had been graded .");
}

namespace {

std::vector<std::string> corrupt_tokens(const std::string& corrupted) {
    std::vector<std::string> toks;
    std::istringstream ss(corrupted);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

TaggedSentence random_tagged(std::mt19937& rng) {
    static const std::vector<std::string> pool = {
        "the",    "a",       "of",     "in",   "quickly", "famous", "graded",
        "running", "streets", "bridge", "1860", "42nd",    "he",     "should",
        "is",     "had",     "been",   "very", "north",   "cat",    "builds"};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> len(1, 10);
    std::uniform_int_distribution<int> dot(0, 1);
    std::vector<std::string> toks;
    int n = len(rng);
    for (int i = 0; i < n; ++i) toks.push_back(pool[pick(rng)]);
    if (dot(rng)) toks.push_back(".");
    return noiser::tag_fallback(toks);
}

}  // namespace

TEST_CASE("corruption output is a tag-filtered subsequence of the input") {
    std::mt19937 rng(43);
    NoiseConfig cfg;
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        TaggedSentence sent = random_tagged(rng);
        std::string corrupted;
        try {
            corrupted = noiser::corrupt_sentence(sent, cfg);
        } catch (const DataError&) {
            continue;  // fully corrupted
        }
        ++checked;
        auto out_toks = corrupt_tokens(corrupted);
        if (cfg.keep_terminal_period && !out_toks.empty() && out_toks.back() == "." &&
            sent.tokens.back().surface == ".")
            out_toks.pop_back();

        std::size_t pos = 0;
        for (const auto& out_tok : out_toks) {
            bool found = false;
            while (pos < sent.tokens.size()) {
                if (sent.tokens[pos].surface == out_tok) {
                    CHECK(cfg.keep_tags.count(sent.tokens[pos].upos) == 1);
                    found = true;
                    ++pos;
                    break;
                }
                ++pos;
            }
            CHECK(found);
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("corruption is idempotent unless dropping creates a new auxiliary chain") {
    std::mt19937 rng(47);
    NoiseConfig cfg;
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        TaggedSentence sent = random_tagged(rng);
        std::string once;
        try {
            once = noiser::corrupt_sentence(sent, cfg);
        } catch (const DataError&) {
            continue;
        }
        TaggedSentence retagged = noiser::tag_fallback(corrupt_tokens(once));
        // dropping a token can make a copular verb adjacent to a verb; the
        // second pass legitimately removes it then, so skip those inputs
        bool new_chain = false;
        for (std::size_t k = 0; k + 1 < retagged.tokens.size(); ++k) {
            const auto& cur = retagged.tokens[k];
            const auto& nxt = retagged.tokens[k + 1];
            std::string lower;
            for (char c : cur.surface)
                lower.push_back(static_cast<char>(std::tolower(c)));
            if (cur.upos == Upos::VERB &&
                (lower == "is" || lower == "had" || lower == "been" || lower == "was" ||
                 lower == "has" || lower == "did" || lower == "does") &&
                (nxt.upos == Upos::VERB || nxt.upos == Upos::AUX))
                new_chain = true;
        }
        if (new_chain) continue;
        ++checked;
        CHECK(noiser::corrupt_sentence(retagged, cfg) == once);
    }
    CHECK(checked > 200);
}
