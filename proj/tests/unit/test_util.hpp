#pragma once

#include <random>
#include <string>
#include <vector>

#include "forge/core_types.hpp"

namespace testutil {

inline std::string random_word(std::mt19937& rng, std::size_t min_len = 1,
                               std::size_t max_len = 8,
                               const std::string& alphabet = "abcdefghij") {
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::uniform_int_distribution<std::size_t> char_dist(0, alphabet.size() - 1);
    std::string word;
    const std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) word.push_back(alphabet[char_dist(rng)]);
    return word;
}

inline std::string random_phrase(std::mt19937& rng, std::size_t min_words = 1,
                                 std::size_t max_words = 3) {
    std::uniform_int_distribution<std::size_t> n_dist(min_words, max_words);
    std::string phrase;
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (i) phrase.push_back(' ');
        phrase += random_word(rng);
    }
    return phrase;
}

inline forge::Triple random_triple(std::mt19937& rng) {
    return {random_phrase(rng), random_phrase(rng), random_phrase(rng)};
}

inline forge::TripleSet random_tripleset(std::mt19937& rng, std::size_t max_triples = 7) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_triples);
    forge::TripleSet ts;
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) ts.triples.push_back(random_triple(rng));
    return ts;
}

inline forge::PairRecord random_record(std::mt19937& rng) {
    static const forge::Split splits[] = {
        forge::Split::train, forge::Split::dev, forge::Split::test_seen,
        forge::Split::test_unseen_entities, forge::Split::test_unseen_categories};
    std::uniform_int_distribution<int> split_dist(0, 4);
    std::uniform_int_distribution<std::size_t> index_dist(0, 3);
    return {random_tripleset(rng),
            forge::Verbalization(random_phrase(rng, 3, 10) + " .", index_dist(rng)),
            random_word(rng), splits[split_dist(rng)]};
}

inline std::vector<std::string> random_tokens(std::mt19937& rng, std::size_t min_n,
                                              std::size_t max_n,
                                              const std::string& alphabet = "abcdefghij") {
    std::uniform_int_distribution<std::size_t> n_dist(min_n, max_n);
    std::vector<std::string> toks;
    const std::size_t n = n_dist(rng);
    for (std::size_t i = 0; i < n; ++i) toks.push_back(random_word(rng, 1, 5, alphabet));
    return toks;
}

}  // namespace testutil
