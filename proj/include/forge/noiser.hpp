#pragma once

#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "forge/core_types.hpp"

namespace forge::noiser {

/// Corruption keeps content-word classes only. Numbers and proper nouns
/// ride along with nouns, verbs, adjectives and adverbs so factual
/// material survives.
struct NoiseConfig {
    std::set<Upos> keep_tags{Upos::NOUN, Upos::PROPN, Upos::VERB,
                             Upos::ADJ,  Upos::ADV,   Upos::NUM};
    std::unordered_set<std::string> modal_lexicon{
        "can", "could", "may", "might", "must",
        "shall", "should", "will", "would", "ought"};
    bool keep_terminal_period = true;
};

/// Drops every token whose tag is not kept, plus modals, AUX tokens, and
/// be/have/do verbs that immediately precede another verb (the auxiliary
/// chain of passives and perfects). Re-appends a final '.' when the source
/// ended with one. Throws forge::DataError when nothing survives.
std::string corrupt_sentence(const TaggedSentence& s, const NoiseConfig& cfg);

struct Ws1Pairs {
    std::vector<std::pair<std::string, std::string>> pairs;  // (corrupted, original)
    std::size_t skipped = 0;
};

/// One (corrupted, original) pair per sentence; fully-corrupted sentences
/// are skipped and counted.
Ws1Pairs build_ws1_pairs(const std::vector<TaggedSentence>& sentences,
                         const NoiseConfig& cfg);

/// Heuristic tagger used when no external POS tags are available:
/// closed-class lexicon, digit and punctuation rules, a few suffix rules,
/// NOUN otherwise. Approximate by design.
TaggedSentence tag_fallback(const std::vector<std::string>& tokens);

}  // namespace forge::noiser
