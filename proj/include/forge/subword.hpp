#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace forge::subword {

/// Moses-style rule tokenizer: splits on whitespace, detaches the
/// punctuation . , ; : ! ? ( ) " from token edges, keeps hyphens and
/// apostrophes attached. The four marker tokens are never split.
std::vector<std::string> word_tokenize(const std::string& s);

/// Inverse of the spacing introduced by word_tokenize: joins with spaces,
/// then drops the space before . , ; : ! ? ) and after (.
std::string detokenize(const std::vector<std::string>& tokens);

std::unordered_set<std::string> default_protected_tokens();

/// Learned BPE merge table plus the vocabulary of subword types it emits.
/// Merge symbols use the internal "</w>" end-of-word suffix; vocabulary
/// entries are in output form (continuation pieces carry the "@@" marker).
/// Protected tokens (the four markers by default) are atomic: never split,
/// never mapped to "<unk>".
struct BpeModel {
    std::vector<std::pair<std::string, std::string>> merges;
    std::unordered_set<std::string> vocab;
    std::string continuation_marker = "@@";
    std::unordered_set<std::string> protected_tokens = default_protected_tokens();

    bool operator==(const BpeModel&) const = default;
};

/// Learns merges over a token stream: words start as codepoint sequences
/// with an end-of-word suffix on the last symbol; the most frequent
/// adjacent pair is merged each round, ties broken by lexicographic order,
/// stopping at `num_merges` or when no pair occurs at least twice. The
/// resulting vocab covers the training corpus plus markers and "<unk>".
BpeModel bpe_learn(const std::vector<std::string>& corpus_tokens, std::size_t num_merges);

/// Segments word-tokenized text. Marker tokens pass through unsplit; any
/// piece outside a non-empty model vocab becomes "<unk>".
std::vector<std::string> bpe_apply(const BpeModel& model,
                                   const std::vector<std::string>& tokens);

/// Reference segmentation that replays every merge in learned order over
/// each token. bpe_apply takes the rank-greedy shortcut; the two must
/// agree (covered by a regression fixture).
std::vector<std::string> bpe_apply_replay(const BpeModel& model,
                                          const std::vector<std::string>& tokens);

/// Rejoins subword pieces into words by stripping continuation markers.
/// A dangling continuation at the end of the sequence is an error.
std::vector<std::string> bpe_undo(const std::vector<std::string>& subwords);

/// Restricts the model to the transduction vocabulary: the subword types
/// the model emits on `reference_tokens` (WebNLG text, all splits), plus
/// markers and "<unk>". Everything else maps to "<unk>" downstream.
BpeModel build_transduction_vocab(const BpeModel& model,
                                  const std::vector<std::string>& reference_tokens);

// Model file: line 1 "#forge-bpe v1", then one merge per line "left right".
void save_model(const BpeModel& model, const std::filesystem::path& path);
BpeModel load_model(const std::filesystem::path& path);

// Vocab file: one subword type per line, sorted.
void save_vocab(const BpeModel& model, const std::filesystem::path& path);
void load_vocab(BpeModel& model, const std::filesystem::path& path);

}  // namespace forge::subword
