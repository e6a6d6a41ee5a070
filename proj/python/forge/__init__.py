"""Corpus engineering and evaluation toolkit for RDF-to-text generation."""

from forge._core import (
    BpeModel,
    DataError,
    IoError,
    bpe_undo,
    chrf,
    corpus_scores,
    corrupt,
    corrupt_tagged,
    dedup_triples,
    delinearize,
    detokenize,
    filter_sentence,
    levenshtein,
    linearize,
    meteor,
    relative_increase,
    schedule_json,
    sentence_bleu,
    tag_fallback,
    word_tokenize,
)

__all__ = [
    "BpeModel",
    "DataError",
    "IoError",
    "bpe_undo",
    "chrf",
    "corpus_scores",
    "corrupt",
    "corrupt_tagged",
    "dedup_triples",
    "delinearize",
    "detokenize",
    "filter_sentence",
    "levenshtein",
    "linearize",
    "meteor",
    "relative_increase",
    "schedule_json",
    "sentence_bleu",
    "tag_fallback",
    "word_tokenize",
]
