"""Corpus ingestion: tokenization, cleaning, vocabulary extraction and
reproducible sentence subsampling.

A corpus is a language-tagged sequence of sentences (token sequences);
sentence boundaries matter downstream because co-occurrence windows never
cross them, which also makes the sentence the atomic unit of subsampling.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ArgumentError, EmptyInputError, FormatError
from .stemming import porter_stem
from .stopwords import ENGLISH_STOPWORDS

_SENTENCE_BREAK = re.compile(r"[.!?]+|\n+")


@dataclass(frozen=True)
class Corpus:
    language: str
    sentences: tuple[tuple[str, ...], ...]
    token_count: int = field(init=False)
    type_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "token_count", sum(len(s) for s in self.sentences)
        )
        types = {t for s in self.sentences for t in s}
        object.__setattr__(self, "type_count", len(types))

    @property
    def type_token_ratio(self) -> float:
        if self.token_count == 0:
            raise EmptyInputError("type-to-token ratio of an empty corpus")
        return self.type_count / self.token_count


@dataclass(frozen=True)
class Vocabulary:
    entries: dict[str, tuple[int, int]]  # word -> (id, count)
    total_tokens: int
    frequency_order: tuple[str, ...]

    def count(self, word: str) -> int:
        return self.entries[word][1]

    def top_k(self, k: int) -> tuple[str, ...]:
        if k > len(self.frequency_order):
            raise ArgumentError(
                f"k={k} exceeds vocabulary size {len(self.frequency_order)}"
            )
        return self.frequency_order[:k]

    def __len__(self):
        return len(self.entries)


def tokenize_corpus(
    raw_text: str | bytes, language: str, sentence_per_line: bool = False
) -> Corpus:
    """Split text into lowercased whitespace tokens, one sentence per
    terminal-punctuation or newline boundary.

    With ``sentence_per_line`` every line is one sentence regardless of
    punctuation (the pre-segmented input mode).
    """
    if isinstance(raw_text, bytes):
        try:
            raw_text = raw_text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(
                f"malformed UTF-8 at byte offset {exc.start}"
            ) from exc
    if sentence_per_line:
        segments = raw_text.split("\n")
    else:
        segments = _SENTENCE_BREAK.split(raw_text)
    sentences = []
    for seg in segments:
        tokens = tuple(tok.lower() for tok in seg.split())
        if tokens:
            sentences.append(tokens)
    return Corpus(language=language, sentences=tuple(sentences))


def clean_tokens(
    corpus: Corpus,
    stopwords: Iterable[str] | None = None,
    stemmer: Callable[[str], str] | None = None,
) -> Corpus:
    """Drop non-alphabetic tokens and stopwords, stem the survivors, and
    discard sentences that end up empty.

    "Alphabetic" is Unicode letter classification (str.isalpha), so
    Cyrillic and umlauted words survive. Stopword filtering runs before
    stemming.
    """
    if stopwords is None:
        stopwords = ENGLISH_STOPWORDS
    else:
        stopwords = frozenset(stopwords)
    if stemmer is None:
        stemmer = porter_stem
    sentences = []
    for sent in corpus.sentences:
        kept = tuple(
            stemmer(tok)
            for tok in sent
            if tok.isalpha() and tok not in stopwords
        )
        if kept:
            sentences.append(kept)
    return Corpus(language=corpus.language, sentences=tuple(sentences))


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Exact corpus frequencies; ids assigned in frequency order with
    lexicographic tiebreak for determinism."""
    if corpus.token_count == 0:
        raise EmptyInputError("cannot build a vocabulary from an empty corpus")
    counts: dict[str, int] = {}
    for sent in corpus.sentences:
        for tok in sent:
            counts[tok] = counts.get(tok, 0) + 1
    order = tuple(sorted(counts, key=lambda w: (-counts[w], w)))
    entries = {w: (i, counts[w]) for i, w in enumerate(order)}
    return Vocabulary(
        entries=entries,
        total_tokens=corpus.token_count,
        frequency_order=order,
    )


def sample_corpus(corpus: Corpus, fraction: float, seed: int) -> Corpus:
    """Select round(fraction * n) whole sentences uniformly without
    replacement, preserving original sentence order; deterministic in
    (corpus, fraction, seed)."""
    if not 0.0 < fraction <= 1.0:
        raise ArgumentError(f"fraction must lie in (0, 1], got {fraction}")
    n = len(corpus.sentences)
    if fraction == 1.0:
        return corpus
    size = int(math.floor(fraction * n + 0.5))
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(n, size=size, replace=False))
    sentences = tuple(corpus.sentences[i] for i in chosen)
    return Corpus(language=corpus.language, sentences=sentences)


def read_corpus(path, language: str, sentence_per_line: bool = True) -> Corpus:
    with open(path, "rb") as fh:
        raw = fh.read()
    return tokenize_corpus(raw, language, sentence_per_line=sentence_per_line)


def write_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in corpus.sentences:
            fh.write(" ".join(sent))
            fh.write("\n")


def write_vocabulary(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for word in vocab.frequency_order:
            fh.write(f"{word}\t{vocab.count(word)}\n")


def read_wordlist(path) -> tuple[str, ...]:
    """One word per line; blank lines ignored."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word:
                words.append(word)
    return tuple(words)
