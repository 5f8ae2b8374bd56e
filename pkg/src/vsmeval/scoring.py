"""Word-pair scoring: cosine similarity against a vector table, and
rankings with the average-rank tie convention (rank 1 = most similar).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import ArgumentError, FormatError, WordLookupError
from .vectors import VectorTable


@dataclass(frozen=True)
class WordPairList:
    language: str
    pairs: tuple[tuple[str, str], ...]
    source_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.pairs) != len(self.source_ids):
            raise ArgumentError("pairs and source_ids differ in length")
        if len(set(self.source_ids)) != len(self.source_ids):
            raise ArgumentError("pair indices must be unique")

    def __len__(self):
        return len(self.pairs)


@dataclass
class ScoreVector:
    scores: dict[int, float]  # pair index -> score
    provenance: str
    skipped: dict[int, tuple[str, ...]] = field(default_factory=dict)
    degenerate: frozenset[int] = frozenset()  # zero-norm cosine pairs

    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.scores))

    def as_array(self, indices=None) -> np.ndarray:
        if indices is None:
            indices = self.indices()
        return np.array([self.scores[i] for i in indices])


@dataclass
class Ranking:
    ranks: dict[int, float]  # pair index -> rank (1 = best), average ties

    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.ranks))

    def as_array(self, indices=None) -> np.ndarray:
        if indices is None:
            indices = self.indices()
        return np.array([self.ranks[i] for i in indices])


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); defined as 0.0 when either norm is zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ArgumentError(
            f"dimension mismatch: {u.shape} vs {v.shape}"
        )
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def score_pairs(
    table: VectorTable,
    pairs: WordPairList,
    oov_policy: str = "skip",
    aliases: dict[str, str] | None = None,
) -> ScoreVector:
    """One cosine score per covered pair.

    With ``oov_policy="skip"`` out-of-vocabulary pairs are omitted and
    recorded; with ``"error"`` the first miss aborts. ``aliases`` maps
    alternate surface forms onto table keys (used by combined tables).
    """
    if oov_policy not in ("skip", "error"):
        raise ArgumentError(f"unknown oov_policy {oov_policy!r}")
    scores: dict[int, float] = {}
    skipped: dict[int, tuple[str, ...]] = {}
    degenerate = set()
    for (w1, w2), idx in zip(pairs.pairs, pairs.source_ids):
        missing = []
        vecs = []
        for w in (w1, w2):
            key = w if w in table else (aliases or {}).get(w, w)
            if key in table:
                vecs.append(table[key])
            else:
                missing.append(w)
        if missing:
            if oov_policy == "error":
                raise WordLookupError(
                    f"word {missing[0]!r} of pair {idx} not in table"
                )
            skipped[idx] = tuple(missing)
            continue
        value = cosine(vecs[0], vecs[1])
        if value == 0.0 and (
            np.linalg.norm(vecs[0]) == 0.0 or np.linalg.norm(vecs[1]) == 0.0
        ):
            degenerate.add(idx)
        scores[idx] = value
    return ScoreVector(
        scores=scores,
        provenance=f"cosine:{table.language}",
        skipped=skipped,
        degenerate=frozenset(degenerate),
    )


def rank_scores(scores: ScoreVector) -> Ranking:
    """Descending ranks (1 = highest score); ties get the mean of their
    rank positions."""
    indices = scores.indices()
    if len(indices) < 2:
        raise ArgumentError("ranking needs at least 2 scores")
    values = scores.as_array(indices)
    ranks = rankdata(-values, method="average")
    return Ranking(ranks=dict(zip(indices, ranks)))


def read_pair_list(path, language: str = "und") -> WordPairList:
    """TSV of ``pair_index<TAB>word1<TAB>word2``; a header row is allowed."""
    pairs, ids = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if lineno == 1 and fields[0] == "pair_index":
                continue
            if len(fields) < 3:
                raise FormatError("expected pair_index, word1, word2",
                                  path=path, line=lineno)
            try:
                ids.append(int(fields[0]))
            except ValueError:
                raise FormatError("non-integer pair index",
                                  path=path, line=lineno)
            pairs.append((fields[1], fields[2]))
    return WordPairList(
        language=language, pairs=tuple(pairs), source_ids=tuple(ids)
    )


def write_scores(scores: ScoreVector, pairs: WordPairList, path,
                 header_lines=()) -> None:
    """TSV dump ``pair_index word1 word2 score``; skipped pairs appear as
    trailing ``#OOV`` comment lines."""
    word_of = dict(zip(pairs.source_ids, pairs.pairs))
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("pair_index\tword1\tword2\tscore\n")
        for idx in sorted(scores.scores):
            w1, w2 = word_of.get(idx, ("?", "?"))
            fh.write(f"{idx}\t{w1}\t{w2}\t{scores.scores[idx]!r}\n")
        for idx in sorted(scores.skipped):
            w1, w2 = word_of.get(idx, ("?", "?"))
            missing = ",".join(scores.skipped[idx])
            fh.write(f"#OOV\t{idx}\t{w1}\t{w2}\t{missing}\n")


def read_scores(path, provenance: str = "file") -> ScoreVector:
    scores: dict[int, float] = {}
    skipped: dict[int, tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#OOV\t"):
                fields = line.split("\t")
                skipped[int(fields[1])] = tuple(fields[4].split(","))
                continue
            if line.startswith("#") or line.startswith("pair_index"):
                continue
            fields = line.split("\t")
            if len(fields) < 4:
                raise FormatError("expected 4 columns", path=path, line=lineno)
            scores[int(fields[0])] = float(fields[3])
    return ScoreVector(scores=scores, provenance=provenance, skipped=skipped)
