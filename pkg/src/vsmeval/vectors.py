"""Dense word vector tables and their text interchange format.

The canonical on-disk representation is the word2vec text format: a
header line ``<vocab_size> <dimension>`` followed by one ``word v1 ... vd``
line per word. Both PPMI-derived tables and externally trained embeddings
flow through the same structure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlignmentError,
    ArgumentError,
    EmptyInputError,
    FormatError,
)


@dataclass
class VectorTable:
    language: str
    dimension: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        for word, vec in self.vectors.items():
            if vec.shape != (self.dimension,):
                raise ArgumentError(
                    f"vector for {word!r} has shape {vec.shape}, "
                    f"expected ({self.dimension},)"
                )

    def __contains__(self, word):
        return word in self.vectors

    def __getitem__(self, word):
        return self.vectors[word]

    def __len__(self):
        return len(self.vectors)


@dataclass
class CoverageReport:
    covered: tuple[int, ...]
    excluded: tuple[int, ...]
    missing_words: dict[int, tuple[tuple[str, str], ...]]
    # pair_index -> ((word, language), ...) for every absent lookup

    def __post_init__(self):
        if set(self.covered) & set(self.excluded):
            raise AlignmentError("covered and excluded pair sets overlap")


def _format_float(x: float) -> str:
    # shortest representation that round-trips exactly
    return repr(float(x))


def load_vectors(path, language: str = "und") -> VectorTable:
    """Parse a word2vec text file; the header must match the body exactly.

    Duplicate words keep the last occurrence, with a warning.
    """
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise FormatError("expected header '<vocab_size> <dimension>'",
                              path=path, line=1)
        try:
            vocab_size, dimension = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("non-integer header fields", path=path, line=1)
        n_rows = 0
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != dimension + 1:
                raise FormatError(
                    f"expected {dimension + 1} fields, got {len(fields)}",
                    path=path, line=lineno,
                )
            word = fields[0]
            try:
                vec = np.array([float(v) for v in fields[1:]])
            except ValueError:
                raise FormatError("unparseable float", path=path, line=lineno)
            if not np.all(np.isfinite(vec)):
                raise FormatError(
                    f"non-finite value in vector for {word!r}",
                    path=path, line=lineno,
                )
            if word in vectors:
                warnings.warn(
                    f"duplicate word {word!r} at line {lineno}; "
                    "keeping the last occurrence"
                )
            else:
                n_rows += 1
            vectors[word] = vec
            if n_rows > vocab_size:
                raise FormatError(
                    f"more than the declared {vocab_size} words",
                    path=path, line=lineno,
                )
    if n_rows != vocab_size:
        raise FormatError(
            f"header declares {vocab_size} words but body has {n_rows}",
            path=path,
        )
    return VectorTable(language=language, dimension=dimension, vectors=vectors)


def save_vectors(table: VectorTable, path) -> None:
    """Emit the word2vec text format; floats are written so that a reload
    reproduces the table bit-for-bit."""
    if len(table) == 0:
        raise EmptyInputError("refusing to save an empty vector table")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table)} {table.dimension}\n")
        for word, vec in table.vectors.items():
            fh.write(word)
            for v in vec:
                fh.write(" ")
                fh.write(_format_float(v))
            fh.write("\n")


def vocabulary_coverage(tables, eval_sets) -> CoverageReport:
    """Uniform cross-language pair exclusion: a pair index is dropped
    everywhere as soon as either of its words is missing from the matching
    language's table in ANY language version.

    ``tables`` and ``eval_sets`` are matched by language code; languages
    without a table are skipped (no model to cover them).
    """
    by_language = {t.language: t for t in tables}
    lengths = {len(s.pairs.pairs) for s in eval_sets}
    if len(lengths) > 1:
        raise AlignmentError(
            f"evaluation sets have differing pair counts: {sorted(lengths)}"
        )
    indices = None
    for s in eval_sets:
        ids = tuple(s.pairs.source_ids)
        if indices is None:
            indices = ids
        elif ids != indices:
            raise AlignmentError("evaluation sets have misaligned pair indices")
    covered, excluded = [], []
    missing: dict[int, list[tuple[str, str]]] = {}
    for pos, idx in enumerate(indices):
        absent = []
        for s in eval_sets:
            table = by_language.get(s.language)
            if table is None:
                continue
            w1, w2 = s.pairs.pairs[pos]
            for w in (w1, w2):
                if w not in table:
                    absent.append((w, s.language))
        if absent:
            excluded.append(idx)
            missing[idx] = absent
        else:
            covered.append(idx)
    return CoverageReport(
        covered=tuple(covered),
        excluded=tuple(excluded),
        missing_words={k: tuple(v) for k, v in missing.items()},
    )


def write_coverage(report: CoverageReport, eval_set, path) -> None:
    """TSV dump: pair_index, word1, word2, status, missing_in."""
    pos_of = {idx: pos for pos, idx in enumerate(eval_set.pairs.source_ids)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("pair_index\tword1\tword2\tstatus\tmissing_in\n")
        for idx in sorted(pos_of):
            w1, w2 = eval_set.pairs.pairs[pos_of[idx]]
            if idx in report.missing_words:
                langs = ",".join(
                    f"{w}:{lang}" for w, lang in report.missing_words[idx]
                )
                fh.write(f"{idx}\t{w1}\t{w2}\texcluded\t{langs}\n")
            else:
                fh.write(f"{idx}\t{w1}\t{w2}\tcovered\t\n")
