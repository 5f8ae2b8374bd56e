"""Multilingual model combination: score-level linear interpolation and
CCA projection into a shared subspace with concatenated halves, plus the
monolingual 80%-resample baseline used to control for smoothing effects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .corpus import Corpus, sample_corpus
from .errors import (
    AlignmentError,
    ArgumentError,
    DegenerateError,
    FormatError,
    WordLookupError,
)
from .scoring import ScoreVector, WordPairList, score_pairs
from .stats import spearman
from .errors import ConstantInputError
from .vectors import VectorTable


@dataclass(frozen=True)
class TranslationLexicon:
    languages: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]  # one aligned word per language

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.languages):
                raise AlignmentError(
                    f"lexicon row {row!r} does not cover all languages"
                )
            if any(not w for w in row):
                raise AlignmentError(f"lexicon row {row!r} has an empty cell")

    def column(self, language: str) -> tuple[str, ...]:
        j = self.languages.index(language)
        return tuple(row[j] for row in self.rows)


@dataclass
class CcaModel:
    languages: tuple[str, str]
    mean_1: np.ndarray
    mean_2: np.ndarray
    projection_1: np.ndarray  # d1 x m
    projection_2: np.ndarray  # d2 x m
    correlations: np.ndarray  # m values in [0, 1], non-increasing
    regularization: float

    @property
    def n_components(self) -> int:
        return self.projection_1.shape[1]


def interpolate_scores(
    s1: ScoreVector, s2: ScoreVector, lam: float = 0.5
) -> ScoreVector:
    """Per pair: lam * s1 + (1 - lam) * s2 over identical index sets."""
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"lambda must lie in [0, 1], got {lam}")
    if set(s1.scores) != set(s2.scores):
        raise AlignmentError("score vectors cover different pair indices")
    combined = {
        idx: lam * s1.scores[idx] + (1.0 - lam) * s2.scores[idx]
        for idx in s1.scores
    }
    return ScoreVector(
        scores=combined,
        provenance=f"li({lam}):{s1.provenance}+{s2.provenance}",
    )


def _isqrt_psd(c: np.ndarray) -> np.ndarray:
    evals, evecs = scipy.linalg.eigh(c)
    evals = np.maximum(evals, np.finfo(float).tiny)
    return evecs @ ((evecs / np.sqrt(evals)).T)


def fit_cca(
    X: np.ndarray,
    Y: np.ndarray,
    eps: float = 1e-8,
    components: int | None = None,
    languages: tuple[str, str] = ("l1", "l2"),
) -> CcaModel:
    """Canonical correlation analysis via whitening + SVD of the
    cross-covariance.

    Columns are mean-centered; both covariance matrices get ``eps`` added
    to the diagonal so rank-deficient inputs stay well-posed. Canonical
    correlations are the singular values clipped to [0, 1].
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0]:
        raise ArgumentError("X and Y must be 2-d with equal row counts")
    n = X.shape[0]
    if n < 2:
        raise DegenerateError("CCA needs at least 2 aligned rows")
    mean_x = X.mean(axis=0)
    mean_y = Y.mean(axis=0)
    Xc = X - mean_x
    Yc = Y - mean_y
    if not (np.any(Xc) and np.any(Yc)):
        raise DegenerateError("rank-0 input: a view is constant")
    denom = n - 1
    cxx = Xc.T @ Xc / denom + eps * np.eye(X.shape[1])
    cyy = Yc.T @ Yc / denom + eps * np.eye(Y.shape[1])
    cxy = Xc.T @ Yc / denom
    isqrt_x = _isqrt_psd(cxx)
    isqrt_y = _isqrt_psd(cyy)
    u, s, vt = scipy.linalg.svd(isqrt_x @ cxy @ isqrt_y,
                                full_matrices=False)
    m = len(s) if components is None else min(components, len(s))
    return CcaModel(
        languages=languages,
        mean_1=mean_x,
        mean_2=mean_y,
        projection_1=isqrt_x @ u[:, :m],
        projection_2=isqrt_y @ vt[:m].T,
        correlations=np.clip(s[:m], 0.0, 1.0),
        regularization=eps,
    )


def _lookup(table: VectorTable, word: str, row: int) -> np.ndarray:
    if word not in table:
        raise WordLookupError(
            f"word {word!r} (lexicon row {row}) missing from "
            f"{table.language} table"
        )
    return table[word]


def aligned_matrices(
    t1: VectorTable,
    t2: VectorTable,
    lexicon: TranslationLexicon,
    normalize: bool = True,
    max_dim: int | None = None,
):
    """Stack lexicon-aligned vectors into two matrices, optionally
    unit-normalizing rows and capping dimensionality with a variance-
    preserving projection (for wide PPMI inputs).

    Returns (X, Y, pca_1, pca_2) where the pca entries are either None or
    the (mean, components) used to reduce each side; the caller folds
    them into downstream projections.
    """
    w1 = lexicon.column(t1.language)
    w2 = lexicon.column(t2.language)
    X = np.stack([_lookup(t1, w, i) for i, w in enumerate(w1)])
    Y = np.stack([_lookup(t2, w, i) for i, w in enumerate(w2)])
    if normalize:
        X = _unit_rows(X)
        Y = _unit_rows(Y)
    pca = [None, None]
    if max_dim is not None:
        out = []
        for side, M in enumerate((X, Y)):
            if M.shape[1] > max_dim:
                mean = M.mean(axis=0)
                _, _, vt = scipy.linalg.svd(M - mean, full_matrices=False)
                comps = vt[:max_dim].T
                pca[side] = (mean, comps)
                out.append((M - mean) @ comps)
            else:
                out.append(M)
        X, Y = out
    return X, Y, pca[0], pca[1]


def _unit_rows(M: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(M, axis=1, keepdims=True)
    return M / np.where(norms == 0, 1.0, norms)


def fit_cca_tables(
    t1: VectorTable,
    t2: VectorTable,
    lexicon: TranslationLexicon,
    eps: float = 1e-8,
    components: int | None = None,
    normalize: bool = True,
    max_dim: int | None = None,
) -> CcaModel:
    """fit_cca over lexicon-aligned table rows, with any dimensionality
    cap folded back into the stored projection matrices so projection of
    raw vectors remains a single centering + matrix product."""
    X, Y, pca1, pca2 = aligned_matrices(
        t1, t2, lexicon, normalize=normalize, max_dim=max_dim
    )
    model = fit_cca(X, Y, eps=eps, components=components,
                    languages=(t1.language, t2.language))
    if pca1 is not None:
        mean, comps = pca1
        model.mean_1 = mean + comps @ model.mean_1
        model.projection_1 = comps @ model.projection_1
    if pca2 is not None:
        mean, comps = pca2
        model.mean_2 = mean + comps @ model.mean_2
        model.projection_2 = comps @ model.projection_2
    model.normalize_rows = normalize
    return model


def project_concat(
    t1: VectorTable,
    t2: VectorTable,
    lexicon: TranslationLexicon,
    model: CcaModel,
    side: str | None = None,
) -> tuple[VectorTable, dict[str, str]]:
    """Multilingual vectors: per lexicon row, center and project each
    language's vector and concatenate the halves (dimension 2m).

    The result is keyed by the first language's word; the returned alias
    map sends the second language's surface form to that key. With
    ``side`` set to "l1" or "l2" only that projection is used (dimension
    m).
    """
    if side not in (None, "l1", "l2"):
        raise ArgumentError(f"side must be None, 'l1' or 'l2', got {side!r}")
    normalize = getattr(model, "normalize_rows", True)
    w1 = lexicon.column(t1.language)
    w2 = lexicon.column(t2.language)
    vectors: dict[str, np.ndarray] = {}
    aliases: dict[str, str] = {}
    for row, (a, b) in enumerate(zip(w1, w2)):
        v1 = _lookup(t1, a, row).astype(float)
        v2 = _lookup(t2, b, row).astype(float)
        if normalize:
            v1 = _unit_rows(v1[None, :])[0]
            v2 = _unit_rows(v2[None, :])[0]
        p1 = (v1 - model.mean_1) @ model.projection_1
        p2 = (v2 - model.mean_2) @ model.projection_2
        if side == "l1":
            vec = p1
        elif side == "l2":
            vec = p2
        else:
            vec = np.concatenate([p1, p2])
        vectors[a] = vec
        if b != a:
            aliases[b] = a
    dimension = model.n_components * (1 if side else 2)
    table = VectorTable(
        language=t1.language, dimension=dimension, vectors=vectors
    )
    return table, aliases


@dataclass
class BaselineResult:
    mean_rho: float
    rhos: tuple[float, ...]
    failures: int


def monolingual_baseline(
    corpus: Corpus,
    build,
    pairs: WordPairList,
    human: ScoreVector,
    combiner: str = "li",
    fraction: float = 0.8,
    reps: int = 5,
    seed: int = 0,
    lam: float = 0.5,
    cca_eps: float = 1e-8,
) -> BaselineResult:
    """Combine two models trained on independent ``fraction`` resamples of
    the same corpus and correlate with human scores, averaged over reps.

    ``build`` maps a Corpus to a VectorTable. Repetitions whose coverage
    collapses (fewer than 2 common covered pairs, or a constant score
    vector) are recorded as failures and excluded from the mean.
    """
    if combiner not in ("li", "cca"):
        raise ArgumentError(f"unknown combiner {combiner!r}")
    seeds = np.random.SeedSequence(seed).generate_state(2 * reps)
    rhos = []
    failures = 0
    for rep in range(reps):
        c1 = sample_corpus(corpus, fraction, int(seeds[2 * rep]))
        c2 = sample_corpus(corpus, fraction, int(seeds[2 * rep + 1]))
        m1 = build(c1)
        m2 = build(c2)
        try:
            if combiner == "li":
                s1 = score_pairs(m1, pairs, oov_policy="skip")
                s2 = score_pairs(m2, pairs, oov_policy="skip")
                common = sorted(set(s1.scores) & set(s2.scores))
                if len(common) < 2:
                    raise DegenerateError("coverage collapse")
                combined = interpolate_scores(
                    ScoreVector({i: s1.scores[i] for i in common},
                                s1.provenance),
                    ScoreVector({i: s2.scores[i] for i in common},
                                s2.provenance),
                    lam,
                )
            else:
                words = sorted(
                    {w for p in pairs.pairs for w in p
                     if w in m1 and w in m2}
                )
                if len(words) < 2:
                    raise DegenerateError("coverage collapse")
                lexicon = TranslationLexicon(
                    languages=(m1.language, m2.language),
                    rows=tuple((w, w) for w in words),
                )
                model = fit_cca_tables(m1, m2, lexicon, eps=cca_eps)
                table, aliases = project_concat(m1, m2, lexicon, model)
                combined = score_pairs(table, pairs, oov_policy="skip",
                                       aliases=aliases)
            common = sorted(set(combined.scores) & set(human.scores))
            if len(common) < 2:
                raise DegenerateError("coverage collapse")
            rho = spearman(
                [combined.scores[i] for i in common],
                [human.scores[i] for i in common],
            )
            rhos.append(rho)
        except (DegenerateError, ConstantInputError):
            failures += 1
    if not rhos:
        raise DegenerateError("all baseline repetitions failed")
    return BaselineResult(
        mean_rho=float(np.mean(rhos)), rhos=tuple(rhos), failures=failures
    )


def save_cca_model(model: CcaModel, path) -> None:
    """Text dump: header ``l1 l2 d1 d2 m eps`` then means, correlations
    and the two projection matrices row by row."""
    d1 = model.projection_1.shape[0]
    d2 = model.projection_2.shape[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{model.languages[0]} {model.languages[1]} "
            f"{d1} {d2} {model.n_components} {model.regularization!r}\n"
        )
        for vec in (model.mean_1, model.mean_2, model.correlations):
            fh.write(" ".join(repr(float(v)) for v in vec) + "\n")
        for matrix in (model.projection_1, model.projection_2):
            for row in matrix:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_cca_model(path) -> CcaModel:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 6:
            raise FormatError("bad CCA model header", path=path, line=1)
        l1, l2 = header[0], header[1]
        d1, d2, m = int(header[2]), int(header[3]), int(header[4])
        eps = float(header[5])
        rows = [np.array([float(v) for v in line.split()])
                for line in fh if line.strip()]
    expected = 3 + d1 + d2
    if len(rows) != expected:
        raise FormatError(
            f"expected {expected} data rows, got {len(rows)}", path=path
        )
    return CcaModel(
        languages=(l1, l2),
        mean_1=rows[0],
        mean_2=rows[1],
        correlations=rows[2],
        projection_1=np.stack(rows[3:3 + d1]),
        projection_2=np.stack(rows[3 + d1:]),
        regularization=eps,
    )


def load_lexicon(path) -> TranslationLexicon:
    """TSV with a header row of language codes and one aligned tuple per
    line."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh
                 if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty lexicon", path=path)
    languages = tuple(lines[0].split("\t"))
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        row = tuple(line.split("\t"))
        if len(row) != len(languages):
            raise FormatError(
                f"expected {len(languages)} columns", path=path, line=i
            )
        rows.append(row)
    return TranslationLexicon(languages=languages, rows=tuple(rows))


def save_lexicon(lexicon: TranslationLexicon, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(lexicon.languages) + "\n")
        for row in lexicon.rows:
            fh.write("\t".join(row) + "\n")
