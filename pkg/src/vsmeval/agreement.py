"""Annotator quality control and the K-subset agreement protocol.

An evaluation set is a word-pair list with a pairs x annotators score
matrix on the 0-10 scale, partitioned into batches (blocks of 50 pairs,
the last possibly 49) each scored by the same 13 annotators. Agreement is
measured by averaging scores over every 6-annotator subset and
correlating against the complement (within-language) or against the
corresponding subset of another language (cross-language).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import (
    AlignmentError,
    ArgumentError,
    FormatError,
    ValidationError,
)
from .scoring import ScoreVector, WordPairList
from .stats import (
    QuintileOverlap,
    WelchResult,
    block_assignment,
    quintile_block_sizes,
    welch_t_test,
)

ANNOTATORS_PER_BATCH = 13
DEFAULT_SUBSET_SIZE = 6
OUTLIER_THRESHOLD = 1.45


@dataclass
class EvaluationSet:
    language: str
    dataset_name: str
    pairs: WordPairList
    scores: np.ndarray  # pairs x annotators, values in [0, 10]
    batches: tuple[tuple[int, ...], ...]  # row positions per batch

    def __post_init__(self):
        n = len(self.pairs)
        if self.scores.shape[0] != n:
            raise AlignmentError(
                f"{self.scores.shape[0]} score rows for {n} pairs"
            )
        finite = self.scores[np.isfinite(self.scores)]
        if finite.size and (finite.min() < 0 or finite.max() > 10):
            raise ValidationError("scores must lie in [0, 10]")
        seen = [p for batch in self.batches for p in batch]
        if sorted(seen) != list(range(n)):
            raise AlignmentError("batches must partition the pair positions")

    @property
    def n_annotators(self) -> int:
        return self.scores.shape[1]

    def batch_matrix(self, b: int) -> np.ndarray:
        return self.scores[list(self.batches[b]), :]

    def require_complete(self, n_annotators: int = ANNOTATORS_PER_BATCH):
        if self.n_annotators != n_annotators:
            raise ArgumentError(
                f"expected {n_annotators} annotator columns, "
                f"got {self.n_annotators}"
            )
        if not np.all(np.isfinite(self.scores)):
            raise ValidationError("incomplete scores (missing cells)")


@dataclass
class AgreementReport:
    label: str
    samples: np.ndarray  # per-subset Spearman correlations
    degenerate_count: int = 0

    @property
    def mean(self) -> float:
        return float(self.samples.mean())

    @property
    def std(self) -> float:
        # population std over the correlation samples
        return float(self.samples.std(ddof=0))

    @property
    def sample_count(self) -> int:
        return len(self.samples)


@dataclass
class OutlierResult:
    kept: tuple[int, ...]
    excluded: tuple[int, ...]
    statistics: np.ndarray  # per-annotator outlier statistic


def screen_annotators(
    responses: dict,
    similar_min: float = 7.0,
    dissimilar_max: float = 3.0,
) -> dict:
    """Qualification test: responses map annotator -> (similar_score,
    dissimilar_score). Fail iff the similar pair scored below
    ``similar_min`` or the dissimilar pair above ``dissimilar_max``
    (strict inequalities; boundary values pass).
    """
    verdicts = {}
    for annotator, (similar, dissimilar) in responses.items():
        for v in (similar, dissimilar):
            if not 0.0 <= v <= 10.0:
                raise ValidationError(
                    f"score {v} for annotator {annotator!r} outside [0, 10]"
                )
        verdicts[annotator] = not (
            similar < similar_min or dissimilar > dissimilar_max
        )
    return verdicts


def detect_outliers(
    batch_scores: np.ndarray, threshold: float = OUTLIER_THRESHOLD
) -> OutlierResult:
    """Single-pass outlier screen over one batch.

    For annotator j the statistic is |mean_j - mean(means of the others)|
    divided by the sample standard deviation of the others' means; j is
    excluded iff the statistic strictly exceeds the threshold. All
    statistics are computed on the original matrix before any exclusion.
    When the others' means have zero spread the statistic is +inf if the
    annotator's mean differs from theirs and 0 otherwise.
    """
    batch_scores = np.asarray(batch_scores, dtype=float)
    m = batch_scores.shape[1]
    if m < 3:
        raise ArgumentError("outlier detection needs at least 3 annotators")
    means = batch_scores.mean(axis=0)
    # zero-spread cutoff relative to the score scale; the statistic is a
    # ratio of spreads, so exact agreement must not amplify rounding noise
    tol = 1e-9 * max(1.0, float(np.abs(means).max()))
    stats = np.empty(m)
    for j in range(m):
        others = np.delete(means, j)
        spread = others.std(ddof=1)
        diff = abs(means[j] - others.mean())
        if spread <= tol:
            stats[j] = np.inf if diff > tol else 0.0
        else:
            stats[j] = diff / spread
    excluded = tuple(int(j) for j in range(m) if stats[j] > threshold)
    kept = tuple(int(j) for j in range(m) if stats[j] <= threshold)
    return OutlierResult(kept=kept, excluded=excluded, statistics=stats)


def enumerate_subsets(n: int = 13, k: int = DEFAULT_SUBSET_SIZE):
    """All C(n, k) index subsets in lexicographic order."""
    if not 0 < k < n:
        raise ArgumentError(f"need 0 < k < n, got n={n}, k={k}")
    return list(itertools.combinations(range(n), k))


def _subset_membership(n: int, k: int) -> np.ndarray:
    subsets = enumerate_subsets(n, k)
    member = np.zeros((len(subsets), n))
    for i, s in enumerate(subsets):
        member[i, list(s)] = 1.0
    return member


def _columnwise_spearman(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Spearman rho per column of two equally shaped n x m matrices;
    columns with a constant side come back NaN."""
    ra = rankdata(a, axis=0)
    rb = rankdata(b, axis=0)
    ra = ra - ra.mean(axis=0)
    rb = rb - rb.mean(axis=0)
    denom = np.sqrt((ra * ra).sum(axis=0) * (rb * rb).sum(axis=0))
    num = (ra * rb).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = np.where(denom > 0, num / np.maximum(denom, 1e-300), np.nan)
    return np.clip(rho, -1.0, 1.0)


def _batch_split_means(scores: np.ndarray, member: np.ndarray, k: int):
    """Subset-averaged and complement-averaged score matrices (n x C)."""
    n_annot = scores.shape[1]
    subset_means = scores @ member.T / k
    totals = scores.sum(axis=1, keepdims=True)
    comp_means = (totals - subset_means * k) / (n_annot - k)
    return subset_means, comp_means


def within_language_agreement(
    evaluation_set: EvaluationSet, K: int = DEFAULT_SUBSET_SIZE
) -> AgreementReport:
    """Per batch and per K-subset: Spearman between the subset's averaged
    pair scores and the complement's. Degenerate (constant) samples are
    dropped and counted rather than imputed."""
    evaluation_set.require_complete()
    member = _subset_membership(ANNOTATORS_PER_BATCH, K)
    samples = []
    degenerate = 0
    for b in range(len(evaluation_set.batches)):
        scores = evaluation_set.batch_matrix(b)
        subset_means, comp_means = _batch_split_means(scores, member, K)
        rho = _columnwise_spearman(subset_means, comp_means)
        bad = np.isnan(rho)
        degenerate += int(bad.sum())
        samples.append(rho[~bad])
    return AgreementReport(
        label=f"within:{evaluation_set.language}",
        samples=np.concatenate(samples),
        degenerate_count=degenerate,
    )


def _check_aligned(set1: EvaluationSet, set2: EvaluationSet):
    if set1.pairs.source_ids != set2.pairs.source_ids:
        raise AlignmentError("evaluation sets have different pair indices")
    if set1.batches != set2.batches:
        raise AlignmentError("evaluation sets have different batch partitions")


def cross_language_agreement(
    set1: EvaluationSet, set2: EvaluationSet, K: int = DEFAULT_SUBSET_SIZE
) -> AgreementReport:
    """Per batch and per K-subset S of annotator column indices: Spearman
    between set1's S-averaged scores and set2's scores averaged over the
    corresponding (same-index) subset."""
    set1.require_complete()
    set2.require_complete()
    _check_aligned(set1, set2)
    member = _subset_membership(ANNOTATORS_PER_BATCH, K)
    samples = []
    degenerate = 0
    for b in range(len(set1.batches)):
        m1 = set1.batch_matrix(b) @ member.T / K
        m2 = set2.batch_matrix(b) @ member.T / K
        rho = _columnwise_spearman(m1, m2)
        bad = np.isnan(rho)
        degenerate += int(bad.sum())
        samples.append(rho[~bad])
    return AgreementReport(
        label=f"cross:{set1.language}-{set2.language}",
        samples=np.concatenate(samples),
        degenerate_count=degenerate,
    )


def agreement_significance(
    within: AgreementReport, cross: AgreementReport
) -> WelchResult:
    """Welch's t-test over the raw per-subset correlation samples."""
    if within.sample_count == 0 or cross.sample_count == 0:
        raise ArgumentError("empty sample list")
    return welch_t_test(within.samples, cross.samples)


def significance_driver(
    sets: list[EvaluationSet], K: int = DEFAULT_SUBSET_SIZE
) -> dict[tuple[str, str, str], WelchResult]:
    """Welch test of every language's within-agreement samples against
    every language pair's cross-agreement samples.

    Four languages give 4 within reports x 6 unordered pairs = 24 tests.
    Keys are (within_language, pair_language_1, pair_language_2).
    """
    within = {s.language: within_language_agreement(s, K=K) for s in sets}
    cross = {}
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            pair = (sets[i].language, sets[j].language)
            cross[pair] = cross_language_agreement(sets[i], sets[j], K=K)
    results = {}
    for lang, w_report in within.items():
        for pair, c_report in cross.items():
            results[(lang, *pair)] = agreement_significance(
                w_report, c_report
            )
    return results


def quintile_agreement_analysis(
    set1: EvaluationSet,
    set2: EvaluationSet | None = None,
    K: int = DEFAULT_SUBSET_SIZE,
    q: int = 5,
) -> QuintileOverlap:
    """Average per-quintile relative F over all K-subset splits.

    Within-language mode (``set2`` omitted or identical) ranks subset vs
    complement averages; cross-language mode ranks corresponding subset
    averages. Rankings are descending with ties broken by stable pair
    position.
    """
    within_mode = set2 is None or set2 is set1
    set1.require_complete()
    if not within_mode:
        set2.require_complete()
        _check_aligned(set1, set2)
    member = _subset_membership(ANNOTATORS_PER_BATCH, K)
    f_sums = np.zeros(q)
    count = 0
    for b in range(len(set1.batches)):
        scores1 = set1.batch_matrix(b)
        if within_mode:
            m1, m2 = _batch_split_means(scores1, member, K)
        else:
            m1 = scores1 @ member.T / K
            m2 = set2.batch_matrix(b) @ member.T / K
        n, n_subsets = m1.shape
        sizes = quintile_block_sizes(n, q)
        cols = np.arange(n_subsets)
        # descending order; stable sort keeps pair-position order on ties
        order1 = np.argsort(-m1, axis=0, kind="stable")
        order2 = np.argsort(-m2, axis=0, kind="stable")
        block_idx = np.repeat(np.arange(q), sizes)
        b1 = np.empty_like(order1)
        b2 = np.empty_like(order2)
        b1[order1, cols[None, :]] = block_idx[:, None]
        b2[order2, cols[None, :]] = block_idx[:, None]
        for i in range(q):
            inter = ((b1 == i) & (b2 == i)).sum(axis=0)
            f_sums[i] += (inter / sizes[i]).sum()
        count += n_subsets
    return QuintileOverlap(
        f_scores=tuple(f_sums / count), block_sizes=()
    )


def human_mean_scores(evaluation_set: EvaluationSet) -> ScoreVector:
    """Per-pair arithmetic mean over all annotators (the human reference
    for model evaluation)."""
    means = evaluation_set.scores.mean(axis=1)
    scores = {
        idx: float(means[pos])
        for pos, idx in enumerate(evaluation_set.pairs.source_ids)
    }
    return ScoreVector(
        scores=scores, provenance=f"human:{evaluation_set.language}"
    )


def load_evaluation_set(
    path, language: str | None = None, dataset_name: str | None = None
) -> EvaluationSet:
    """TSV with header ``pair_index word1 word2 batch a01..aNN``; empty
    score cells load as NaN (only QC inputs/outputs may contain them)."""
    with open(path, encoding="utf-8") as fh:
        lines = [
            (i, ln.rstrip("\n"))
            for i, ln in enumerate(fh, start=1)
            if ln.strip() and not ln.startswith("#")
        ]
    if not lines:
        raise FormatError("empty evaluation set", path=path)
    header = lines[0][1].split("\t")
    if header[:4] != ["pair_index", "word1", "word2", "batch"]:
        raise FormatError(
            "header must start with pair_index, word1, word2, batch",
            path=path, line=lines[0][0],
        )
    n_annot = len(header) - 4
    if n_annot < 1:
        raise FormatError("no annotator columns", path=path, line=lines[0][0])
    ids, pairs, batch_labels, rows = [], [], [], []
    for lineno, line in lines[1:]:
        fields = line.split("\t")
        if len(fields) != len(header):
            raise FormatError(
                f"expected {len(header)} fields, got {len(fields)}",
                path=path, line=lineno,
            )
        ids.append(int(fields[0]))
        pairs.append((fields[1], fields[2]))
        batch_labels.append(fields[3])
        rows.append([float(v) if v != "" else np.nan for v in fields[4:]])
    batch_order = []
    batch_positions: dict[str, list[int]] = {}
    for pos, label in enumerate(batch_labels):
        if label not in batch_positions:
            batch_positions[label] = []
            batch_order.append(label)
        batch_positions[label].append(pos)
    name = dataset_name or str(path)
    return EvaluationSet(
        language=language or "und",
        dataset_name=name,
        pairs=WordPairList(
            language=language or "und",
            pairs=tuple(pairs),
            source_ids=tuple(ids),
        ),
        scores=np.array(rows, dtype=float),
        batches=tuple(tuple(batch_positions[l]) for l in batch_order),
    )


def save_evaluation_set(evaluation_set: EvaluationSet, path,
                        header_lines=()) -> None:
    n_annot = evaluation_set.n_annotators
    batch_of = {}
    for b, positions in enumerate(evaluation_set.batches):
        for pos in positions:
            batch_of[pos] = b
    with open(path, "w", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        cols = "\t".join(f"a{j + 1:02d}" for j in range(n_annot))
        fh.write(f"pair_index\tword1\tword2\tbatch\t{cols}\n")
        for pos in range(len(evaluation_set.pairs)):
            idx = evaluation_set.pairs.source_ids[pos]
            w1, w2 = evaluation_set.pairs.pairs[pos]
            cells = "\t".join(
                "" if np.isnan(v) else repr(float(v))
                for v in evaluation_set.scores[pos]
            )
            fh.write(f"{idx}\t{w1}\t{w2}\t{batch_of[pos]}\t{cells}\n")


def apply_outlier_filter(
    evaluation_set: EvaluationSet,
    threshold: float = OUTLIER_THRESHOLD,
    iterate: bool = False,
) -> tuple[EvaluationSet, dict[int, OutlierResult]]:
    """Run the outlier screen per batch and drop excluded annotators.

    Default is the single-pass mode (statistics computed before any
    exclusion); ``iterate`` repeats until a fixpoint. The cleaned set
    keeps each batch's surviving columns left-packed; shorter batches are
    NaN-padded so the table stays rectangular.
    """
    results: dict[int, OutlierResult] = {}
    kept_per_batch = []
    for b in range(len(evaluation_set.batches)):
        matrix = evaluation_set.batch_matrix(b)
        result = detect_outliers(matrix, threshold)
        if iterate:
            kept = list(result.kept)
            while len(kept) >= 3:
                sub = detect_outliers(matrix[:, kept], threshold)
                if not sub.excluded:
                    break
                kept = [kept[j] for j in sub.kept]
            result = OutlierResult(
                kept=tuple(kept),
                excluded=tuple(
                    j for j in range(matrix.shape[1]) if j not in kept
                ),
                statistics=result.statistics,
            )
        results[b] = result
        kept_per_batch.append(result.kept)
    width = max(len(k) for k in kept_per_batch)
    cleaned = np.full((len(evaluation_set.pairs), width), np.nan)
    for b, kept in enumerate(kept_per_batch):
        positions = list(evaluation_set.batches[b])
        cleaned[np.ix_(positions, range(len(kept)))] = \
            evaluation_set.scores[np.ix_(positions, list(kept))]
    cleaned_set = EvaluationSet(
        language=evaluation_set.language,
        dataset_name=evaluation_set.dataset_name,
        pairs=evaluation_set.pairs,
        scores=cleaned,
        batches=evaluation_set.batches,
    )
    return cleaned_set, results
