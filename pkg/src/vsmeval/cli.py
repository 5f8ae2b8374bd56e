"""Command-line pipelines from corpora and score tables to report files.

Every command is deterministic given its manifest; stochastic commands
require an explicit --seed. Exit codes: 0 success, 2 usage/validation
error, 3 data/format error, 4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .agreement import (
    agreement_significance,
    apply_outlier_filter,
    cross_language_agreement,
    human_mean_scores,
    load_evaluation_set,
    quintile_agreement_analysis,
    save_evaluation_set,
    within_language_agreement,
)
from .bow import build_bow_table
from .combine import (
    fit_cca_tables,
    interpolate_scores,
    load_lexicon,
    monolingual_baseline,
    project_concat,
    save_cca_model,
)
from .corpus import (
    build_vocabulary,
    clean_tokens,
    read_corpus,
    read_wordlist,
    sample_corpus,
    write_corpus,
)
from .errors import (
    AlignmentError,
    ArgumentError,
    DegenerateError,
    FormatError,
    ValidationError,
    VsmevalError,
    WordLookupError,
)
from .manifest import RunManifest
from .scoring import (
    Ranking,
    ScoreVector,
    rank_scores,
    read_pair_list,
    read_scores,
    score_pairs,
    write_scores,
)
from .stats import kendall_tau_b, pearson, quintile_fscore, spearman
from .vectors import (
    load_vectors,
    save_vectors,
    vocabulary_coverage,
    write_coverage,
)

USAGE_EXIT = 2
DATA_EXIT = 3
DEGENERATE_EXIT = 4

_CORRELATIONS = {
    "spearman": spearman,
    "pearson": pearson,
    "kendall": kendall_tau_b,
}


def _fmt(x) -> str:
    """Round-tripping text form of a scalar statistic."""
    return repr(float(x))


def _write_tsv(path, manifest: RunManifest, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in manifest.comment_lines():
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _parse_tagged(value: str) -> tuple[str, str]:
    """'lang=path' -> (lang, path)."""
    if "=" not in value:
        raise ArgumentError(
            f"expected LANG=PATH, got {value!r}"
        )
    lang, path = value.split("=", 1)
    return lang, path


def _load_pairs_or_evalset(path, language):
    """A word-pair TSV or a full evaluation set; sniffed by header."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip() and not line.startswith("#"):
                header = line.split("\t")
                break
        else:
            raise FormatError("empty pair file", path=path)
    if len(header) >= 4 and header[3].strip() in ("batch",):
        return load_evaluation_set(path, language=language).pairs
    return read_pair_list(path, language=language)


def _target_words(path):
    """Target list for BOW rows: a plain wordlist or a pair file."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    if "\t" in first:
        pairs = _load_pairs_or_evalset(path, "und")
        return sorted({w for p in pairs.pairs for w in p})
    return list(read_wordlist(path))


def cmd_build_bow(args) -> int:
    corpus = read_corpus(args.corpus, args.language,
                         sentence_per_line=not args.document_mode)
    if args.clean:
        stopwords = (
            set(read_wordlist(args.stopwords)) if args.stopwords else None
        )
        corpus = clean_tokens(corpus, stopwords=stopwords)
    vocab = build_vocabulary(corpus)
    targets = _target_words(args.targets)
    table = build_bow_table(corpus, targets, vocab,
                            k=args.k, window=args.window)
    save_vectors(table, args.out)
    return 0


def cmd_sample(args) -> int:
    corpus = read_corpus(args.corpus, args.language)
    sampled = sample_corpus(corpus, args.fraction, args.seed)
    write_corpus(sampled, args.out)
    return 0


def cmd_score(args) -> int:
    table = load_vectors(args.vectors, language=args.language)
    pairs = _load_pairs_or_evalset(args.pairs, args.language)
    scores = score_pairs(table, pairs, oov_policy=args.oov_policy)
    manifest = RunManifest.collect(
        "score",
        {"oov_policy": args.oov_policy, "language": args.language},
        [args.vectors, args.pairs],
    )
    write_scores(scores, pairs, args.out,
                 header_lines=manifest.comment_lines())
    return 0


def _model_scores_vs_human(table, evaluation_set, aliases=None):
    human = human_mean_scores(evaluation_set)
    model = score_pairs(table, evaluation_set.pairs, oov_policy="skip",
                        aliases=aliases)
    common = sorted(set(model.scores) & set(human.scores))
    if len(common) < 2:
        raise DegenerateError("fewer than 2 covered pairs")
    return model, human, common


def cmd_eval(args) -> int:
    table = load_vectors(args.vectors, language=args.language)
    evaluation_set = load_evaluation_set(args.evalset,
                                         language=args.jl or args.language)
    model, human, common = _model_scores_vs_human(table, evaluation_set)
    corr = _CORRELATIONS[args.correlation]
    value = corr([model.scores[i] for i in common],
                 [human.scores[i] for i in common])
    manifest = RunManifest.collect(
        "eval", {"correlation": args.correlation},
        [args.vectors, args.evalset],
    )
    rows = [f"{args.correlation}\t{_fmt(value)}\t{len(common)}\t"
            f"{len(model.skipped)}"]
    header = "statistic\tvalue\tcovered_pairs\tskipped_pairs"
    if args.out:
        _write_tsv(args.out, manifest, header, rows)
    print(header)
    print(rows[0])
    return 0


def cmd_agree(args) -> int:
    sets = []
    for tagged in args.evalset:
        lang, path = _parse_tagged(tagged)
        sets.append((path, load_evaluation_set(path, language=lang)))
    if args.mode == "within":
        if len(sets) != 1:
            raise ArgumentError("within mode takes exactly one evaluation set")
        report = within_language_agreement(sets[0][1], K=args.subset_size)
    else:
        if len(sets) != 2:
            raise ArgumentError("cross mode takes exactly two evaluation sets")
        report = cross_language_agreement(sets[0][1], sets[1][1],
                                          K=args.subset_size)
    manifest = RunManifest.collect(
        "agree", {"mode": args.mode, "K": args.subset_size},
        [p for p, _ in sets],
    )
    header = "label\tmean\tstd\tsamples\tdegenerate"
    rows = [f"{report.label}\t{_fmt(report.mean)}\t{_fmt(report.std)}\t"
            f"{report.sample_count}\t{report.degenerate_count}"]
    _write_tsv(args.out, manifest, header, rows)
    if args.samples_out:
        _write_tsv(args.samples_out, manifest, "rho",
                   [repr(float(v)) for v in report.samples])
    print(rows[0])
    return 0


def _human_mean_ranking(evaluation_set) -> Ranking:
    return rank_scores(human_mean_scores(evaluation_set))


def cmd_quintiles(args) -> int:
    if args.mode in ("within", "cross"):
        sets, paths = [], []
        for tagged in args.evalset or []:
            lang, path = _parse_tagged(tagged)
            paths.append(path)
            sets.append(load_evaluation_set(path, language=lang))
        if args.mode == "within":
            if len(sets) != 1:
                raise ArgumentError("within mode takes one evaluation set")
            overlap = quintile_agreement_analysis(sets[0], K=args.subset_size,
                                                  q=args.quantiles)
        else:
            if len(sets) != 2:
                raise ArgumentError("cross mode takes two evaluation sets")
            overlap = quintile_agreement_analysis(sets[0], sets[1],
                                                  K=args.subset_size,
                                                  q=args.quantiles)
        inputs = paths
    else:  # model-human
        if not (args.scores and args.evalset and len(args.evalset) == 1):
            raise ArgumentError(
                "model-human mode needs --scores and one evaluation set"
            )
        lang, path = _parse_tagged(args.evalset[0])
        evaluation_set = load_evaluation_set(path, language=lang)
        model = read_scores(args.scores, provenance="model")
        human = human_mean_scores(evaluation_set)
        common = sorted(set(model.scores) & set(human.scores))
        if len(common) < args.quantiles:
            raise DegenerateError("too few covered pairs for quantile split")
        r_model = rank_scores(
            ScoreVector({i: model.scores[i] for i in common}, "model")
        )
        r_human = rank_scores(
            ScoreVector({i: human.scores[i] for i in common}, "human")
        )
        overlap = quintile_fscore(r_model, r_human, q=args.quantiles)
        inputs = [args.scores, path]
    manifest = RunManifest.collect(
        "quintiles",
        {"mode": args.mode, "q": args.quantiles, "K": args.subset_size},
        inputs,
    )
    header = "quintile\tf_score"
    rows = [f"{i + 1}\t{_fmt(f)}" for i, f in enumerate(overlap.f_scores)]
    _write_tsv(args.out, manifest, header, rows)
    for row in rows:
        print(row)
    return 0


def _score_file_words(path) -> dict[int, tuple[str, str]]:
    """Word columns of a score TSV, keyed by pair index."""
    words: dict[int, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#") or \
                    line.startswith("pair_index"):
                continue
            fields = line.split("\t")
            if len(fields) >= 4:
                words[int(fields[0])] = (fields[1], fields[2])
    return words


def cmd_combine(args) -> int:
    if args.method == "li":
        if not args.scores or len(args.scores) != 2:
            raise ArgumentError("li needs exactly two --scores files")
        s1 = read_scores(args.scores[0], provenance="model1")
        s2 = read_scores(args.scores[1], provenance="model2")
        common = sorted(set(s1.scores) & set(s2.scores))
        if not common:
            raise AlignmentError("score files share no pair indices")
        combined = interpolate_scores(
            ScoreVector({i: s1.scores[i] for i in common}, s1.provenance),
            ScoreVector({i: s2.scores[i] for i in common}, s2.provenance),
            args.lam,
        )
        manifest = RunManifest.collect(
            "combine", {"method": "li", "lambda": args.lam}, args.scores
        )
        words = _score_file_words(args.scores[0])
        header = "pair_index\tword1\tword2\tscore"
        rows = []
        for i in common:
            w1, w2 = words.get(i, ("?", "?"))
            rows.append(f"{i}\t{w1}\t{w2}\t{_fmt(combined.scores[i])}")
        _write_tsv(args.out, manifest, header, rows)
        return 0
    # cca
    if not args.vectors or len(args.vectors) != 2 or not args.lexicon:
        raise ArgumentError("cca needs two --vectors (LANG=PATH) and "
                            "--lexicon")
    (lang1, path1), (lang2, path2) = (
        _parse_tagged(v) for v in args.vectors
    )
    t1 = load_vectors(path1, language=lang1)
    t2 = load_vectors(path2, language=lang2)
    lexicon = load_lexicon(args.lexicon)
    model = fit_cca_tables(
        t1, t2, lexicon, eps=args.eps, components=args.components,
        max_dim=args.max_dim,
    )
    combined, aliases = project_concat(t1, t2, lexicon, model,
                                       side=args.side)
    save_vectors(combined, args.out)
    if args.model_out:
        save_cca_model(model, args.model_out)
    if args.report_out:
        manifest = RunManifest.collect(
            "combine",
            {"method": "cca", "eps": args.eps,
             "components": args.components, "side": args.side,
             "max_dim": args.max_dim},
            [path1, path2, args.lexicon],
        )
        header = "component\tcorrelation"
        rows = [f"{i + 1}\t{_fmt(c)}"
                for i, c in enumerate(model.correlations)]
        _write_tsv(args.report_out, manifest, header, rows)
    return 0


def cmd_qc(args) -> int:
    evaluation_set = load_evaluation_set(args.scores)
    cleaned, results = apply_outlier_filter(
        evaluation_set, threshold=args.threshold, iterate=args.iterate
    )
    manifest = RunManifest.collect(
        "qc", {"threshold": args.threshold, "iterate": args.iterate},
        [args.scores],
    )
    save_evaluation_set(cleaned, args.out,
                        header_lines=manifest.comment_lines())
    if args.log:
        header = "batch\tannotator\tstatistic\tverdict"
        rows = []
        for b in sorted(results):
            result = results[b]
            for j, stat in enumerate(result.statistics):
                verdict = "excluded" if j in result.excluded else "kept"
                rows.append(f"{b}\ta{j + 1:02d}\t{_fmt(stat)}\t{verdict}")
        _write_tsv(args.log, manifest, header, rows)
    n_excluded = sum(len(r.excluded) for r in results.values())
    print(f"excluded {n_excluded} annotator/batch assignments")
    return 0


def cmd_coverage(args) -> int:
    tables = []
    for tagged in args.vectors:
        lang, path = _parse_tagged(tagged)
        tables.append(load_vectors(path, language=lang))
    sets, paths = [], []
    for tagged in args.evalset:
        lang, path = _parse_tagged(tagged)
        paths.append(path)
        sets.append(load_evaluation_set(path, language=lang))
    report = vocabulary_coverage(tables, sets)
    write_coverage(report, sets[0], args.out)
    print(f"covered {len(report.covered)} / excluded {len(report.excluded)}")
    return 0


def cmd_baseline(args) -> int:
    corpus = read_corpus(args.corpus, args.language)
    if args.clean:
        corpus = clean_tokens(corpus)
    evaluation_set = load_evaluation_set(args.evalset,
                                         language=args.language)
    human = human_mean_scores(evaluation_set)
    targets = sorted({w for p in evaluation_set.pairs.pairs for w in p})

    def build(c):
        vocab = build_vocabulary(c)
        k = min(args.k, len(vocab))
        return build_bow_table(c, targets, vocab, k=k, window=args.window)

    result = monolingual_baseline(
        corpus, build, evaluation_set.pairs, human,
        combiner=args.method, fraction=args.fraction,
        reps=args.reps, seed=args.seed,
    )
    manifest = RunManifest.collect(
        "baseline",
        {"method": args.method, "fraction": args.fraction,
         "reps": args.reps, "seed": args.seed, "k": args.k,
         "window": args.window},
        [args.corpus, args.evalset],
    )
    header = "rep\trho"
    rows = [f"{i + 1}\t{_fmt(rho)}" for i, rho in enumerate(result.rhos)]
    rows.append(f"mean\t{_fmt(result.mean_rho)}")
    rows.append(f"failures\t{result.failures}")
    _write_tsv(args.out, manifest, header, rows)
    print(f"mean rho {_fmt(result.mean_rho)} over {len(result.rhos)} reps")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsmeval",
        description=__doc__,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-bow", help="PPMI bag-of-words vectors")
    p.add_argument("--corpus", required=True)
    p.add_argument("--language", default="und")
    p.add_argument("--targets", required=True,
                   help="wordlist or pair/evalset TSV for the matrix rows")
    p.add_argument("--k", type=int, default=10000)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--clean", action="store_true")
    p.add_argument("--stopwords")
    p.add_argument("--document-mode", action="store_true",
                   help="split sentences on punctuation, not one per line")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_bow)

    p = sub.add_parser("sample", help="reproducible sentence subsample")
    p.add_argument("--corpus", required=True)
    p.add_argument("--language", default="und")
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("score", help="cosine scores for word pairs")
    p.add_argument("--vectors", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--language", default="und")
    p.add_argument("--oov-policy", choices=["skip", "error"],
                   default="skip")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval", help="model vs human-mean correlation")
    p.add_argument("--vectors", required=True)
    p.add_argument("--evalset", required=True)
    p.add_argument("--language", default="und", help="training language")
    p.add_argument("--jl", help="judgment language tag for the eval set")
    p.add_argument("--correlation", choices=sorted(_CORRELATIONS),
                   default="spearman")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("agree", help="K-subset agreement statistics")
    p.add_argument("--mode", choices=["within", "cross"], required=True)
    p.add_argument("--evalset", action="append", required=True,
                   metavar="LANG=PATH")
    p.add_argument("--subset-size", type=int, default=6)
    p.add_argument("--out", required=True)
    p.add_argument("--samples-out")
    p.set_defaults(func=cmd_agree)

    p = sub.add_parser("quintiles", help="per-quintile relative F overlap")
    p.add_argument("--mode", choices=["within", "cross", "model-human"],
                   required=True)
    p.add_argument("--evalset", action="append", metavar="LANG=PATH")
    p.add_argument("--scores", help="model score TSV (model-human mode)")
    p.add_argument("--subset-size", type=int, default=6)
    p.add_argument("--quantiles", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_quintiles)

    p = sub.add_parser("combine", help="linear interpolation or CCA")
    p.add_argument("--method", choices=["li", "cca"], required=True)
    p.add_argument("--scores", nargs=2, help="two score TSVs (li)")
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--vectors", nargs=2, metavar="LANG=PATH",
                   help="two vector tables (cca)")
    p.add_argument("--lexicon", help="aligned word tuples TSV (cca)")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--components", type=int)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--side", choices=["l1", "l2"],
                   help="projected-only variant")
    p.add_argument("--out", required=True)
    p.add_argument("--model-out")
    p.add_argument("--report-out")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("qc", help="annotator outlier screening")
    p.add_argument("--scores", required=True, help="raw evaluation set TSV")
    p.add_argument("--threshold", type=float, default=1.45)
    p.add_argument("--iterate", action="store_true",
                   help="repeat exclusion to a fixpoint")
    p.add_argument("--out", required=True)
    p.add_argument("--log")
    p.set_defaults(func=cmd_qc)

    p = sub.add_parser("coverage", help="cross-language pair coverage")
    p.add_argument("--vectors", action="append", required=True,
                   metavar="LANG=PATH")
    p.add_argument("--evalset", action="append", required=True,
                   metavar="LANG=PATH")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("baseline", help="monolingual 80%-resample baseline")
    p.add_argument("--corpus", required=True)
    p.add_argument("--language", default="und")
    p.add_argument("--evalset", required=True)
    p.add_argument("--method", choices=["li", "cca"], default="li")
    p.add_argument("--fraction", type=float, default=0.8)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, default=10000)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--clean", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ArgumentError, ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (FormatError, AlignmentError, WordLookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DEGENERATE_EXIT


if __name__ == "__main__":
    sys.exit(main())
