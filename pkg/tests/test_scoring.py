import numpy as np
import pytest
from hypothesis import given, strategies as st

from vsmeval.errors import ArgumentError, WordLookupError
from vsmeval.scoring import (
    Ranking,
    ScoreVector,
    WordPairList,
    cosine,
    rank_scores,
    read_scores,
    score_pairs,
    write_scores,
)
from vsmeval.vectors import VectorTable

from oracles import average_ranks_bruteforce


def test_cosine_identity():
    v = np.array([1.0, 2.0, -3.0])
    assert cosine(v, v) == pytest.approx(1.0)


def test_cosine_orthogonal():
    assert cosine([1, 0], [0, 1]) == 0.0


def test_cosine_hand_value():
    # (4+10+18) / (sqrt(14) * sqrt(77))
    assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(
        32 / (np.sqrt(14) * np.sqrt(77)), abs=1e-12
    )
    assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(0.974631846, abs=1e-9)


def test_cosine_zero_vector_is_zero():
    assert cosine([0, 0], [1, 2]) == 0.0


def test_cosine_dimension_mismatch():
    with pytest.raises(ArgumentError):
        cosine([1, 2], [1, 2, 3])


@given(
    st.lists(st.floats(-100, 100), min_size=2, max_size=6),
    st.floats(0.001, 1000),
    st.floats(0.001, 1000),
)
def test_cosine_positive_scale_invariance(v, alpha, beta):
    u = np.array(v)
    w = u[::-1].copy()
    if np.linalg.norm(u) == 0 or np.linalg.norm(w) == 0:
        return
    assert cosine(alpha * u, beta * w) == pytest.approx(
        cosine(u, w), abs=1e-12
    )


def _pairlist(pairs):
    return WordPairList(language="en", pairs=tuple(pairs),
                        source_ids=tuple(range(len(pairs))))


def test_score_identical_vectors_give_one():
    v = np.array([1.0, 2.0])
    table = VectorTable("en", 2, {"a": v, "b": v.copy()})
    scores = score_pairs(table, _pairlist([("a", "b")]))
    assert scores.scores[0] == pytest.approx(1.0)


def test_score_skip_policy_bookkeeping(rng):
    words = {f"w{i}": rng.normal(size=3) for i in range(14)}
    table = VectorTable("en", 3, words)
    pairs = [(f"w{2 * i}", f"w{2 * i + 1}") for i in range(7)]
    pairs += [("w0", "miss1"), ("miss2", "w1"), ("miss3", "miss4")]
    scores = score_pairs(table, _pairlist(pairs), oov_policy="skip")
    assert len(scores.scores) == 7
    assert set(scores.skipped) == {7, 8, 9}
    assert scores.skipped[9] == ("miss3", "miss4")


def test_score_error_policy_names_word():
    table = VectorTable("en", 2, {"a": np.ones(2)})
    with pytest.raises(WordLookupError, match="b"):
        score_pairs(table, _pairlist([("a", "b")]), oov_policy="error")


def test_scores_match_per_pair_cosine(rng):
    words = {f"w{i}": rng.normal(size=8) for i in range(100)}
    table = VectorTable("en", 8, words)
    pairs = [
        (f"w{rng.integers(100)}", f"w{rng.integers(100)}")
        for _ in range(353)
    ]
    scores = score_pairs(table, _pairlist(pairs))
    for idx, (w1, w2) in enumerate(pairs):
        u, v = words[w1], words[w2]
        expected = float(
            np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
        )
        assert scores.scores[idx] == pytest.approx(expected, abs=1e-12)


def test_degenerate_pairs_flagged():
    table = VectorTable("en", 2, {"a": np.zeros(2), "b": np.ones(2)})
    scores = score_pairs(table, _pairlist([("a", "b"), ("b", "b")]))
    assert scores.degenerate == frozenset({0})


def test_rank_simple():
    r = rank_scores(ScoreVector({0: 3.0, 1: 1.0, 2: 2.0}, "m"))
    assert r.ranks == {0: 1.0, 1: 3.0, 2: 2.0}


def test_rank_average_ties():
    r = rank_scores(ScoreVector({0: 5.0, 1: 5.0, 2: 1.0}, "m"))
    assert r.ranks == {0: 1.5, 1: 1.5, 2: 3.0}


def test_rank_requires_two_scores():
    with pytest.raises(ArgumentError):
        rank_scores(ScoreVector({0: 1.0}, "m"))


def test_ranks_match_bruteforce(rng):
    values = rng.choice([0.0, 0.25, 0.5, 1.0, 2.0], size=100)
    scores = ScoreVector(dict(enumerate(values)), "m")
    ranks = rank_scores(scores).as_array(tuple(range(100)))
    expected = average_ranks_bruteforce([-v for v in values])
    assert np.allclose(ranks, expected)


def test_rank_sum_invariant(rng):
    values = rng.normal(size=57)
    values[10:20] = values[0]  # force ties
    ranks = rank_scores(ScoreVector(dict(enumerate(values)), "m"))
    n = len(values)
    assert sum(ranks.ranks.values()) == pytest.approx(n * (n + 1) / 2)


def test_rank_invariant_under_monotone_transform(rng):
    values = rng.normal(size=40)
    s1 = ScoreVector(dict(enumerate(values)), "m")
    s2 = ScoreVector(dict(enumerate(np.exp(2 * values))), "m")
    assert rank_scores(s1).ranks == rank_scores(s2).ranks


def test_uniform_table_scaling_keeps_scores(rng):
    words = {f"w{i}": rng.normal(size=4) for i in range(10)}
    t1 = VectorTable("en", 4, words)
    t2 = VectorTable("en", 4, {w: 3.5 * v for w, v in words.items()})
    pairs = _pairlist([("w0", "w1"), ("w2", "w3")])
    s1 = score_pairs(t1, pairs)
    s2 = score_pairs(t2, pairs)
    for idx in s1.scores:
        assert s1.scores[idx] == pytest.approx(s2.scores[idx], abs=1e-12)


def test_score_tsv_roundtrip(tmp_path):
    pairs = _pairlist([("a", "b"), ("c", "d"), ("e", "f")])
    scores = ScoreVector({0: 0.5, 2: -0.25}, "m",
                         skipped={1: ("c",)})
    path = tmp_path / "scores.tsv"
    write_scores(scores, pairs, path)
    again = read_scores(path)
    assert again.scores == scores.scores
    assert again.skipped == scores.skipped
