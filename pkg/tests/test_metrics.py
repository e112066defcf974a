import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import mean_rank_oracle, mrr_oracle, ndcg_oracle, recall_oracle
from rankmerge import Dataset, QuestionRecord, RankVector, ValidationError
from rankmerge.metrics import evaluate, mean_rank, mrr, ndcg_question, recall_at_k


@pytest.mark.parametrize("ranks, expected", [([1], 1.0), ([1, 2, 4], 7 / 12), ([10, 10], 0.1)])
def test_mrr(ranks, expected):
    assert mrr(ranks) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("ranks, k, expected", [([1, 2, 4], 1, 1 / 3), ([1, 2, 4], 5, 1.0), ([6], 5, 0.0)])
def test_recall(ranks, k, expected):
    assert recall_at_k(ranks, k) == expected


@pytest.mark.parametrize("ranks, expected", [([1], 1.0), ([1, 2, 4], 7 / 3), ([3, 5], 4.0)])
def test_mean_rank(ranks, expected):
    assert mean_rank(ranks) == expected


@pytest.mark.parametrize("fn", [mrr, mean_rank, lambda r: recall_at_k(r, 1)])
def test_rank_metric_errors(fn):
    with pytest.raises(ValidationError):
        fn([])
    with pytest.raises(ValidationError):
        fn([1, 0])


def test_recall_k_must_be_positive():
    with pytest.raises(ValidationError):
        recall_at_k([1], 0)


def test_ndcg_worked_example():
    # Positions 1, 2, 3 hold relevances 1, 0, 2/3; K = 2.
    # Frozen from the brute-force oracle: 0.7039180890341348.
    got = ndcg_question(RankVector((1, 2, 3)), [1.0, 0.0, 2 / 3])
    assert got == pytest.approx(0.7039180890341348, abs=1e-12)
    assert round(got, 6) == 0.703918


def test_ndcg_ideal_order_is_one():
    rel = [0.0, 1 / 3, 1.0, 2 / 3]
    ideal = RankVector.from_order([2, 3, 1, 0])
    assert ndcg_question(ideal, rel) == 1.0


def test_ndcg_all_zero_is_zero():
    assert ndcg_question(RankVector((2, 1, 3)), [0.0, 0.0, 0.0]) == 0.0


def test_ndcg_errors():
    with pytest.raises(ValidationError):
        ndcg_question(RankVector((1, 2)), [1.0])
    with pytest.raises(ValidationError):
        ndcg_question(RankVector((1, 2)), [1.0, 2.0])


@st.composite
def ranked_relevance(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    rel = draw(st.lists(st.sampled_from([0.0, 1 / 3, 2 / 3, 1.0]) | st.floats(0, 1), min_size=n, max_size=n))
    return RankVector(tuple(perm)), rel


@settings(max_examples=300, deadline=None)
@given(ranked_relevance())
def test_ndcg_matches_brute_force(case):
    rv, rel = case
    assert ndcg_question(rv, rel) == pytest.approx(ndcg_oracle(list(rv.ranks), rel), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(ranked_relevance(max_n=30))
def test_ndcg_bounded(case):
    rv, rel = case
    assert 0.0 <= ndcg_question(rv, rel) <= 1.0 + 1e-12


@settings(max_examples=200, deadline=None)
@given(ranked_relevance(max_n=12), st.randoms(use_true_random=False))
def test_ndcg_invariant_under_swapping_equal_relevance(case, rnd):
    rv, rel = case
    order = list(rv.order)
    # Shuffle candidates among positions that hold equal relevance.
    by_value = {}
    for pos, c in enumerate(order):
        by_value.setdefault(rel[c], []).append(pos)
    new_order = order[:]
    for positions in by_value.values():
        cands = [order[p] for p in positions]
        rnd.shuffle(cands)
        for p, c in zip(positions, cands):
            new_order[p] = c
    assert ndcg_question(RankVector.from_order(new_order), rel) == pytest.approx(ndcg_question(rv, rel), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 100), min_size=1, max_size=50), st.integers(1, 100))
def test_rank_metrics_match_direct_formulas(ranks, k):
    assert mrr(ranks) == mrr_oracle(ranks)
    assert recall_at_k(ranks, k) == recall_oracle(ranks, k)
    assert mean_rank(ranks) == mean_rank_oracle(ranks)
    assert mrr(ranks) >= recall_at_k(ranks, 1)


# -- evaluate -------------------------------------------------------------------------


def test_evaluate_single_perfect_question():
    ds = Dataset((QuestionRecord("q", 3, 0, (1.0, 2 / 3, 0.0)),))
    rep = evaluate({"q": RankVector((1, 2, 3))}, ds)
    assert rep.mrr == 1.0
    assert rep.ndcg == 1.0
    assert rep.d == 1


def test_evaluate_two_questions():
    ds = Dataset((QuestionRecord("a", 3, 0), QuestionRecord("b", 3, 2)))
    rep = evaluate({"a": RankVector((1, 2, 3)), "b": RankVector((1, 3, 2))}, ds)
    assert rep.mrr == 0.75
    assert rep.mean_rank == 1.5
    assert rep.recall_at == {1: 0.5, 5: 1.0, 10: 1.0}
    assert rep.ndcg is None
    assert "ndcg" not in rep.as_table()


def test_evaluate_coverage_gap():
    ds = Dataset((QuestionRecord("a", 2, 0), QuestionRecord("b", 2, 0)))
    with pytest.raises(ValidationError, match="b"):
        evaluate({"a": RankVector((1, 2))}, ds)


def test_evaluate_ndcg_averages_only_questions_with_relevance():
    ds = Dataset(
        (
            QuestionRecord("a", 2, 0, (0.0, 1.0)),
            QuestionRecord("b", 2, 0),
            QuestionRecord("c", 2, 0, (0.0, 0.0)),
        )
    )
    rankings = {q: RankVector((1, 2)) for q in "abc"}
    expected_a = ndcg_oracle([1, 2], [0.0, 1.0])
    assert evaluate(rankings, ds).ndcg == pytest.approx((expected_a + 0.0) / 2)
    assert evaluate(rankings, ds, ndcg_skip_empty=True).ndcg == pytest.approx(expected_a)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 15), st.integers(0, 10**6))
def test_rank_metrics_depend_only_on_gt_rank(n, seed):
    rng = random.Random(seed)
    gt = rng.randrange(n)
    ds = Dataset((QuestionRecord("q", n, gt),))
    order = list(range(n))
    rng.shuffle(order)
    a = evaluate({"q": RankVector.from_order(order)}, ds)
    gt_pos = order.index(gt)
    others = [c for c in order if c != gt]
    rng.shuffle(others)
    others.insert(gt_pos, gt)
    b = evaluate({"q": RankVector.from_order(others)}, ds)
    assert (a.mrr, a.mean_rank, a.recall_at) == (b.mrr, b.mean_rank, b.recall_at)


def test_recall_nondecreasing_in_k():
    ds = Dataset(tuple(QuestionRecord(f"q{i}", 20, i) for i in range(20)))
    rankings = {f"q{i}": RankVector(tuple(range(1, 21))) for i in range(20)}
    rep = evaluate(rankings, ds, recall_ks=(10, 1, 5, 20))
    values = list(rep.recall_at.values())
    assert list(rep.recall_at) == [1, 5, 10, 20]
    assert values == sorted(values)
