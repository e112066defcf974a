"""Reference implementations written straight from the metric and ensemble
definitions.  They deliberately avoid every helper in ``rankmerge`` so a
shared bug cannot hide.
"""

from __future__ import annotations

import itertools
import math


def mrr_oracle(ranks):
    d = len(ranks)
    total = 0.0
    for r in ranks:
        total = total + 1.0 / r
    return total / d


def recall_oracle(ranks, k):
    hits = 0
    for r in ranks:
        if r <= k:
            hits += 1
    return hits / len(ranks)


def mean_rank_oracle(ranks):
    return sum(ranks) / len(ranks)


def ndcg_oracle(ranks, relevance):
    """NDCG by literal enumeration.

    ``ranks[c]`` is the 1-based predicted position of candidate c.  The ideal
    DCG is the maximum DCG over *every* permutation, found by brute force,
    rather than by sorting.
    """
    n = len(ranks)
    k = len([s for s in relevance if s > 0])
    if k == 0:
        return 0.0

    def dcg(gains_by_position):
        # s_i = relevance placed at position i, i = 1..K
        total = 0.0
        for i in range(1, k + 1):
            total += gains_by_position[i - 1] / math.log2(i + 1)
        return total

    placed = [None] * n
    for c in range(n):
        placed[ranks[c] - 1] = relevance[c]
    ideal = max(dcg(arrangement) for arrangement in itertools.permutations(relevance))
    return dcg(placed) / ideal


def two_step_oracle(mrr_ranks, ndcg_ranks, primary, rho_h, rho_t, rho_nn, rho_nm, p, enable=(True, True, True)):
    """Full two-step ranking from rank lists by set-builder definitions.

    ``mrr_ranks`` is a list (one per MRR model) of 1-based rank lists;
    ``primary`` indexes the designated MRR model.  Returns (order, tags).
    """
    n = len(ndcg_ranks)
    cands = range(n)

    def in_top(ranks, c, depth):
        return ranks[c] <= depth

    H = {c for c in cands if all(in_top(r, c, rho_h) for r in mrr_ranks)} if enable[0] else set()
    T = {c for c in cands if any(in_top(r, c, rho_t) for r in mrr_ranks)} if enable[1] else set()
    N = (
        {c for c in cands if in_top(ndcg_ranks, c, rho_nn) and any(in_top(r, c, rho_nm) for r in mrr_ranks)}
        if enable[2]
        else set()
    )
    C = H | T | N
    prim = mrr_ranks[primary]
    first = sorted(C, key=lambda c: (math.prod(r[c] for r in mrr_ranks), prim[c], c))
    rest = sorted(set(cands) - C, key=lambda c: ((ndcg_ranks[c] ** p) * prim[c], prim[c], c))
    tags = []
    for c in cands:
        if c in H:
            tags.append("H")
        elif c in T:
            tags.append("T")
        elif c in N:
            tags.append("N")
        else:
            tags.append("R")
    return first + rest, tags
