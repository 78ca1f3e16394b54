import numpy as np
import pytest
from fractions import Fraction
from conftest import random_ranking
from measures.correlation import common_objects, tau_x_hat, tau_x_hat_exact
from rankings.ranking import Ranking, is_between, project, reverse

N = None
TRIALS = 1000


def _pair_with_overlap(rng, min_common=2):
    while True:
        n = int(rng.integers(2, 11))
        a, b = random_ranking(rng, n), random_ranking(rng, n)
        if len(common_objects(a, b)) >= min_common:
            return a, b


def _triple_with_overlap(rng):
    while True:
        n = int(rng.integers(3, 9))
        a, b, c = (random_ranking(rng, n, null_rate=0.2) for _ in range(3))
        if len(a.ranked_set & b.ranked_set & c.ranked_set) >= 2:
            return a, b, c


def _relabel(r: Ranking, perm: np.ndarray) -> Ranking:
    # Object i of the relabelled ranking is object perm[i] of r
    return Ranking(tuple(r.positions[int(p)] for p in perm))


def test_relevance(rng):
    for _ in range(TRIALS):
        a, b = _pair_with_overlap(rng, min_common=0)
        common = common_objects(a, b)
        assert tau_x_hat_exact(a, b) == tau_x_hat_exact(project(a, common), project(b, common))


def test_commutativity(rng):
    for _ in range(TRIALS):
        a, b = _pair_with_overlap(rng, min_common=0)
        assert tau_x_hat_exact(a, b) == tau_x_hat_exact(b, a)


def test_neutrality(rng):
    for _ in range(TRIALS):
        a, b = _pair_with_overlap(rng, min_common=0)
        perm = rng.permutation(a.universe_size)
        assert tau_x_hat_exact(a, b) == tau_x_hat_exact(_relabel(a, perm), _relabel(b, perm))


def _reduction_pair(rng):
    """
    a strict on its ranked objects; b copies a except inside a block of
    consecutive objects of a, which it reorders (ties allowed) without leaving
    the block's position range.
    """
    n = int(rng.integers(3, 10))
    positions = (rng.permutation(n) + 1).tolist()
    unranked = rng.random(n) < 0.2
    a = Ranking(tuple(None if u else p for p, u in zip(positions, unranked)))
    while a.num_ranked < 3:
        a = Ranking(tuple(positions))

    ranked = sorted(a.ranked_set, key=lambda v: a[v])
    m = int(rng.integers(2, len(ranked) + 1))
    start = int(rng.integers(0, len(ranked) - m + 1))
    block = ranked[start : start + m]
    low, high = a[block[0]], a[block[-1]]

    b_positions = list(a.positions)
    for v in block:
        b_positions[v] = int(rng.integers(low, high + 1))
    return a, Ranking(tuple(b_positions)), frozenset(block)


def test_reduction_general_form(rng):
    for _ in range(TRIALS):
        a, b, block = _reduction_pair(rng)
        n_bar = len(common_objects(a, b))
        m = len(block)
        inner = tau_x_hat_exact(project(a, block), project(b, block))
        expected = 1 - Fraction(m * (m - 1), n_bar * (n_bar - 1)) * (1 - inner)
        assert tau_x_hat_exact(a, b) == expected


@pytest.mark.parametrize(
    "a",
    [(1, 2, 3), (2, N, 1, 3), (4, 1, 3, 2, N)],
)
def test_reduction_literal_form_on_reversed_common_set(a):
    a = Ranking(a)
    b = reverse(a)
    block = common_objects(a, b)
    reduced = tau_x_hat(project(a, block), project(b, block))
    assert tau_x_hat(a, b) == 1 + 2 * reduced == -1


def test_relaxed_triangle_inequality(rng):
    equalities = 0
    for _ in range(TRIALS):
        a, b, c = _triple_with_overlap(rng)
        triple = a.ranked_set & b.ranked_set & c.ranked_set
        pa, pb, pc = (project(r, triple) for r in (a, b, c))
        lhs = tau_x_hat_exact(pa, pb) + tau_x_hat_exact(pb, pc)
        rhs = tau_x_hat_exact(pa, pc) + 1
        assert lhs <= rhs
        assert (lhs == rhs) == is_between(pa, pb, pc)
        equalities += lhs == rhs
    # Both branches of the equivalence get exercised
    assert 0 < equalities < TRIALS


@pytest.mark.parametrize(
    "a, b, c, between",
    [
        ((1, 2, 3), (1, 2, 3), (3, 2, 1), True),
        ((1, 2, 3), (1, 1, 1), (3, 2, 1), True),
        ((1, 2, 3), (1, 2, 2), (1, 3, 2), True),
        ((1, 2, 3), (3, 2, 1), (1, 2, 3), False),
        ((1, 1, 1), (1, 2, 3), (1, 1, 1), False),
        ((1, 2, N), (N, 2, 1), (2, 1, 3), True),
    ],
)
def test_relaxed_triangle_equality_on_constructed_triples(a, b, c, between):
    a, b, c = Ranking(a), Ranking(b), Ranking(c)
    triple = a.ranked_set & b.ranked_set & c.ranked_set
    pa, pb, pc = (project(r, triple) for r in (a, b, c))
    holds = tau_x_hat_exact(pa, pb) + tau_x_hat_exact(pb, pc) == tau_x_hat_exact(pa, pc) + 1
    assert is_between(pa, pb, pc) is between
    assert holds is between


def test_scaling(rng):
    for _ in range(TRIALS):
        a, b = _pair_with_overlap(rng)
        value = tau_x_hat_exact(a, b)
        assert -1 <= value <= 1

        common = common_objects(a, b)
        pa, pb = project(a, common), project(b, common)
        identical = np.array_equal(pa.matrix, pb.matrix)
        reversed_strict = pa.is_strict and np.array_equal(pa.matrix, pb.matrix.T) and pb.is_strict
        assert (value == 1) == identical
        assert (value == -1) == reversed_strict


def test_scaling_extremes():
    a = Ranking((1, 2, 3, N))
    assert tau_x_hat(a, Ranking((2, 3, 4, 1))) == 1
    assert tau_x_hat(a, Ranking((3, 2, 1, 1))) == -1
    # Reversing a tie gives the same tie, never -1
    assert tau_x_hat(Ranking((1, 1, 2)), Ranking((1, 1, N))) == 1
