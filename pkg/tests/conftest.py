import numpy as np
import pytest
from rankings.ranking import Instance, Ranking

N = None

PANEL_JUDGES = [
    (1, 2, N, N, N),
    (1, 2, N, N, N),
    (N, 1, 2, N, N),
    (N, 1, 2, N, N),
    (N, N, 1, 2, N),
    (N, N, 1, 2, N),
    (N, N, 1, 2, N),
    (N, N, N, 1, 2),
    (N, N, N, 1, 2),
    (N, 1, N, N, 2),
    (5, 4, 3, 2, 1),
]

PANEL_OPTIMA = [Ranking((4, 5, 1, 2, 3)), Ranking((4, 5, 2, 3, 1))]

PANEL_ROWS = {
    (4, 5, 2, 3, 1): [0.1, 0.1, -0.1, -0.1, 0.1, 0.1, 0.1, -0.1, -0.1, -0.1, 0.6],
    (4, 5, 1, 2, 3): [0.1, 0.1, -0.1, -0.1, 0.1, 0.1, 0.1, 0.1, 0.1, -0.1, 0.2],
}


def random_ranking(
    rng: np.random.Generator, n: int, null_rate: float = 0.3, min_ranked: int = 0
) -> Ranking:
    """
    Positions drawn from 1..n (ties likely), each object unranked with null_rate.
    """
    while True:
        positions = rng.integers(1, n + 1, size=n).tolist()
        mask = rng.random(n) < null_rate
        r = Ranking(tuple(None if m else p for p, m in zip(positions, mask)))
        if r.num_ranked >= min_ranked:
            return r


def random_complete(rng: np.random.Generator, n: int) -> Ranking:
    return random_ranking(rng, n, null_rate=0.0)


def random_strict_complete(rng: np.random.Generator, n: int) -> Ranking:
    return Ranking(tuple((rng.permutation(n) + 1).tolist()))


def random_instance(
    rng: np.random.Generator, n: int, k: int, null_rate: float = 0.3
) -> Instance:
    judges = [random_ranking(rng, n, null_rate) for _ in range(k - 1)]
    # At least one judge carries a pairwise preference
    judges.append(random_ranking(rng, n, null_rate, min_ranked=2))
    return Instance.from_rankings(judges)


@pytest.fixture
def panel() -> Instance:
    return Instance.from_rankings(PANEL_JUDGES)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)
