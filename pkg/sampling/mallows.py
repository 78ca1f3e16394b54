import itertools
import numpy as np
from dataclasses import dataclass
from typing import Iterable, Iterator
from config.settings import MAX_EXACT_PMF_N
from measures.distance import d_ks
from rankings.ranking import Ranking, RankingError, as_ranking, canonical, project, psi
from utils.logger import Logger

logger = Logger.get_logger()


@dataclass(frozen=True)
class MallowsParams:
    """
    Mallows phi-model around a strict complete reference ranking.
    """

    reference: Ranking
    phi: float

    def __post_init__(self) -> None:
        reference = as_ranking(self.reference)
        if not (reference.is_complete and reference.is_strict):
            raise RankingError(f"Reference must be strict and complete, got {reference}")
        if not 0 < self.phi <= 1:
            raise ValueError(f"phi must lie in (0, 1], got {self.phi}")
        object.__setattr__(self, "reference", reference)

    @property
    def n(self) -> int:
        return self.reference.universe_size

    @property
    def order(self) -> tuple[int, ...]:
        """Objects of the reference from best to worst."""
        return psi(self.reference).objects


def derive_rng(base_seed: int, judge_index: int) -> np.random.Generator:
    """
    Per-judge generator that depends only on (base_seed, judge_index).
    """
    return np.random.default_rng(
        np.random.SeedSequence(base_seed, spawn_key=(judge_index,))
    )


def insertion_probabilities(phi: float, i: int) -> np.ndarray:
    """
    Probabilities of inserting the i-th reference object at ranks 1..i.
    """
    if i < 1:
        raise ValueError(f"Insertion step must be at least 1, got {i}")
    weights = phi ** np.arange(i - 1, -1, -1, dtype=np.float64)
    return weights / weights.sum()


def normalization_constant(phi: float, n: int) -> float:
    return float(np.prod([np.sum(phi ** np.arange(i)) for i in range(1, n + 1)]))


def kendall_distance(a: Ranking, b: Ranking) -> int:
    """Number of discordant pairs between two strict complete rankings."""
    return round(d_ks(a, b))


def mallows_pmf(params: MallowsParams, r: Ranking) -> float:
    r = as_ranking(r)
    if not (r.is_complete and r.is_strict):
        raise RankingError(f"The Mallows pmf is defined on strict complete rankings, got {r}")
    if r.universe_size != params.n:
        raise RankingError(f"Ranking {r} does not match a reference over {params.n} objects")
    if params.n > MAX_EXACT_PMF_N:
        raise RankingError(f"Exact pmf is capped at n={MAX_EXACT_PMF_N}, got {params.n}")
    distance = kendall_distance(r, params.reference)
    return params.phi**distance / normalization_constant(params.phi, params.n)


def _order_to_ranking(order: Iterable[int], n: int) -> Ranking:
    positions: list[int | None] = [None] * n
    for rank, v in enumerate(order):
        positions[v] = rank + 1
    return Ranking(tuple(positions))


def _insert_order(
    order: tuple[int, ...], phi: float, rng: np.random.Generator
) -> list[int]:
    sampled: list[int] = []
    for i, v in enumerate(order, start=1):
        j = rng.choice(i, p=insertion_probabilities(phi, i))
        sampled.insert(int(j), v)
    return sampled


def rim_sample(params: MallowsParams, rng: np.random.Generator) -> Ranking:
    """
    Repeated insertion: the i-th reference object goes to rank j <= i with
    probability phi^(i-j) / (1 + phi + ... + phi^(i-1)).
    """
    return _order_to_ranking(_insert_order(params.order, params.phi, rng), params.n)


def rim_sample_many(
    params: MallowsParams, size: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Draws `size` rankings at once; row k holds the positions of sample k.
    """
    n = params.n
    slots = np.full((size, n), -1, dtype=np.int64)
    for i in range(1, n + 1):
        cumulative = np.cumsum(insertion_probabilities(params.phi, i))
        cumulative[-1] = 1.0
        j = np.searchsorted(cumulative, rng.random(size), side="right")
        placed = slots[:, : i - 1]
        placed += placed >= j[:, None]
        slots[:, i - 1] = j

    positions = np.empty_like(slots)
    positions[:, list(params.order)] = slots + 1
    return positions


def _check_subset(subset: Iterable[int], n: int) -> frozenset[int]:
    chosen = frozenset(int(v) for v in subset)
    if any(not 0 <= v < n for v in chosen):
        raise RankingError(f"Subset {sorted(chosen)} is not inside a universe of {n}")
    return chosen


def rime1_sample(
    params: MallowsParams, subset: Iterable[int], rng: np.random.Generator
) -> Ranking:
    """
    Projects the reference onto the subset first, then runs repeated insertion
    over the projected objects only.
    """
    chosen = _check_subset(subset, params.n)
    if not chosen:
        raise RankingError("RIME1 needs a non-empty subset")
    order = tuple(v for v in params.order if v in chosen)
    return _order_to_ranking(_insert_order(order, params.phi, rng), params.n)


def rime2_sample(
    params: MallowsParams, subset: Iterable[int], rng: np.random.Generator
) -> Ranking:
    """
    Runs repeated insertion over the full reference, then unranks objects
    outside the subset and renumbers the survivors densely.
    """
    chosen = _check_subset(subset, params.n)
    full = rim_sample(params, rng)
    return canonical(project(full, chosen))


def all_strict_rankings(n: int) -> Iterator[Ranking]:
    if n > MAX_EXACT_PMF_N:
        raise RankingError(f"Permutation enumeration is capped at n={MAX_EXACT_PMF_N}")
    for perm in itertools.permutations(range(1, n + 1)):
        yield Ranking(perm)


def pairwise_order_probability(params: MallowsParams, i: int, j: int) -> float:
    """
    Exact probability that v_i is ranked ahead of v_j under the full model.
    """
    if i == j or not (0 <= i < params.n and 0 <= j < params.n):
        raise ValueError(f"Need two distinct objects of the universe, got {i} and {j}")
    total = 0.0
    for r in all_strict_rankings(params.n):
        if r[i] < r[j]:
            total += mallows_pmf(params, r)
    return total


def rime1_pairwise_probability(phi: float) -> float:
    """
    P(first before second) for two objects under RIME1, independent of how many
    reference objects separate them.
    """
    return 1 / (1 + phi)
