import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, NamedTuple, Sequence
from utils.logger import Logger

logger = Logger.get_logger()

NULL_SYMBOL = "•"

Position = int | None


class RankingError(ValueError):
    """Raised for rankings, orderings or instances that break their invariants."""


class RankingKind(NamedTuple):
    strict: bool
    complete: bool

    def describe(self) -> str:
        return (
            f"{'strict' if self.strict else 'non-strict'} "
            f"{'complete' if self.complete else 'incomplete'}"
        )


def _check_positions(
    positions: Iterable[Any], universe_size: int | None = None
) -> tuple[Position, ...]:
    checked: list[Position] = []
    for index, value in enumerate(positions):
        if value is None:
            checked.append(None)
            continue
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise RankingError(
                f"Position of v{index + 1} must be a positive integer or null, got {value!r}"
            )
        if value <= 0:
            raise RankingError(
                f"Position of v{index + 1} must be positive, got {int(value)}"
            )
        checked.append(int(value))

    if not checked:
        raise RankingError("A ranking needs a universe of at least one object")
    if universe_size is not None and len(checked) != universe_size:
        raise RankingError(
            f"Ranking has {len(checked)} positions but the universe has {universe_size} objects"
        )
    return tuple(checked)


@dataclass(frozen=True)
class Ranking:
    """
    Ordinal positions of n objects; None marks an unranked object.
    Only pairwise comparisons of positions carry meaning.
    """

    positions: tuple[Position, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "positions", _check_positions(self.positions))

    @property
    def universe_size(self) -> int:
        return len(self.positions)

    @cached_property
    def ranked_set(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.positions) if p is not None)

    @property
    def num_ranked(self) -> int:
        return len(self.ranked_set)

    @property
    def is_complete(self) -> bool:
        return self.num_ranked == self.universe_size

    @property
    def is_strict(self) -> bool:
        ranked = [p for p in self.positions if p is not None]
        return len(set(ranked)) == len(ranked)

    @cached_property
    def matrix(self) -> np.ndarray:
        n = self.universe_size
        values = np.array([p or 0 for p in self.positions], dtype=np.int64)
        ranked = values > 0

        entries = np.where(values[:, None] <= values[None, :], 1, -1).astype(np.int8)
        entries[~(ranked[:, None] & ranked[None, :])] = 0
        entries[np.arange(n), np.arange(n)] = 0
        entries.flags.writeable = False
        return entries

    def to_list(self) -> list[Position]:
        return list(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self) -> Iterator[Position]:
        return iter(self.positions)

    def __getitem__(self, index: int) -> Position:
        return self.positions[index]

    def __str__(self) -> str:
        cells = (NULL_SYMBOL if p is None else str(p) for p in self.positions)
        return f"({','.join(cells)})"


def as_ranking(value: "Ranking | Sequence[Position]") -> Ranking:
    return value if isinstance(value, Ranking) else Ranking(tuple(value))


@dataclass(frozen=True)
class ObjectOrdering:
    """
    Preference equivalence classes of object indices, best class first.
    May cover only part of the universe.
    """

    classes: tuple[tuple[int, ...], ...]
    universe_size: int

    def __post_init__(self) -> None:
        classes = tuple(tuple(sorted(int(v) for v in c)) for c in self.classes)
        seen: set[int] = set()
        for members in classes:
            if not members:
                raise RankingError("Equivalence classes must be non-empty")
            for v in members:
                if not 0 <= v < self.universe_size:
                    raise RankingError(
                        f"Object index {v} is outside a universe of {self.universe_size}"
                    )
                if v in seen:
                    raise RankingError(f"Object v{v + 1} appears in two classes")
                seen.add(v)
        object.__setattr__(self, "classes", classes)

    @property
    def objects(self) -> tuple[int, ...]:
        return tuple(v for members in self.classes for v in members)

    def __str__(self) -> str:
        parts = []
        for members in self.classes:
            names = ",".join(f"v{v + 1}" for v in members)
            parts.append(names if len(members) == 1 else f"⟨{names}⟩")
        return f"({','.join(parts)})"


@dataclass(frozen=True)
class Instance:
    """
    K judges' rankings over a common universe plus provenance metadata.
    """

    universe_size: int
    judges: tuple[Ranking, ...]
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        judges = tuple(as_ranking(j) for j in self.judges)
        for k, judge in enumerate(judges):
            if judge.universe_size != self.universe_size:
                raise RankingError(
                    f"Judge {k + 1} ranks {judge.universe_size} objects, "
                    f"expected {self.universe_size}"
                )
        object.__setattr__(self, "judges", judges)

    @classmethod
    def from_rankings(
        cls, rankings: Sequence["Ranking | Sequence[Position]"], **metadata: Any
    ) -> "Instance":
        judges = tuple(as_ranking(r) for r in rankings)
        if not judges:
            raise RankingError("An instance needs at least one judge")
        return cls(judges[0].universe_size, judges, dict(metadata))

    @property
    def num_judges(self) -> int:
        return len(self.judges)

    def effective_judges(self) -> tuple[Ranking, ...]:
        """
        Judges ranking at least two objects, the only ones carrying pairwise preferences.
        """
        return tuple(j for j in self.judges if j.num_ranked >= 2)

    def skipped_judges(self) -> int:
        return self.num_judges - len(self.effective_judges())


def validate(
    r: "Ranking | Sequence[Position]", universe_size: int | None = None
) -> RankingKind:
    """
    Checks the ranking invariants and classifies it as strict/non-strict and
    complete/incomplete. Raises RankingError on a violation.
    """
    positions = r.positions if isinstance(r, Ranking) else r
    ranking = Ranking(_check_positions(positions, universe_size))
    return RankingKind(strict=ranking.is_strict, complete=ranking.is_complete)


def ranking_matrix(r: Ranking) -> np.ndarray:
    """
    The {-1, 0, +1} pairwise encoding: +1 if v_i is ranked no worse than v_j,
    -1 if worse, 0 on the diagonal or when either object is unranked.
    """
    return r.matrix


def _check_subset(s: Iterable[int], universe_size: int) -> frozenset[int]:
    subset = frozenset(int(v) for v in s)
    outside = sorted(v for v in subset if not 0 <= v < universe_size)
    if outside:
        raise RankingError(
            f"Objects {', '.join(f'v{v + 1}' for v in outside)} are not in the universe"
        )
    return subset


def project(r: Ranking, s: Iterable[int]) -> Ranking:
    """
    Unranks every object outside s; positions inside s are kept as they are.
    """
    subset = _check_subset(s, r.universe_size)
    return Ranking(
        tuple(p if i in subset else None for i, p in enumerate(r.positions))
    )


def psi(r: Ranking) -> ObjectOrdering:
    """
    Sorts the ranked objects from best to worst into equivalence classes.
    """
    by_position: dict[int, list[int]] = {}
    for i, p in enumerate(r.positions):
        if p is not None:
            by_position.setdefault(p, []).append(i)
    classes = tuple(tuple(by_position[p]) for p in sorted(by_position))
    return ObjectOrdering(classes, r.universe_size)


def psi_inverse(o: ObjectOrdering, dense: bool = False) -> Ranking:
    """
    Labels each object with the position of its class. By default a class is
    placed after all objects of earlier classes, e.g. (v1,<v2,v4>,v5,v3) gives
    (1,2,5,2,4); dense=True numbers the classes 1..m instead.
    """
    positions: list[Position] = [None] * o.universe_size
    placed = 0
    for index, members in enumerate(o.classes):
        label = index + 1 if dense else placed + 1
        for v in members:
            positions[v] = label
        placed += len(members)
    return Ranking(tuple(positions))


def canonical(r: Ranking) -> Ranking:
    return psi_inverse(psi(r), dense=True)


def reverse(r: Ranking) -> Ranking:
    ranked = [p for p in r.positions if p is not None]
    if not ranked:
        return r
    pivot = max(ranked) + min(ranked)
    return Ranking(tuple(None if p is None else pivot - p for p in r.positions))


def _check_same_universe(*rankings: Ranking) -> int:
    sizes = {r.universe_size for r in rankings}
    if len(sizes) != 1:
        raise RankingError(
            f"Rankings are over different universes (sizes {sorted(sizes)})"
        )
    return sizes.pop()


def is_between(a: Ranking, b: Ranking, c: Ranking) -> bool:
    """
    True iff, on the objects all three rank, every pairwise judgment of b agrees
    with a or with c, or b ties a pair that a and c strictly oppose.
    """
    _check_same_universe(a, b, c)
    common = sorted(a.ranked_set & b.ranked_set & c.ranked_set)
    idx = np.ix_(common, common)
    am, bm, cm = a.matrix[idx], b.matrix[idx], c.matrix[idx]
    return bool(np.all((bm == am) | (bm == cm)))


def ranking_from_matrix(matrix: np.ndarray) -> Ranking:
    """
    Recovers a complete ranking from a ranking-matrix by sorting row sums in
    non-increasing order, equal sums sharing a position.
    """
    sums = np.asarray(matrix).sum(axis=1)
    levels = sorted(set(sums.tolist()), reverse=True)
    rank_of = {s: k + 1 for k, s in enumerate(levels)}
    return Ranking(tuple(rank_of[s] for s in sums.tolist()))


def identity(n: int) -> Ranking:
    return Ranking(tuple(range(1, n + 1)))


def all_ties(n: int) -> Ranking:
    return Ranking((1,) * n)
