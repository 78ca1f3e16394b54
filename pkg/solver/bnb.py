import time
import numpy as np
from dataclasses import dataclass, field
from config.settings import (
    COMPLETION_BOUND,
    NODE_LIMIT,
    TIME_CHECK_INTERVAL,
    TIME_LIMIT,
    Measure,
)
from aggregation.matrices import PreferenceMatrix, build_matrix, raw_objective
from rankings.ranking import Instance, Ranking, RankingError, canonical, psi
from utils.logger import Logger

logger = Logger.get_logger()

Classes = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class BnbOptions:
    start_solution: Ranking | None = None
    node_limit: int | None = NODE_LIMIT
    time_limit: float | None = TIME_LIMIT
    tie_tolerance: float | None = None  # None: exact for integer matrices
    completion_bound: bool = COMPLETION_BOUND

    def __post_init__(self) -> None:
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError(f"node_limit must be positive, got {self.node_limit}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if self.tie_tolerance is not None and self.tie_tolerance < 0:
            raise ValueError(f"tie_tolerance must be non-negative, got {self.tie_tolerance}")


@dataclass(frozen=True)
class OptimalitySet:
    """
    Every consensus ranking attaining the optimal objective, canonical and sorted.
    """

    measure: Measure
    rankings: tuple[Ranking, ...]
    objective: float
    nodes_explored: int
    proven_complete: bool
    skipped_judges: int = 0
    start_solution: Ranking | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.rankings)

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "objective": self.objective,
            "rankings": [r.to_list() for r in self.rankings],
            "nodes_explored": self.nodes_explored,
            "proven_complete": self.proven_complete,
            "skipped_judges": self.skipped_judges,
        }


def classes_to_ranking(classes: Classes, n: int) -> Ranking:
    positions: list[int | None] = [None] * n
    for index, members in enumerate(classes):
        for v in members:
            positions[v] = index + 1
    return Ranking(tuple(positions))


def default_start(m: PreferenceMatrix) -> Ranking:
    """
    Orders objects by non-increasing row sums of the matrix, equal sums tied.
    """
    sums = m.row_sums().tolist()
    levels = sorted(set(sums), reverse=True)
    rank_of = {s: k + 1 for k, s in enumerate(levels)}
    return Ranking(tuple(rank_of[s] for s in sums))


def _check_start(start: Ranking, n: int) -> Ranking:
    if start.universe_size != n:
        raise RankingError(
            f"Start solution {start} ranks {start.universe_size} objects, expected {n}"
        )
    if not start.is_complete:
        raise RankingError(f"Start solution must be complete, got {start}")
    return start


class BranchAndBound:
    """
    Depth-first search over weak orders that inserts one object at a time into
    the equivalence classes of a partial ordering, tracking the deviation
    penalty against the matrix upper bound.
    """

    def __init__(self, matrix: PreferenceMatrix, options: BnbOptions | None = None):
        self.matrix = matrix
        self.options = options or BnbOptions()
        self.n = matrix.n
        self.tolerance = (
            self.options.tie_tolerance
            if self.options.tie_tolerance is not None
            else matrix.tolerance
        )

        w = matrix.weights
        magnitude = np.abs(w) + np.abs(w.T)
        # before[i][j]: penalty of v_i strictly ahead of v_j
        self.before = (magnitude - (w - w.T)).tolist()
        self.tied = (magnitude - (w + w.T)).tolist()
        self.upper_raw = np.abs(w).sum().item()

    def _completion_bounds(self, order: list[int]) -> list:
        """
        rest[t] sums the smallest pair penalty over pairs with an object at
        insertion index t or later.
        """
        zero = 0 if self.matrix.exact else 0.0
        added = []
        for k, v in enumerate(order):
            added.append(
                sum(
                    (
                        min(self.before[v][u], self.before[u][v], self.tied[v][u])
                        for u in order[:k]
                    ),
                    zero,
                )
            )
        rest = [zero] * (self.n + 1)
        for t in range(self.n - 1, -1, -1):
            rest[t] = rest[t + 1] + added[t]
        if not self.options.completion_bound:
            rest = [zero] * (self.n + 1)
        return rest

    def _children(self, classes: Classes, v: int, penalty):
        """
        Placements of v, ordered preferred -> tied -> dispreferred: a new class
        ahead of class 0, joining class 0, a new class after class 0, and so on.
        """
        m = len(classes)
        ahead, tie, behind = [], [], []
        for members in classes:
            ahead.append(sum(self.before[v][u] for u in members))
            tie.append(sum(self.tied[v][u] for u in members))
            behind.append(sum(self.before[u][v] for u in members))

        # prefix[s]: classes before s are ahead of v; suffix[s]: v ahead of classes from s
        prefix = [0] * (m + 1)
        suffix = [0] * (m + 1)
        for s in range(m):
            prefix[s + 1] = prefix[s] + behind[s]
        for s in range(m - 1, -1, -1):
            suffix[s] = suffix[s + 1] + ahead[s]

        for s in range(m + 1):
            yield (
                classes[:s] + ((v,),) + classes[s:],
                penalty + prefix[s] + suffix[s],
            )
            if s < m:
                joined = tuple(sorted(classes[s] + (v,)))
                yield (
                    classes[:s] + (joined,) + classes[s + 1 :],
                    penalty + prefix[s] + tie[s] + suffix[s + 1],
                )

    def run(self) -> tuple[list[Classes], object, int, bool, Ranking]:
        opts = self.options
        start = (
            _check_start(opts.start_solution, self.n)
            if opts.start_solution is not None
            else default_start(self.matrix)
        )
        order = list(psi(start).objects)
        rest = self._completion_bounds(order)

        incumbent = self.upper_raw - raw_objective(self.matrix, start)
        logger.debug(f"Start {start} with penalty {self.matrix.value(incumbent)}")
        solutions: list[Classes] = []

        stack = [(1, ((order[0],),), 0 if self.matrix.exact else 0.0)]
        nodes = 0
        complete = True
        started = time.monotonic()
        tol = self.tolerance

        while stack:
            nodes += 1
            if opts.node_limit is not None and nodes > opts.node_limit:
                nodes -= 1
                complete = False
                logger.warning(f"Node limit {opts.node_limit} reached")
                break
            if (
                opts.time_limit is not None
                and nodes % TIME_CHECK_INTERVAL == 0
                and time.monotonic() - started > opts.time_limit
            ):
                complete = False
                logger.warning(f"Time limit of {opts.time_limit}s reached")
                break

            depth, classes, penalty = stack.pop()
            if depth == self.n:
                if penalty < incumbent - tol:
                    incumbent = penalty
                    solutions = [classes]
                    logger.debug(
                        f"New incumbent penalty {self.matrix.value(incumbent)} "
                        f"after {nodes} nodes"
                    )
                elif penalty <= incumbent + tol:
                    incumbent = min(incumbent, penalty)
                    solutions.append(classes)
                continue

            v = order[depth]
            children = [
                (child, p)
                for child, p in self._children(classes, v, penalty)
                if p + rest[depth + 1] <= incumbent + tol
            ]
            # LIFO: the first generated child is explored first
            for child, p in reversed(children):
                stack.append((depth + 1, child, p))

        return solutions, incumbent, nodes, complete, start


def solve_matrix(
    matrix: PreferenceMatrix, measure: Measure, options: BnbOptions | None = None
) -> OptimalitySet:
    search = BranchAndBound(matrix, options)
    solutions, incumbent, nodes, complete, start = search.run()

    if solutions:
        rankings = {classes_to_ranking(c, matrix.n) for c in solutions}
    else:
        rankings = {canonical(start)}
    objective = matrix.normalized(search.upper_raw - incumbent)

    logger.info(
        f"{measure.value}: {len(rankings)} optimum(s) at {objective} "
        f"after {nodes} nodes{'' if complete else ' (limit reached)'}"
    )
    return OptimalitySet(
        measure=measure,
        rankings=tuple(sorted(rankings, key=lambda r: r.positions)),
        objective=objective,
        nodes_explored=nodes,
        proven_complete=complete,
        skipped_judges=matrix.skipped_judges,
        start_solution=start,
    )


def solve(
    inst: Instance, measure: Measure | str, options: BnbOptions | None = None
) -> OptimalitySet:
    """
    Exact consensus for tau_x (CR) or tau_x_hat (SCR) returning the complete
    optimality set, unless a node or time limit interrupts the search.
    """
    if isinstance(measure, str):
        measure = Measure.from_name(measure)
    if inst.universe_size < 2:
        raise RankingError("Consensus needs a universe of at least two objects")
    if not inst.effective_judges():
        raise RankingError("No judge ranks at least two objects")

    matrix = build_matrix(inst, measure)
    return solve_matrix(matrix, measure, options)
