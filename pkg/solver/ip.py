import itertools
import numpy as np
import pulp
from dataclasses import dataclass, field
from pathlib import Path
from config.settings import ENUMERATION_CAP, MEASURE_CONFIGS, Measure
from aggregation.matrices import PreferenceMatrix, build_matrix
from rankings.ranking import Instance, Ranking, RankingError, ranking_from_matrix
from solver.brute_force import argmax_weak_orders
from utils.logger import Logger

logger = Logger.get_logger()

FEASIBLE_POINTS_CAP = 4  # 2^(n(n-1)) assignments are scanned


@dataclass(frozen=True)
class Row:
    name: str
    coefficients: dict[str, int]
    sense: str  # ">=" or "=="
    rhs: int

    def satisfied_by(self, values: dict[str, int]) -> bool:
        lhs = sum(c * values[v] for v, c in self.coefficients.items())
        return lhs >= self.rhs if self.sense == ">=" else lhs == self.rhs


def r_name(i: int, j: int) -> str:
    return f"r_{i + 1}_{j + 1}"


def y_name(i: int, j: int) -> str:
    return f"y_{i + 1}_{j + 1}"


@dataclass(frozen=True, eq=False)
class IpModel:
    """
    Integer program whose feasible r-matrices are exactly the ranking-matrices
    of weak orders. The diagonal r_ii = 0 is implicit: no variables are created
    for it.
    """

    n: int
    measure: Measure
    matrix: PreferenceMatrix
    rows: tuple[Row, ...] = field(repr=False)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]

    @property
    def r_variables(self) -> list[str]:
        return [r_name(i, j) for i, j in self.pairs]

    @property
    def y_variables(self) -> list[str]:
        return [y_name(i, j) for i, j in self.pairs]

    def rows_of(self, prefix: str) -> list[Row]:
        return [row for row in self.rows if row.name.startswith(prefix)]

    def objective(self) -> dict[str, float]:
        entries = self.matrix.entries
        return {
            r_name(i, j): float(entries[i, j])
            for i, j in self.pairs
            if entries[i, j] != 0
        }

    def to_pulp(self) -> pulp.LpProblem:
        problem = pulp.LpProblem(f"consensus_{self.measure.value}", pulp.LpMaximize)
        variables = {
            name: pulp.LpVariable(name, lowBound=-1, upBound=1, cat=pulp.LpInteger)
            for name in self.r_variables
        }
        variables.update(
            {name: pulp.LpVariable(name, cat=pulp.LpBinary) for name in self.y_variables}
        )

        problem += pulp.lpSum(c * variables[v] for v, c in self.objective().items())
        for row in self.rows:
            lhs = pulp.lpSum(c * variables[v] for v, c in row.coefficients.items())
            if row.sense == ">=":
                problem += lhs >= row.rhs, row.name
            else:
                problem += lhs == row.rhs, row.name

        # Variables absent from every row and the objective still get declared
        problem.addVariables(variables.values())
        return problem


def build_model(inst: Instance, measure: Measure | str) -> IpModel:
    if isinstance(measure, str):
        measure = Measure.from_name(measure)
    if measure not in MEASURE_CONFIGS:
        raise ValueError(f"Cannot build a consensus model for {measure.value}")
    n = inst.universe_size
    if n < 2:
        raise RankingError("The model needs a universe of at least two objects")
    return model_from_matrix(build_matrix(inst, measure), measure)


def model_from_matrix(matrix: PreferenceMatrix, measure: Measure) -> IpModel:
    n = matrix.n
    rows: list[Row] = []
    for i, j, k in itertools.permutations(range(n), 3):
        rows.append(
            Row(
                f"trans_{i + 1}_{j + 1}_{k + 1}",
                {r_name(i, j): 1, r_name(k, j): -1, r_name(i, k): -1},
                ">=",
                -1,
            )
        )
    for i, j in itertools.combinations(range(n), 2):
        rows.append(Row(f"pair_{i + 1}_{j + 1}", {r_name(i, j): 1, r_name(j, i): 1}, ">=", 0))
    for i, j in itertools.permutations(range(n), 2):
        rows.append(
            Row(f"parity_{i + 1}_{j + 1}", {r_name(i, j): 1, y_name(i, j): -2}, "==", -1)
        )

    model = IpModel(n=n, measure=measure, matrix=matrix, rows=tuple(rows))
    logger.debug(
        f"Built model with {2 * len(model.pairs)} variables and {len(rows)} rows"
    )
    return model


def export_model(m: IpModel, path: str | Path) -> Path:
    """
    Writes the model as CPLEX LP, or as MPS when the path ends in .mps.
    """
    path = Path(path)
    problem = m.to_pulp()
    if path.suffix.lower() == ".mps":
        problem.writeMPS(str(path), with_objsense=True)
    else:
        problem.writeLP(str(path))
    logger.info(f"Model written to {path}")
    return path


def feasible_points(m: IpModel, cap: int = FEASIBLE_POINTS_CAP) -> list[np.ndarray]:
    """
    Scans every y in {0,1}^(n(n-1)) and returns the r-matrices satisfying all rows.
    """
    if m.n > cap:
        raise RankingError(f"Scanning feasible points is capped at n={cap}, got {m.n}")

    pairs = m.pairs
    points = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        values = {y_name(i, j): b for (i, j), b in zip(pairs, bits)}
        values.update({r_name(i, j): 2 * b - 1 for (i, j), b in zip(pairs, bits)})
        if all(row.satisfied_by(values) for row in m.rows):
            r = np.zeros((m.n, m.n), dtype=np.int8)
            for i, j in pairs:
                r[i, j] = values[r_name(i, j)]
            points.append(r)
    return points


def brute_force_solve(
    m: IpModel, cap: int = ENUMERATION_CAP
) -> tuple[float, tuple[Ranking, ...]]:
    """
    Maximizes the model objective over all weak orders and recovers each
    maximizer from the row sums of its ranking-matrix.
    """
    if m.n > cap:
        raise RankingError(f"Brute force is capped at n={cap}, got {m.n}")
    best, winners, _ = argmax_weak_orders(m.matrix, cap)
    rankings = {ranking_from_matrix(r.matrix) for r in winners}
    return m.matrix.normalized(best), tuple(sorted(rankings, key=lambda r: r.positions))
