import numpy as np
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import ClassVar
from config.settings import (
    EXACT_DENOMINATOR_CAP,
    MEASURE_CONFIGS,
    TIE_TOLERANCE,
    Measure,
)
from rankings.ranking import Instance, Ranking, RankingError
from utils.logger import Logger

logger = Logger.get_logger()


@dataclass(frozen=True, eq=False)
class PreferenceMatrix:
    """
    Summed pairwise preferences of all judges, stored as weights / denominator.
    Integer weights keep objective values and tie comparisons exact; float
    weights (denominator 1) are compared with TIE_TOLERANCE.
    """

    kind: ClassVar[str] = ""

    weights: np.ndarray
    denominator: int
    num_judges: int
    skipped_judges: int = 0

    def __post_init__(self) -> None:
        self.weights.flags.writeable = False

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def exact(self) -> bool:
        return self.weights.dtype.kind == "i"

    @property
    def tolerance(self) -> float:
        return 0 if self.exact else TIE_TOLERANCE

    @property
    def entries(self) -> np.ndarray:
        return self.weights / self.denominator

    def value(self, raw: "int | float") -> float:
        """
        Converts a sum of weights into matrix units.
        """
        if self.exact:
            return float(Fraction(int(raw), self.denominator))
        return float(raw) / self.denominator

    def normalized(self, raw: "int | float") -> float:
        """
        Converts a sum of weights into the cumulative correlation it stands for.
        """
        return self.value(raw)

    def row_sums(self) -> np.ndarray:
        return self.weights.sum(axis=1)


class CombinedMatrix(PreferenceMatrix):
    kind = "CR"

    def normalized(self, raw: "int | float") -> float:
        n = self.n
        return float(Fraction(int(raw), self.denominator * n * (n - 1)))


class ScaledCombinedMatrix(PreferenceMatrix):
    kind = "SCR"


def combined_matrix(inst: Instance) -> CombinedMatrix:
    """
    Elementwise sum of every judge's ranking-matrix.
    """
    if inst.universe_size < 2:
        raise RankingError("Aggregation needs a universe of at least two objects")

    weights = np.zeros((inst.universe_size,) * 2, dtype=np.int64)
    for judge in inst.judges:
        weights += judge.matrix
    return CombinedMatrix(
        weights=weights,
        denominator=1,
        num_judges=inst.num_judges,
        skipped_judges=inst.skipped_judges(),
    )


def scaled_combined_matrix(inst: Instance) -> ScaledCombinedMatrix:
    """
    Sum of ranking-matrices each divided by n_k(n_k - 1), n_k being the number of
    objects the judge ranks. Judges ranking fewer than two objects are skipped.
    """
    if inst.universe_size < 2:
        raise RankingError("Aggregation needs a universe of at least two objects")

    judges = inst.effective_judges()
    skipped = inst.num_judges - len(judges)
    if skipped:
        logger.warning(f"{skipped} judge(s) rank fewer than two objects and are skipped")

    n = inst.universe_size
    divisors = [j.num_ranked * (j.num_ranked - 1) for j in judges]
    denominator = lcm(*divisors) if divisors else 1

    if denominator <= EXACT_DENOMINATOR_CAP:
        weights = np.zeros((n, n), dtype=np.int64)
        for judge, divisor in zip(judges, divisors):
            weights += (denominator // divisor) * judge.matrix.astype(np.int64)
    else:
        logger.info(
            f"SCR denominator {denominator} exceeds {EXACT_DENOMINATOR_CAP}, "
            "falling back to floating point"
        )
        weights = np.zeros((n, n), dtype=np.float64)
        for judge, divisor in zip(judges, divisors):
            weights += judge.matrix / divisor
        denominator = 1

    return ScaledCombinedMatrix(
        weights=weights,
        denominator=denominator,
        num_judges=inst.num_judges,
        skipped_judges=skipped,
    )


MATRIX_BUILDERS = {"CR": combined_matrix, "SCR": scaled_combined_matrix}


def build_matrix(inst: Instance, measure: Measure | str) -> PreferenceMatrix:
    if isinstance(measure, str):
        measure = Measure.from_name(measure)
    if measure not in MEASURE_CONFIGS:
        raise ValueError(f"Cannot aggregate under {measure.value}")
    return MATRIX_BUILDERS[MEASURE_CONFIGS[measure]["matrix"]](inst)


def raw_objective(m: PreferenceMatrix, r: Ranking) -> "int | float":
    if r.universe_size != m.n:
        raise RankingError(f"Ranking {r} does not match a matrix over {m.n} objects")
    if not r.is_complete:
        raise RankingError(f"The objective needs a complete ranking, got {r}")
    total = (m.weights * r.matrix).sum()
    return int(total) if m.exact else float(total)


def cumulative_objective(m: PreferenceMatrix, r: Ranking) -> float:
    """
    Inner product of the matrix with the ranking-matrix of r.
    """
    return m.value(raw_objective(m, r))


def normalized_objective(m: PreferenceMatrix, r: Ranking) -> float:
    """
    Sum of tau_x over the judges for CR, sum of tau_x_hat over the effective
    judges for SCR.
    """
    return m.normalized(raw_objective(m, r))


def upper_bound(m: PreferenceMatrix) -> float:
    return m.value(np.abs(m.weights).sum())
