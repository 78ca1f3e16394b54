import numpy as np
from dataclasses import dataclass
from fractions import Fraction
from config.settings import GAMMA, Measure
from measures.correlation import (
    _pair,
    common_objects,
    inner_product,
    kendall_tau,
    tau_x,
    tau_x_hat,
)
from rankings.ranking import Ranking, RankingError
from utils.logger import Logger

logger = Logger.get_logger()


@dataclass(frozen=True)
class MeasureConfig:
    gamma: float = GAMMA

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


DEFAULT_CONFIG = MeasureConfig()


@dataclass(frozen=True)
class MeasureResult:
    measure: Measure
    value: float
    common: int
    inner_product: int

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "value": self.value,
            "common": self.common,
            "inner_product": self.inner_product,
        }


def _sign_disagreement(a: Ranking, b: Ranking, objects: frozenset[int]) -> int:
    """
    Sum over ordered pairs inside objects of |sign(a_i - a_j) - sign(b_i - b_j)|.
    """
    idx = sorted(objects)
    if len(idx) < 2:
        return 0
    x = np.array([a.positions[i] for i in idx], dtype=np.int64)
    y = np.array([b.positions[i] for i in idx], dtype=np.int64)
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    return int(np.abs(sx - sy).sum())


def _divide(total: int, gamma: float) -> float:
    return float(Fraction(total) / Fraction(gamma))


def d_ks(a: Ranking, b: Ranking, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    """
    Kemeny-Snell distance between complete rankings; with gamma=4 a tie
    against a strict preference costs 1/2.
    """
    a, b = _pair(a, b)
    for r in (a, b):
        if not r.is_complete:
            raise RankingError(f"d_KS needs complete rankings, got {r}")
    return _divide(_sign_disagreement(a, b, a.ranked_set), cfg.gamma)


def d_pks(a: Ranking, b: Ranking, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    a, b = _pair(a, b)
    return _divide(_sign_disagreement(a, b, common_objects(a, b)), cfg.gamma)


def d_npks(a: Ranking, b: Ranking, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    """
    Projected distance divided by the number of commonly ranked pairs; 0 when
    fewer than two objects are shared.
    """
    a, b = _pair(a, b)
    common = common_objects(a, b)
    n_bar = len(common)
    if n_bar < 2:
        return 0.0
    total = Fraction(_sign_disagreement(a, b, common)) / Fraction(cfg.gamma)
    return float(total / Fraction(n_bar * (n_bar - 1), 2))


def npks_from_tau_hat(t: float) -> float:
    if not -1 <= t <= 1:
        raise ValueError(f"tau_x_hat must lie in [-1, 1], got {t}")
    return 0.5 - 0.5 * t


def tau_hat_from_npks(d: float) -> float:
    if not 0 <= d <= 1:
        raise ValueError(f"d_NP-KS must lie in [0, 1], got {d}")
    return 1 - 2 * d


def pks_from_tau_x(t: float, n: int, n_bar: int) -> float:
    """
    Projected distance recovered from tau_x given the universe and overlap sizes.
    """
    if not 0 <= n_bar <= n:
        raise ValueError(f"Overlap {n_bar} must lie between 0 and n={n}")
    return n_bar * (n_bar - 1) / 4 - n * (n - 1) / 4 * t


def tau_x_from_pks(d: float, n: int, n_bar: int) -> float:
    if n < 2:
        raise ValueError(f"tau_x needs n >= 2, got {n}")
    if not 0 <= n_bar <= n:
        raise ValueError(f"Overlap {n_bar} must lie between 0 and n={n}")
    return (n_bar * (n_bar - 1) / 4 - d) * 4 / (n * (n - 1))


MEASURE_FUNCTIONS = {
    Measure.TAU: lambda a, b, cfg: kendall_tau(a, b),
    Measure.TAU_X: lambda a, b, cfg: tau_x(a, b),
    Measure.TAU_X_HAT: lambda a, b, cfg: tau_x_hat(a, b),
    Measure.D_KS: d_ks,
    Measure.D_PKS: d_pks,
    Measure.D_NPKS: d_npks,
}


def compare(
    a: Ranking,
    b: Ranking,
    measure: Measure | str,
    cfg: MeasureConfig = DEFAULT_CONFIG,
) -> MeasureResult:
    """
    Evaluates one measure and reports the overlap and inner product alongside it.
    """
    if isinstance(measure, str):
        measure = Measure.from_name(measure)
    a, b = _pair(a, b)
    value = MEASURE_FUNCTIONS[measure](a, b, cfg)
    result = MeasureResult(
        measure=measure,
        value=value,
        common=len(common_objects(a, b)),
        inner_product=inner_product(a, b),
    )
    logger.debug(f"{measure.value}({a}, {b}) = {value}")
    return result
