import numpy as np
from fractions import Fraction
from rankings.ranking import Ranking, RankingError, as_ranking
from utils.logger import Logger

logger = Logger.get_logger()


def _pair(a: Ranking, b: Ranking) -> tuple[Ranking, Ranking]:
    a, b = as_ranking(a), as_ranking(b)
    if a.universe_size != b.universe_size:
        raise RankingError(
            f"Cannot compare rankings over {a.universe_size} and {b.universe_size} objects"
        )
    return a, b


def common_objects(a: Ranking, b: Ranking) -> frozenset[int]:
    a, b = _pair(a, b)
    return a.ranked_set & b.ranked_set


def inner_product(a: Ranking, b: Ranking) -> int:
    """
    Frobenius inner product of the two ranking-matrices.
    """
    a, b = _pair(a, b)
    return int(np.sum(a.matrix.astype(np.int64) * b.matrix))


def tau_x_exact(a: Ranking, b: Ranking) -> Fraction:
    a, b = _pair(a, b)
    n = a.universe_size
    if n < 2:
        raise RankingError("tau_x needs a universe of at least two objects")
    return Fraction(inner_product(a, b), n * (n - 1))


def tau_x_hat_exact(a: Ranking, b: Ranking) -> Fraction:
    a, b = _pair(a, b)
    n_bar = len(common_objects(a, b))
    if n_bar < 2:
        return Fraction(1)
    return Fraction(inner_product(a, b), n_bar * (n_bar - 1))


def tau_x(a: Ranking, b: Ranking) -> float:
    """
    Tau-extended correlation: the inner product divided by n(n-1), so pairs
    either ranking leaves out count as neutral.
    """
    return float(tau_x_exact(a, b))


def tau_x_hat(a: Ranking, b: Ranking) -> float:
    """
    Scaled tau-extended correlation over the commonly ranked objects only.
    Returns 1 when fewer than two objects are ranked by both.
    """
    return float(tau_x_hat_exact(a, b))


def kendall_tau(a: Ranking, b: Ranking) -> float:
    a, b = _pair(a, b)
    for name, r in (("first", a), ("second", b)):
        if not (r.is_complete and r.is_strict):
            raise RankingError(
                f"Kendall tau needs strict complete rankings, the {name} one is {r}"
            )

    n = a.universe_size
    if n < 2:
        raise RankingError("Kendall tau needs a universe of at least two objects")
    x = np.array(a.positions)
    y = np.array(b.positions)
    i, j = np.triu_indices(n, k=1)
    agreement = np.sign(x[i] - x[j]) * np.sign(y[i] - y[j])
    return float(Fraction(int(agreement.sum()), n * (n - 1) // 2))
