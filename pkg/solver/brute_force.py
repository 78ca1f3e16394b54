from config.settings import ENUMERATION_CAP, TIE_TOLERANCE, Measure
from aggregation.matrices import PreferenceMatrix, build_matrix, raw_objective
from measures.distance import DEFAULT_CONFIG, MeasureConfig, d_npks, d_pks
from rankings.ranking import Instance, Ranking, RankingError
from rankings.weak_orders import enumerate_weak_orders
from solver.bnb import OptimalitySet
from utils.logger import Logger

logger = Logger.get_logger()

DISTANCES = {Measure.D_PKS: d_pks, Measure.D_NPKS: d_npks}


def argmax_weak_orders(
    m: PreferenceMatrix, cap: int = ENUMERATION_CAP
) -> tuple["int | float", list[Ranking], int]:
    """
    Scans every weak order and keeps those with the largest matrix inner product.
    """
    best = None
    winners: list[Ranking] = []
    count = 0
    for r in enumerate_weak_orders(m.n, cap):
        count += 1
        score = raw_objective(m, r)
        if best is None or score > best + m.tolerance:
            best, winners = score, [r]
        elif score >= best - m.tolerance:
            best = max(best, score)
            winners.append(r)
    return best, winners, count


def brute_force(
    inst: Instance, measure: Measure | str, cap: int = ENUMERATION_CAP
) -> OptimalitySet:
    if isinstance(measure, str):
        measure = Measure.from_name(measure)
    if not inst.effective_judges():
        raise RankingError("No judge ranks at least two objects")

    m = build_matrix(inst, measure)
    best, winners, count = argmax_weak_orders(m, cap)
    return OptimalitySet(
        measure=measure,
        rankings=tuple(sorted(winners, key=lambda r: r.positions)),
        objective=m.normalized(best),
        nodes_explored=count,
        proven_complete=True,
        skipped_judges=m.skipped_judges,
    )


def brute_force_distance(
    inst: Instance,
    distance: Measure | str,
    cfg: MeasureConfig = DEFAULT_CONFIG,
    cap: int = ENUMERATION_CAP,
) -> tuple[float, tuple[Ranking, ...]]:
    """
    Minimum cumulative projected distance over all weak orders and its argmin set.
    """
    if isinstance(distance, str):
        distance = Measure.from_name(distance)
    if distance not in DISTANCES:
        raise ValueError(f"{distance.value} is not an aggregation distance")

    measure = DISTANCES[distance]
    best = None
    winners: list[Ranking] = []
    for r in enumerate_weak_orders(inst.universe_size, cap):
        total = sum(measure(r, judge, cfg) for judge in inst.judges)
        if best is None or total < best - TIE_TOLERANCE:
            best, winners = total, [r]
        elif total <= best + TIE_TOLERANCE:
            winners.append(r)
    return best, tuple(sorted(winners, key=lambda r: r.positions))
