from math import comb
from functools import lru_cache
from typing import Iterator
from config.settings import ENUMERATION_CAP
from rankings.ranking import Ranking, RankingError
from utils.logger import Logger

logger = Logger.get_logger()


@lru_cache(maxsize=None)
def fubini_number(n: int) -> int:
    """
    Number of weak orders on n objects (ordered Bell numbers).
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return 1
    return sum(comb(n, k) * fubini_number(n - k) for k in range(1, n + 1))


def enumerate_weak_orders(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Ranking]:
    """
    Yields every complete non-strict ranking of n objects exactly once, with dense
    positions 1..#classes, in lexicographic order of the position sequences.
    """
    if n < 1:
        raise RankingError(f"Cannot enumerate weak orders of {n} objects")
    if n > cap:
        raise RankingError(
            f"Enumerating weak orders of {n} objects exceeds the cap of {cap} "
            f"({fubini_number(n)} rankings)"
        )

    logger.debug(f"Enumerating {fubini_number(n)} weak orders of {n} objects")
    positions = [0] * n
    counts = [0] * (n + 2)

    def extend(slot: int, used: int, highest: int) -> Iterator[Ranking]:
        remaining = n - slot - 1
        for value in range(1, n + 1):
            fresh = counts[value] == 0
            new_used = used + fresh
            new_highest = max(highest, value)
            # Labels 1..new_highest that are still missing must fit in later slots
            if new_highest - new_used > remaining:
                if value > highest:
                    break
                continue

            positions[slot] = value
            counts[value] += 1
            if remaining == 0:
                yield Ranking(tuple(positions))
            else:
                yield from extend(slot + 1, new_used, new_highest)
            counts[value] -= 1

    yield from extend(0, 0, 0)
