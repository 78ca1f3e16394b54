import math
from dataclasses import asdict, dataclass
from typing import Any
from config.scenarios import CONTRARIANS, MINORITY_KINDS, SPAMMERS
from config.settings import SPAMMER_PHI_RANGE
from rankings.ranking import Instance, Ranking, RankingError, identity, reverse
from sampling.mallows import (
    MallowsParams,
    derive_rng,
    rim_sample,
    rime1_sample,
    rime2_sample,
)
from utils.logger import Logger

logger = Logger.get_logger()

GENERATORS = {"rime1": rime1_sample, "rime2": rime2_sample}


@dataclass(frozen=True)
class SizeRange:
    """Inclusive U(low, high) for the number of objects a judge ranks."""

    low: int
    high: int

    def __post_init__(self) -> None:
        if not 2 <= self.low <= self.high:
            raise ValueError(f"Size range needs 2 <= low <= high, got {self.low}:{self.high}")

    @classmethod
    def parse(cls, text: str) -> "SizeRange":
        try:
            low, high = (int(part) for part in text.split(":"))
        except ValueError:
            raise ValueError(f"Size range must look like 'l:u', got '{text}'")
        return cls(low, high)

    def __str__(self) -> str:
        return f"U({self.low},{self.high})"


def as_size_range(value: Any) -> SizeRange:
    if isinstance(value, SizeRange):
        return value
    if isinstance(value, str):
        return SizeRange.parse(value)
    if isinstance(value, dict):
        return SizeRange(int(value["low"]), int(value["high"]))
    low, high = value
    return SizeRange(int(low), int(high))


@dataclass(frozen=True)
class MinoritySpec:
    proportion: float
    kind: str
    phi: float
    size_range: SizeRange

    def __post_init__(self) -> None:
        if not 0 < self.proportion < 0.5:
            raise ValueError(f"Minority proportion must lie in (0, 0.5), got {self.proportion}")
        if self.kind not in MINORITY_KINDS:
            raise ValueError(
                f"Unknown minority kind '{self.kind}', expected one of {', '.join(MINORITY_KINDS)}"
            )
        low, high = SPAMMER_PHI_RANGE
        if self.kind == SPAMMERS and not low < self.phi <= high:
            raise ValueError(f"Spammers need phi in ({low}, {high}], got {self.phi}")
        object.__setattr__(self, "size_range", as_size_range(self.size_range))


@dataclass(frozen=True)
class ScenarioSpec:
    """
    Recipe for a synthetic instance: a majority around the ground truth and an
    optional adversarial minority.
    """

    n: int
    num_judges: int
    phi: float
    size_range: SizeRange
    generator: str = "rime2"
    seed: int = 0
    reference: Ranking | None = None
    minority: MinoritySpec | None = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"A scenario needs at least two objects, got n={self.n}")
        if self.num_judges < 1:
            raise ValueError(f"A scenario needs at least one judge, got K={self.num_judges}")
        if self.generator not in GENERATORS:
            raise ValueError(
                f"Unknown generator '{self.generator}', expected one of {', '.join(GENERATORS)}"
            )
        object.__setattr__(self, "size_range", as_size_range(self.size_range))
        reference = self.reference if self.reference is not None else identity(self.n)
        object.__setattr__(self, "reference", Ranking(tuple(reference)))

        ranges = [self.size_range] + ([self.minority.size_range] if self.minority else [])
        for r in ranges:
            if r.high > self.n:
                raise ValueError(f"Size range {r} exceeds n={self.n}")
        # Validates phi and the reference
        MallowsParams(self.reference, self.phi)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioSpec":
        data = dict(data)
        minority = data.pop("minority", None)
        if minority is not None:
            minority = MinoritySpec(
                proportion=float(minority["proportion"]),
                kind=minority["kind"],
                phi=float(minority["phi"]),
                size_range=as_size_range(minority["size_range"]),
            )
        reference = data.pop("reference", None)
        try:
            return cls(
                n=int(data.pop("n")),
                num_judges=int(data.pop("num_judges")),
                phi=float(data.pop("phi")),
                size_range=as_size_range(data.pop("size_range")),
                generator=data.pop("generator", "rime2"),
                seed=int(data.pop("seed", 0)),
                reference=Ranking(tuple(reference)) if reference is not None else None,
                minority=minority,
            )
        except KeyError as e:
            raise ValueError(f"Scenario is missing field {e}")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["reference"] = self.reference.to_list()
        return data

    @property
    def majority_size(self) -> int:
        if self.minority is None:
            return self.num_judges
        return math.floor((1 - self.minority.proportion) * self.num_judges + 1e-9)

    def params_for(self, judge_index: int) -> tuple[MallowsParams, SizeRange, str]:
        if judge_index < self.majority_size:
            return MallowsParams(self.reference, self.phi), self.size_range, "majority"
        minority = self.minority
        reference = reverse(self.reference) if minority.kind == CONTRARIANS else self.reference
        return MallowsParams(reference, minority.phi), minority.size_range, minority.kind


def sample_judge(spec: ScenarioSpec, judge_index: int) -> Ranking:
    """
    Draws one judge from its own derived stream: subset size, subset, ranking.
    """
    params, sizes, _ = spec.params_for(judge_index)
    rng = derive_rng(spec.seed, judge_index)
    size = int(rng.integers(sizes.low, sizes.high + 1))
    subset = rng.permutation(spec.n)[:size].tolist()
    return GENERATORS[spec.generator](params, subset, rng)


def generate_instance(spec: ScenarioSpec) -> Instance:
    judges = tuple(sample_judge(spec, k) for k in range(spec.num_judges))
    for k, judge in enumerate(judges):
        if judge.num_ranked < 2:
            raise RankingError(f"Judge {k + 1} ranks fewer than two objects")

    logger.debug(
        f"Generated {spec.num_judges} judges ({spec.majority_size} majority) "
        f"with {spec.generator}, seed {spec.seed}"
    )
    metadata = {"generator": spec.generator, "seed": spec.seed, "scenario": spec.to_dict()}
    return Instance(spec.n, judges, metadata)


def sample_rankings(
    params: MallowsParams,
    generator: str,
    count: int,
    seed: int,
    size_range: SizeRange | None = None,
) -> list[Ranking]:
    """
    Draws `count` rankings, judge k from derive_rng(seed, k). "rim" yields
    complete rankings; the RIME generators rank a random subset whose size is
    drawn from size_range (the whole universe when absent).
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if generator != "rim" and generator not in GENERATORS:
        raise ValueError(
            f"Unknown generator '{generator}', expected rim, {', '.join(GENERATORS)}"
        )
    if size_range is not None and size_range.high > params.n:
        raise ValueError(f"Size range {size_range} exceeds n={params.n}")

    rankings = []
    for k in range(count):
        rng = derive_rng(seed, k)
        if generator == "rim":
            rankings.append(rim_sample(params, rng))
            continue
        size = params.n
        if size_range is not None:
            size = int(rng.integers(size_range.low, size_range.high + 1))
        subset = rng.permutation(params.n)[:size].tolist()
        rankings.append(GENERATORS[generator](params, subset, rng))
    return rankings
