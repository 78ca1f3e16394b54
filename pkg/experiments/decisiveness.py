import asyncio
from dataclasses import asdict, dataclass, field
from typing import Any
from config.scenarios import dispersion_group
from config.settings import (
    AGGREGATION_MEASURES,
    EXPERIMENT_BASE_SEED,
    EXPERIMENT_K,
    EXPERIMENT_N,
    EXPERIMENT_NODE_LIMIT,
    EXPERIMENT_PHI_GRID,
    EXPERIMENT_SEEDS,
    EXPERIMENT_SIZE_RANGE,
    EXPERIMENT_WORKERS,
    FORMAT_VERSION,
    Measure,
)
from experiments.manager import ExperimentManager, summarize
from sampling.scenario import ScenarioSpec, SizeRange, as_size_range, generate_instance
from solver.bnb import BnbOptions, solve
from utils.logger import Logger

logger = Logger.get_logger()


@dataclass(frozen=True)
class DecisivenessConfig:
    n: int = EXPERIMENT_N
    num_judges: int = EXPERIMENT_K
    seeds: int = EXPERIMENT_SEEDS
    base_seed: int = EXPERIMENT_BASE_SEED
    generator: str = "rime2"
    size_range: SizeRange = SizeRange(*EXPERIMENT_SIZE_RANGE)
    phi_grid: tuple[float, ...] = EXPERIMENT_PHI_GRID
    node_limit: int | None = EXPERIMENT_NODE_LIMIT
    workers: int = EXPERIMENT_WORKERS
    measures: tuple[Measure, ...] = AGGREGATION_MEASURES

    def __post_init__(self) -> None:
        if self.seeds < 1:
            raise ValueError(f"seeds must be positive, got {self.seeds}")
        if not self.phi_grid:
            raise ValueError("The dispersion grid is empty")
        for measure in self.measures:
            if measure not in AGGREGATION_MEASURES:
                raise ValueError(f"Cannot aggregate under {measure.value}")
        # Fails early on a bad grid point, size range or generator
        for phi in self.phi_grid:
            self.scenario(phi, 0)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DecisivenessConfig":
        data = dict(data)
        data.pop("kind", None)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"Unknown decisiveness config field(s): {', '.join(sorted(unknown))}")
        if "size_range" in data:
            data["size_range"] = as_size_range(data["size_range"])
        if "phi_grid" in data:
            data["phi_grid"] = tuple(float(phi) for phi in data["phi_grid"])
        if "measures" in data:
            data["measures"] = tuple(Measure.from_name(m) for m in data["measures"])
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["size_range"] = [self.size_range.low, self.size_range.high]
        data["phi_grid"] = list(self.phi_grid)
        data["measures"] = [m.value for m in self.measures]
        return data

    def scenario(self, phi: float, seed_index: int) -> ScenarioSpec:
        return ScenarioSpec(
            n=self.n,
            num_judges=self.num_judges,
            phi=phi,
            size_range=self.size_range,
            generator=self.generator,
            seed=self.base_seed + seed_index,
        )


@dataclass(frozen=True)
class DecisivenessRow:
    phi: float
    group: str
    measure: str
    avg_num_optima: float | None
    sd_num_optima: float | None
    instances_solved: int
    instances_timed_out: int


@dataclass(frozen=True)
class DecisivenessReport:
    config: DecisivenessConfig
    rows: tuple[DecisivenessRow, ...] = field(default_factory=tuple)

    fieldnames = tuple(DecisivenessRow.__dataclass_fields__)

    def records(self) -> list[dict[str, Any]]:
        return [asdict(row) for row in self.rows]

    def manifest(self) -> dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "experiment": "decisiveness",
            "config": self.config.to_dict(),
            "rows": self.records(),
        }

    def row(self, phi: float, measure: Measure | str) -> DecisivenessRow:
        name = measure.value if isinstance(measure, Measure) else measure
        for row in self.rows:
            if row.phi == phi and row.measure == name:
                return row
        raise KeyError(f"No row for phi={phi}, measure={name}")


def count_optima(
    spec: ScenarioSpec, measures: tuple[Measure, ...], node_limit: int | None
) -> dict[str, tuple[int, bool]]:
    """
    Pool task: one instance, solved under each measure.
    """
    inst = generate_instance(spec)
    options = BnbOptions(node_limit=node_limit)
    counts = {}
    for measure in measures:
        result = solve(inst, measure, options)
        counts[measure.value] = (len(result.rankings), result.proven_complete)
    return counts


async def run_decisiveness_async(config: DecisivenessConfig) -> DecisivenessReport:
    async with ExperimentManager(config.workers) as manager:
        for p, phi in enumerate(config.phi_grid):
            for s in range(config.seeds):
                await manager.deploy_task(
                    (p, s),
                    count_optima,
                    config.scenario(phi, s),
                    config.measures,
                    config.node_limit,
                )
        results = await manager.run()

    rows = []
    for p, phi in enumerate(config.phi_grid):
        for measure in config.measures:
            outcomes = [results[(p, s)][measure.value] for s in range(config.seeds)]
            solved = [count for count, proven in outcomes if proven]
            avg, sd = summarize(solved)
            timed_out = len(outcomes) - len(solved)
            if timed_out:
                logger.warning(f"phi={phi} {measure.value}: {timed_out} instance(s) hit the node limit")
            rows.append(
                DecisivenessRow(
                    phi=phi,
                    group=dispersion_group(phi),
                    measure=measure.value,
                    avg_num_optima=avg,
                    sd_num_optima=sd,
                    instances_solved=len(solved),
                    instances_timed_out=timed_out,
                )
            )
    return DecisivenessReport(config=config, rows=tuple(rows))


def run_decisiveness(config: DecisivenessConfig | None = None) -> DecisivenessReport:
    """
    Number of alternative optima per measure across the dispersion grid.
    """
    return asyncio.run(run_decisiveness_async(config or DecisivenessConfig()))
