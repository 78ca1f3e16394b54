import asyncio
import itertools
from dataclasses import asdict, dataclass, field
from typing import Any
from config.scenarios import MINORITY_DESCRIPTIONS, MINORITY_KINDS, SPAMMERS
from config.settings import (
    AGGREGATION_MEASURES,
    EXPERIMENT_BASE_SEED,
    EXPERIMENT_N,
    EXPERIMENT_NODE_LIMIT,
    EXPERIMENT_SEEDS,
    EXPERIMENT_WORKERS,
    FAIRNESS_ALPHAS,
    FAIRNESS_K,
    FAIRNESS_MAJORITY_SIZE_RANGE,
    FAIRNESS_MINORITY_SIZE_RANGES,
    FAIRNESS_PHI_GRID,
    FAIRNESS_SPAMMER_PHI_GRID,
    FORMAT_VERSION,
    Measure,
)
from experiments.manager import ExperimentManager, summarize
from measures.correlation import tau_x_exact, tau_x_hat_exact
from rankings.ranking import Ranking
from sampling.scenario import (
    MinoritySpec,
    ScenarioSpec,
    SizeRange,
    as_size_range,
    generate_instance,
)
from solver.bnb import BnbOptions, solve
from utils.logger import Logger

logger = Logger.get_logger()

NO_MINORITY = "none"


@dataclass(frozen=True)
class FairnessCell:
    phi: float
    minority_phi: float | None
    alpha: float
    minority_kind: str
    minority_size_range: SizeRange | None

    @property
    def label(self) -> str:
        return str(self.minority_size_range) if self.minority_size_range else "-"


@dataclass(frozen=True)
class FairnessConfig:
    """
    Grid of the fairness study. The majority dispersion sweeps phi_grid; spammers
    take the spammer_phi_grid entry at the same index, contrarians share the
    majority's dispersion.
    """

    n: int = EXPERIMENT_N
    num_judges: int = FAIRNESS_K
    phi_grid: tuple[float, ...] = FAIRNESS_PHI_GRID
    spammer_phi_grid: tuple[float, ...] = FAIRNESS_SPAMMER_PHI_GRID
    seeds: int = EXPERIMENT_SEEDS
    base_seed: int = EXPERIMENT_BASE_SEED
    generator: str = "rime2"
    majority_size_range: SizeRange = SizeRange(*FAIRNESS_MAJORITY_SIZE_RANGE)
    alphas: tuple[float, ...] = FAIRNESS_ALPHAS
    minority_kinds: tuple[str, ...] = MINORITY_KINDS
    minority_size_ranges: tuple[SizeRange, ...] = tuple(
        SizeRange(*r) for r in FAIRNESS_MINORITY_SIZE_RANGES
    )
    include_baseline: bool = True
    node_limit: int | None = EXPERIMENT_NODE_LIMIT
    workers: int = EXPERIMENT_WORKERS
    measures: tuple[Measure, ...] = AGGREGATION_MEASURES

    def __post_init__(self) -> None:
        if self.seeds < 1:
            raise ValueError(f"seeds must be positive, got {self.seeds}")
        if not self.phi_grid:
            raise ValueError("The dispersion grid is empty")
        if SPAMMERS in self.minority_kinds and len(self.spammer_phi_grid) != len(self.phi_grid):
            raise ValueError(
                f"spammer_phi_grid has {len(self.spammer_phi_grid)} value(s), "
                f"phi_grid has {len(self.phi_grid)}; they are paired by index"
            )
        for measure in self.measures:
            if measure not in AGGREGATION_MEASURES:
                raise ValueError(f"Cannot aggregate under {measure.value}")
        if not self.cells():
            raise ValueError("The fairness grid is empty")
        for cell in self.cells():
            self.scenario(cell, 0)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FairnessConfig":
        data = dict(data)
        data.pop("kind", None)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"Unknown fairness config field(s): {', '.join(sorted(unknown))}")
        if "majority_size_range" in data:
            data["majority_size_range"] = as_size_range(data["majority_size_range"])
        if "minority_size_ranges" in data:
            data["minority_size_ranges"] = tuple(
                as_size_range(r) for r in data["minority_size_ranges"]
            )
        for key in ("phi_grid", "spammer_phi_grid", "alphas", "minority_kinds"):
            if key in data:
                data[key] = tuple(data[key])
        if "measures" in data:
            data["measures"] = tuple(Measure.from_name(m) for m in data["measures"])
        return cls(**data)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["majority_size_range"] = [self.majority_size_range.low, self.majority_size_range.high]
        data["minority_size_ranges"] = [[r.low, r.high] for r in self.minority_size_ranges]
        for key in ("phi_grid", "spammer_phi_grid", "alphas", "minority_kinds"):
            data[key] = list(data[key])
        data["measures"] = [m.value for m in self.measures]
        return data

    def minority_phi(self, phi_index: int, kind: str) -> float:
        return self.spammer_phi_grid[phi_index] if kind == SPAMMERS else self.phi_grid[phi_index]

    def cells(self) -> list[FairnessCell]:
        cells = []
        for p, phi in enumerate(self.phi_grid):
            if self.include_baseline:
                cells.append(FairnessCell(phi, None, 0.0, NO_MINORITY, None))
            for alpha, kind, sizes in itertools.product(
                self.alphas, self.minority_kinds, self.minority_size_ranges
            ):
                cells.append(FairnessCell(phi, self.minority_phi(p, kind), alpha, kind, sizes))
        return cells

    def scenario(self, cell: FairnessCell, seed_index: int) -> ScenarioSpec:
        minority = None
        if cell.minority_kind != NO_MINORITY:
            minority = MinoritySpec(
                proportion=cell.alpha,
                kind=cell.minority_kind,
                phi=cell.minority_phi,
                size_range=cell.minority_size_range,
            )
        return ScenarioSpec(
            n=self.n,
            num_judges=self.num_judges,
            phi=cell.phi,
            size_range=self.majority_size_range,
            generator=self.generator,
            seed=self.base_seed + seed_index,
            minority=minority,
        )


@dataclass(frozen=True)
class FairnessRow:
    phi: float
    minority_phi: float | None
    alpha: float
    minority_kind: str
    minority_size_dist: str
    measure: str
    avg_sgs: float | None
    sd_sgs: float | None
    instances_solved: int
    instances_timed_out: int


@dataclass(frozen=True)
class FairnessReport:
    config: FairnessConfig
    rows: tuple[FairnessRow, ...] = field(default_factory=tuple)

    fieldnames = tuple(FairnessRow.__dataclass_fields__)

    def records(self) -> list[dict[str, Any]]:
        return [asdict(row) for row in self.rows]

    def manifest(self) -> dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "experiment": "fairness",
            "averaging": "instance-then-seed",
            "minorities": {
                kind: MINORITY_DESCRIPTIONS[kind] for kind in self.config.minority_kinds
            },
            "config": self.config.to_dict(),
            "rows": self.records(),
        }

    def row(
        self,
        alpha: float,
        kind: str,
        measure: Measure | str,
        sizes: str = "-",
        phi: float | None = None,
    ) -> FairnessRow:
        """
        Looks a row up; phi may be left out when the grid has a single dispersion.
        """
        name = measure.value if isinstance(measure, Measure) else measure
        matches = [
            row
            for row in self.rows
            if (row.alpha, row.minority_kind, row.minority_size_dist, row.measure)
            == (alpha, kind, sizes, name)
            and (phi is None or row.phi == phi)
        ]
        if len(matches) != 1:
            raise KeyError(
                f"{len(matches)} rows for phi={phi}, alpha={alpha}, {kind} {sizes}, measure={name}"
            )
        return matches[0]


def solution_similarity(solutions: tuple[Ranking, ...], truth: Ranking) -> float:
    """
    Mean tau_x_hat between each optimal ranking and the ground truth. Both are
    complete, so tau_x must give the same value.
    """
    total = 0
    for r in solutions:
        hat = tau_x_hat_exact(r, truth)
        if hat != tau_x_exact(r, truth):
            raise RuntimeError(f"tau_x and tau_x_hat disagree on complete rankings {r}, {truth}")
        total += hat
    return float(total / len(solutions))


def measure_similarity(
    spec: ScenarioSpec, measures: tuple[Measure, ...], node_limit: int | None
) -> dict[str, tuple[float, bool]]:
    """
    Pool task: one instance, its optima under each measure scored against the truth.
    """
    inst = generate_instance(spec)
    options = BnbOptions(node_limit=node_limit)
    scores = {}
    for measure in measures:
        result = solve(inst, measure, options)
        scores[measure.value] = (
            solution_similarity(result.rankings, spec.reference),
            result.proven_complete,
        )
    return scores


async def run_fairness_async(config: FairnessConfig) -> FairnessReport:
    cells = config.cells()
    async with ExperimentManager(config.workers) as manager:
        for c, cell in enumerate(cells):
            for s in range(config.seeds):
                await manager.deploy_task(
                    (c, s),
                    measure_similarity,
                    config.scenario(cell, s),
                    config.measures,
                    config.node_limit,
                )
        results = await manager.run()

    rows = []
    for c, cell in enumerate(cells):
        for measure in config.measures:
            outcomes = [results[(c, s)][measure.value] for s in range(config.seeds)]
            solved = [sgs for sgs, proven in outcomes if proven]
            avg, sd = summarize(solved)
            rows.append(
                FairnessRow(
                    phi=cell.phi,
                    minority_phi=cell.minority_phi,
                    alpha=cell.alpha,
                    minority_kind=cell.minority_kind,
                    minority_size_dist=cell.label,
                    measure=measure.value,
                    avg_sgs=avg,
                    sd_sgs=sd,
                    instances_solved=len(solved),
                    instances_timed_out=len(outcomes) - len(solved),
                )
            )
    return FairnessReport(config=config, rows=tuple(rows))


def run_fairness(config: FairnessConfig | None = None) -> FairnessReport:
    """
    Similarity of the consensus to the majority's ground truth under adversarial
    minorities, averaged within each instance first and then across seeds.
    """
    return asyncio.run(run_fairness_async(config or FairnessConfig()))
