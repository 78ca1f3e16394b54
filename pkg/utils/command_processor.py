import secrets
import argparse
from pathlib import Path
from ui.printer import printer
from ui.rendering import Rendering
from utils.logger import Logger
from utils.file_utils import FileUtils, instance_to_json, parse_ranking_arg
from measures.distance import DEFAULT_CONFIG, MeasureConfig, compare
from rankings.ranking import RankingError, identity
from solver.bnb import BnbOptions, solve
from solver.ip import build_model, export_model
from sampling.mallows import MallowsParams
from sampling.scenario import ScenarioSpec, SizeRange, generate_instance, sample_rankings
from experiments.decisiveness import DecisivenessConfig, run_decisiveness_async
from experiments.fairness import FairnessConfig, run_fairness_async

logger = Logger.get_logger()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_UNPROVEN = 3


class CommandProcessor:
    """
    Dispatches a parsed command line to its handler and returns the exit code.
    """

    def __init__(self, args: argparse.Namespace, rendering: Rendering | None = None):
        self.args = args
        self.file_utils = FileUtils()
        self.rendering = rendering or Rendering(as_json=args.json)
        self.handlers = {
            "compare": self.compare_handler,
            "aggregate": self.aggregate_handler,
            "sample": self.sample_handler,
            "gen-instance": self.generate_handler,
            "export-ip": self.export_handler,
            "experiment": self.experiment_handler,
        }

    async def handle_command(self) -> int:
        handler = self.handlers[self.args.command]
        logger.info(f"Running {self.args.command}")
        return await handler()

    def resolve_seed(self, fallback: int | None = None) -> int:
        """
        The --seed flag, else the fallback, else a fresh seed announced on stderr.
        """
        if self.args.seed is not None:
            return self.args.seed
        if fallback is not None:
            return fallback
        seed = secrets.randbelow(2**32)
        printer(f"Using seed {seed}", True)
        return seed

    async def compare_handler(self) -> int:
        files = self.args.files
        if len(files) > 2:
            raise RankingError(f"compare takes one or two files, got {len(files)}")
        if len(files) == 2:
            a = (await self.file_utils.load_rankings(files[0]))[0]
            b = (await self.file_utils.load_rankings(files[1]))[0]
        else:
            rankings = await self.file_utils.load_rankings(files[0])
            if len(rankings) < 2:
                raise RankingError(f"{files[0]} holds {len(rankings)} ranking(s), need two")
            a, b = rankings[:2]

        cfg = MeasureConfig(self.args.gamma) if self.args.gamma else DEFAULT_CONFIG
        self.rendering.render_comparison(compare(a, b, self.args.measure, cfg))
        return EXIT_OK

    async def aggregate_handler(self) -> int:
        inst = await self.file_utils.load_instance(self.args.file)
        options = BnbOptions(
            start_solution=parse_ranking_arg(self.args.start) if self.args.start else None,
            node_limit=self.args.node_limit,
            time_limit=self.args.time_limit,
        )
        result = solve(inst, self.args.measure, options)
        if result.skipped_judges:
            printer(
                f"[yellow]{result.skipped_judges} judge(s) rank fewer than two objects "
                "and were ignored[/]",
                True,
            )
        self.rendering.render_optimality_set(result)
        return EXIT_OK if result.proven_complete else EXIT_UNPROVEN

    async def sample_handler(self) -> int:
        args = self.args
        if args.ref:
            reference = parse_ranking_arg(args.ref)
        elif args.n:
            reference = identity(args.n)
        else:
            raise ValueError("sample needs --ref or --n")
        params = MallowsParams(reference, args.phi)
        sizes = SizeRange.parse(args.subset_size) if args.subset_size else None
        if sizes is not None and args.generator == "rim":
            logger.warning("--subset-size is ignored by the rim generator")

        seed = self.resolve_seed()
        rankings = sample_rankings(params, args.generator, args.count, seed, sizes)
        if args.out:
            await self.file_utils.save_rankings(args.out, rankings)
        else:
            self.rendering.render_rankings(rankings, seed)
        return EXIT_OK

    async def generate_handler(self) -> int:
        data = await self.file_utils.load_json(self.args.spec)
        data["seed"] = self.resolve_seed(data.get("seed"))
        spec = ScenarioSpec.from_dict(data)
        inst = generate_instance(spec)
        if self.args.out:
            await self.file_utils.save_instance(self.args.out, inst)
            self.rendering.render_record(
                {"out": self.args.out, "judges": inst.num_judges, "seed": spec.seed}
            )
        else:
            self.rendering.render_output(instance_to_json(inst))
        return EXIT_OK

    async def export_handler(self) -> int:
        inst = await self.file_utils.load_instance(self.args.file)
        model = build_model(inst, self.args.measure)
        path = export_model(model, self.args.out)
        self.rendering.render_record(
            {
                "out": str(path),
                "r_variables": len(model.r_variables),
                "y_variables": len(model.y_variables),
                "rows": len(model.rows),
            }
        )
        return EXIT_OK

    async def experiment_handler(self) -> int:
        args = self.args
        data = await self.file_utils.load_json(args.config) if args.config else {}
        data["base_seed"] = self.resolve_seed(data.get("base_seed"))
        if args.workers:
            data["workers"] = args.workers

        if args.study == "decisiveness":
            report = await run_decisiveness_async(DecisivenessConfig.from_dict(data))
        else:
            report = await run_fairness_async(FairnessConfig.from_dict(data))
        unsolved = sum(row.instances_timed_out for row in report.rows)

        csv_path, manifest_path = await self.file_utils.write_report(Path(args.out), report)
        if args.json:
            self.rendering.render_json(report.manifest())
        else:
            self.rendering.render_record(
                {"report": str(csv_path), "manifest": str(manifest_path), "rows": len(report.rows)}
            )
        if unsolved:
            printer(f"[yellow]{unsolved} instance(s) were cut off by the node limit[/]", True)
        return EXIT_OK
