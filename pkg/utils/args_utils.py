import argparse
from config.settings import FORMAT_VERSION, VERSION, Measure


class UsageError(Exception):
    """Raised instead of exiting when the command line is malformed."""

    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message, self.format_usage())


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _add_global_flags(parser: argparse.ArgumentParser, nested: bool = False) -> None:
    """
    Flags accepted before or after the subcommand. Nested copies leave the
    attribute unset unless given, so they never overwrite the root's value.
    """
    kwargs = {"default": argparse.SUPPRESS} if nested else {}
    parser.add_argument("--seed", type=int, help="Seed for randomized commands", **kwargs)
    parser.add_argument("--json", action="store_true", help="Machine-readable output", **kwargs)
    parser.add_argument(
        "--quiet", action="store_true", help="Silence the error stream", **kwargs
    )
    parser.add_argument(
        "--log-level",
        choices=["debug", "info", "warning", "error", "critical"],
        help="Logger level",
        **kwargs,
    )


def _global_flags() -> argparse.ArgumentParser:
    parent = ArgumentParser(add_help=False)
    _add_global_flags(parent, nested=True)
    return parent


def build_parser() -> ArgumentParser:
    aggregation = [m.value for m in (Measure.TAU_X, Measure.TAU_X_HAT)]
    common = _global_flags()

    parser = ArgumentParser(
        prog="concordia",
        description="Compare and aggregate non-strict incomplete rankings",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"concordia {VERSION} (file format {FORMAT_VERSION})",
    )
    _add_global_flags(parser)
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=ArgumentParser
    )

    compare = commands.add_parser("compare", parents=[common], help="Compare two rankings")
    compare.add_argument(
        "--measure", required=True, choices=[m.value for m in Measure], help="Measure"
    )
    compare.add_argument("--gamma", type=_positive_float, help="d_KS distance unit divisor")
    compare.add_argument(
        "files", nargs="+", help="Two files (first row of each) or one file with two rows"
    )

    aggregate = commands.add_parser(
        "aggregate", parents=[common], help="Exact consensus with every alternative optimum"
    )
    aggregate.add_argument("--measure", required=True, choices=aggregation)
    aggregate.add_argument("--start", type=str, help="Start solution, e.g. 4,5,2,3,1")
    aggregate.add_argument("--node-limit", type=_positive_int)
    aggregate.add_argument("--time-limit", type=_positive_float, help="Seconds")
    aggregate.add_argument("file", help="Rankings CSV/JSON or instance JSON")

    sample = commands.add_parser("sample", parents=[common], help="Draw Mallows rankings")
    sample.add_argument("--generator", choices=["rim", "rime1", "rime2"], default="rim")
    sample.add_argument("--phi", type=float, required=True, help="Dispersion in (0, 1]")
    sample.add_argument("--ref", type=str, help="Ground truth, e.g. 1,2,3,4")
    sample.add_argument("--n", type=_positive_int, help="Objects, when --ref is absent")
    sample.add_argument("--subset-size", type=str, help="U(l,u) as l:u")
    sample.add_argument("--count", type=_positive_int, default=1)
    sample.add_argument("--out", type=str, help="Write rankings to a CSV/JSON file")

    generate = commands.add_parser(
        "gen-instance", parents=[common], help="Generate an instance from a scenario"
    )
    generate.add_argument("--spec", required=True, help="Scenario JSON")
    generate.add_argument("--out", type=str, help="Instance JSON path")

    export = commands.add_parser("export-ip", parents=[common], help="Export the IP model")
    export.add_argument("--measure", required=True, choices=aggregation)
    export.add_argument("--out", required=True, help="Model path, .lp or .mps")
    export.add_argument("file", help="Rankings CSV/JSON or instance JSON")

    experiment = commands.add_parser(
        "experiment", parents=[common], help="Run a desk-scale study"
    )
    studies = experiment.add_subparsers(
        dest="study", required=True, parser_class=ArgumentParser
    )
    for study in ("decisiveness", "fairness"):
        sub = studies.add_parser(study, parents=[common])
        sub.add_argument("--config", type=str, help="Config JSON")
        sub.add_argument("--out", required=True, help="Report CSV; manifest goes next to it")
        sub.add_argument("--workers", type=_positive_int, help="Process pool size")

    return parser


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse and return command-line arguments."""
    return build_parser().parse_args(argv)
