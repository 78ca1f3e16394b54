import sys
import json
import asyncio
from ui.printer import printer, set_quiet
from utils.logger import Logger
from rich.markup import escape
from utils.args_utils import UsageError, parse_args
from utils.command_processor import (
    EXIT_DATA,
    EXIT_USAGE,
    CommandProcessor,
)

logger = Logger.get_logger()


def report_error(kind: str, message: str) -> None:
    printer(f"[red]\\[error] {kind}: {escape(message)}[/]", force=True)


async def async_main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as e:
        printer(escape(e.usage.rstrip()), force=True)
        report_error("usage", str(e))
        return EXIT_USAGE

    set_quiet(args.quiet)
    if args.log_level:
        Logger.set_level(args.log_level)

    processor = CommandProcessor(args)
    try:
        return await processor.handle_command()
    except (ValueError, json.JSONDecodeError) as e:
        report_error("data", str(e))
        return EXIT_DATA
    except OSError as e:
        report_error("io", str(e))
        return EXIT_DATA


def main(argv: list[str] | None = None) -> int:
    """
    Runs one command line and returns its exit code instead of exiting.
    """
    try:
        return asyncio.run(async_main(argv))
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
