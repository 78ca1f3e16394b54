from rich.console import Console

_console = Console(stderr=True, highlight=False, soft_wrap=True)
_quiet = False


def set_quiet(quiet: bool) -> None:
    global _quiet
    _quiet = quiet


def printer(content: str, system: bool = False, force: bool = False) -> None:
    """
    Helper function to pass markup output to the stderr console with optional system prefix.
    Quiet mode drops everything but forced messages.
    """
    if _quiet and not force:
        return
    if system:
        content = "[cyan]System: [/]" + content
    try:
        _console.print(content)
    except Exception:
        pass
