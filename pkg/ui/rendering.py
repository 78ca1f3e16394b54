import sys
from typing import Any, TextIO
from config.settings import FLOAT_FORMAT
from measures.distance import MeasureResult
from rankings.ranking import Ranking
from solver.bnb import OptimalitySet
from utils.file_utils import dump_json


def format_number(value: float | int | None) -> str:
    if value is None:
        return "NA"
    text = format(value, FLOAT_FORMAT)
    # No negative zero in results
    return "0" if text == "-0" else text


def format_ranking(r: Ranking) -> str:
    return ",".join("NA" if p is None else str(p) for p in r.positions)


class Rendering:
    """
    Writes results to stdout, plain text or JSON, without colour or timing so
    seeded runs print byte-identical output.
    """

    def __init__(self, as_json: bool = False, out: TextIO | None = None):
        self.as_json = as_json
        self.out = out or sys.stdout

    def render_output(self, content: str) -> None:
        self.out.write(content if content.endswith("\n") else content + "\n")
        self.out.flush()

    def render_json(self, data: Any) -> None:
        self.render_output(dump_json(data))

    def render_comparison(self, result: MeasureResult) -> None:
        if self.as_json:
            self.render_json(result.to_dict())
        else:
            self.render_output(format_number(result.value))

    def render_optimality_set(self, result: OptimalitySet) -> None:
        if self.as_json:
            self.render_json(result.to_dict())
            return
        lines = [format_ranking(r) for r in result.rankings]
        lines.append(f"objective: {format_number(result.objective)}")
        lines.append(f"optima: {len(result.rankings)}")
        lines.append(f"nodes: {result.nodes_explored}")
        lines.append(f"proven_complete: {str(result.proven_complete).lower()}")
        self.render_output("\n".join(lines))

    def render_rankings(self, rankings: list[Ranking], seed: int) -> None:
        if self.as_json:
            self.render_json({"seed": seed, "rankings": [r.to_list() for r in rankings]})
        else:
            self.render_output("\n".join(format_ranking(r) for r in rankings))

    def render_record(self, record: dict[str, Any]) -> None:
        """
        Key/value summary lines for commands that mostly write files.
        """
        if self.as_json:
            self.render_json(record)
            return
        lines = []
        for key, value in record.items():
            shown = format_number(value) if isinstance(value, float) else value
            lines.append(f"{key}: {shown}")
        self.render_output("\n".join(lines))
