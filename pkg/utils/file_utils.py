import io
import re
import csv
import json
import aiofiles
from pathlib import Path
from typing import Any, Iterable, Protocol
from utils.logger import Logger
from config.settings import FORMAT_VERSION, NULL_OUTPUT, NULL_TOKENS
from rankings.ranking import Instance, Ranking, RankingError, as_ranking

logger = Logger.get_logger()

HEADER_CELL = re.compile(r"^v\d+$")


class Report(Protocol):
    fieldnames: tuple[str, ...]

    def records(self) -> list[dict[str, Any]]: ...

    def manifest(self) -> dict[str, Any]: ...


def parse_cell(token: Any, where: str = "") -> int | None:
    """
    A ranking cell: a positive integer, or null spelled "" / "NA" (JSON null).
    """
    if token is None:
        return None
    if isinstance(token, bool):
        raise RankingError(f"Invalid position {token!r}{where}")
    if isinstance(token, int):
        return token
    if isinstance(token, float) and token.is_integer():
        return int(token)
    text = str(token).strip()
    if text in NULL_TOKENS:
        return None
    try:
        return int(text)
    except ValueError:
        raise RankingError(f"Invalid position '{text}'{where}")


def _rows_to_rankings(rows: list[list[Any]]) -> list[Ranking]:
    if not rows:
        raise RankingError("No rankings found")
    width = len(rows[0])
    rankings = []
    for number, row in enumerate(rows, start=1):
        if len(row) != width:
            raise RankingError(
                f"Ragged input: row {number} has {len(row)} cells, expected {width}"
            )
        rankings.append(
            Ranking(tuple(parse_cell(cell, f" in row {number}") for cell in row))
        )
    return rankings


def parse_rankings_csv(text: str) -> list[Ranking]:
    """
    One judge per row, optionally preceded by a "v1,...,vn" header.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if rows and all(HEADER_CELL.match(cell.strip()) for cell in rows[0]):
        rows = rows[1:]
    return _rows_to_rankings(rows)


def parse_rankings_json(text: str) -> list[Ranking]:
    """
    Either an array of arrays or an instance document with a "judges" field.
    """
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("judges")
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise RankingError("JSON rankings must be an array of arrays")
    return _rows_to_rankings(data)


def parse_rankings(text: str, suffix: str = ".csv") -> list[Ranking]:
    if suffix.lower() == ".json":
        return parse_rankings_json(text)
    return parse_rankings_csv(text)


def parse_ranking_arg(text: str) -> Ranking:
    """
    A single ranking given inline, e.g. "4,5,2,3,1" or "1,NA,2".
    """
    return _rows_to_rankings([text.split(",")])[0]


def _cell(value: Any) -> str:
    return NULL_OUTPUT if value is None else str(value)


def format_rankings_csv(rankings: Iterable[Ranking], header: bool = True) -> str:
    rankings = [as_ranking(r) for r in rankings]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if header and rankings:
        writer.writerow(f"v{i + 1}" for i in range(rankings[0].universe_size))
    for r in rankings:
        writer.writerow(_cell(p) for p in r.positions)
    return buffer.getvalue()


def dump_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def instance_to_json(inst: Instance) -> str:
    return dump_json(
        {
            "format_version": FORMAT_VERSION,
            "universe_size": inst.universe_size,
            "judges": [j.to_list() for j in inst.judges],
            "metadata": inst.metadata,
        }
    )


def instance_from_json(text: str) -> Instance:
    data = json.loads(text)
    if not isinstance(data, dict) or "judges" not in data:
        raise RankingError("Instance JSON needs a 'judges' field")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise RankingError(f"Unsupported instance format version {version}")
    judges = _rows_to_rankings(data["judges"])
    size = data.get("universe_size", judges[0].universe_size)
    return Instance(int(size), tuple(judges), dict(data.get("metadata") or {}))


def format_report_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=report.fieldnames, lineterminator="\n")
    writer.writeheader()
    for record in report.records():
        writer.writerow({k: _cell(v) for k, v in record.items()})
    return buffer.getvalue()


class FileUtils:
    """
    Async file access for the command layer; parsing stays in the pure helpers above.
    """

    async def read_file(self, file_path: str | Path) -> str:
        try:
            async with aiofiles.open(file_path, "r", encoding="utf-8") as f:
                return await f.read()
        except (IOError, OSError) as e:
            logger.error(f"Error reading file {file_path}: {e}")
            raise

    async def write_file(self, file_path: str | Path, content: str) -> Path:
        path = Path(file_path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(path, "w", encoding="utf-8") as f:
            await f.write(content)
        logger.info(f"Wrote {path}")
        return path

    async def load_rankings(self, file_path: str | Path) -> list[Ranking]:
        path = Path(file_path)
        return parse_rankings(await self.read_file(path), path.suffix)

    async def load_instance(self, file_path: str | Path) -> Instance:
        """
        Instance JSON keeps its metadata; any other rankings file becomes a bare instance.
        """
        path = Path(file_path)
        text = await self.read_file(path)
        if path.suffix.lower() == ".json":
            data = json.loads(text)
            if isinstance(data, dict):
                return instance_from_json(text)
        return Instance.from_rankings(parse_rankings(text, path.suffix), source=str(path))

    async def load_json(self, file_path: str | Path) -> dict[str, Any]:
        data = json.loads(await self.read_file(file_path))
        if not isinstance(data, dict):
            raise ValueError(f"{file_path} must hold a JSON object")
        return data

    async def save_rankings(self, file_path: str | Path, rankings: list[Ranking]) -> Path:
        path = Path(file_path)
        if path.suffix.lower() == ".json":
            content = dump_json([as_ranking(r).to_list() for r in rankings])
        else:
            content = format_rankings_csv(rankings)
        return await self.write_file(path, content)

    async def save_instance(self, file_path: str | Path, inst: Instance) -> Path:
        return await self.write_file(file_path, instance_to_json(inst))

    async def write_report(self, file_path: str | Path, report: Report) -> tuple[Path, Path]:
        """
        Writes the report rows as CSV and the full manifest next to it as JSON.
        """
        path = Path(file_path)
        manifest_path = path.with_suffix(".json")
        if manifest_path == path:
            manifest_path = path.with_name(f"{path.stem}.manifest.json")
        csv_path = await self.write_file(path, format_report_csv(report))
        await self.write_file(manifest_path, dump_json(report.manifest()))
        return csv_path, manifest_path
