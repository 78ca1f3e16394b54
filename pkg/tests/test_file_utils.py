import asyncio
import json
import pytest
from conftest import PANEL_JUDGES
from rankings.ranking import Instance, Ranking, RankingError
from utils.file_utils import (
    FileUtils,
    format_rankings_csv,
    instance_from_json,
    instance_to_json,
    parse_cell,
    parse_ranking_arg,
    parse_rankings,
    parse_rankings_csv,
    parse_rankings_json,
)

N = None


@pytest.mark.parametrize(
    "token, expected",
    [("3", 3), (" 2 ", 2), ("", None), ("NA", None), (None, None), (4, 4), (2.0, 2)],
)
def test_parse_cell(token, expected):
    assert parse_cell(token) == expected


@pytest.mark.parametrize("token", ["x", "1.5", True])
def test_parse_cell_rejects_garbage(token):
    with pytest.raises(RankingError):
        parse_cell(token)


def test_csv_with_header_and_nulls():
    rankings = parse_rankings_csv("v1,v2,v3\n1,2,NA\n2,,1\n")
    assert rankings == [Ranking((1, 2, N)), Ranking((2, N, 1))]


def test_csv_without_header_skips_blank_lines():
    assert parse_rankings_csv("1,2\n\n2,1\n") == [Ranking((1, 2)), Ranking((2, 1))]


def test_csv_rejects_ragged_rows():
    with pytest.raises(RankingError, match="row 2 has 2 cells, expected 3"):
        parse_rankings_csv("1,2,3\n1,2\n")


@pytest.mark.parametrize("text", ["", "v1,v2\n"])
def test_csv_rejects_empty_input(text):
    with pytest.raises(RankingError, match="No rankings"):
        parse_rankings_csv(text)


def test_csv_rejects_bad_positions():
    with pytest.raises(RankingError, match="row 1"):
        parse_rankings_csv("1,a\n")
    with pytest.raises(RankingError):
        parse_rankings_csv("0,1\n")


def test_json_forms():
    expected = [Ranking((1, N, 2)), Ranking((2, 1, N))]
    assert parse_rankings_json("[[1, null, 2], [2, 1, null]]") == expected
    assert parse_rankings_json('{"judges": [[1, null, 2], [2, 1, "NA"]]}') == expected
    assert parse_rankings('[[1, 2]]', ".JSON") == [Ranking((1, 2))]
    with pytest.raises(RankingError, match="array of arrays"):
        parse_rankings_json('{"rankings": []}')
    with pytest.raises(RankingError, match="array of arrays"):
        parse_rankings_json("[1, 2, 3]")


def test_inline_ranking():
    assert parse_ranking_arg("4,5,2,3,1") == Ranking((4, 5, 2, 3, 1))
    assert parse_ranking_arg("1,NA,2") == Ranking((1, N, 2))


def test_format_rankings_csv():
    text = format_rankings_csv([Ranking((1, N, 2)), Ranking((2, 1, 1))])
    assert text == "v1,v2,v3\n1,NA,2\n2,1,1\n"
    assert parse_rankings_csv(text) == [Ranking((1, N, 2)), Ranking((2, 1, 1))]
    assert format_rankings_csv([Ranking((1, 2))], header=False) == "1,2\n"


def test_instance_json_keeps_metadata():
    inst = Instance.from_rankings(PANEL_JUDGES, generator="rime2", seed=4)
    text = instance_to_json(inst)
    data = json.loads(text)
    assert data["format_version"] == 1 and data["universe_size"] == 5
    assert data["judges"][0] == [1, 2, None, None, None]

    loaded = instance_from_json(text)
    assert loaded == inst
    assert loaded.metadata == {"generator": "rime2", "seed": 4}


def test_instance_json_rejects_other_versions():
    with pytest.raises(RankingError, match="version"):
        instance_from_json('{"format_version": 99, "judges": [[1, 2]]}')
    with pytest.raises(RankingError, match="judges"):
        instance_from_json('{"rankings": [[1, 2]]}')


def test_file_round_trips(tmp_path):
    files = FileUtils()
    rankings = [Ranking((1, N, 2)), Ranking((3, 1, 2))]

    async def scenario():
        csv_path = await files.save_rankings(tmp_path / "out" / "r.csv", rankings)
        json_path = await files.save_rankings(tmp_path / "r.json", rankings)
        inst_path = await files.save_instance(
            tmp_path / "inst.json", Instance.from_rankings(rankings, seed=9)
        )
        return (
            await files.load_rankings(csv_path),
            await files.load_rankings(json_path),
            await files.load_instance(inst_path),
            await files.load_instance(csv_path),
        )

    from_csv, from_json, inst, bare = asyncio.run(scenario())
    assert from_csv == from_json == rankings
    assert inst.metadata == {"seed": 9}
    assert list(bare.judges) == rankings
    assert bare.metadata["source"].endswith("r.csv")


def test_load_json_needs_an_object(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError, match="JSON object"):
        asyncio.run(FileUtils().load_json(path))


def test_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        asyncio.run(FileUtils().read_file(tmp_path / "absent.csv"))
