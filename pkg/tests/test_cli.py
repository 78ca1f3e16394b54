import json
import pytest
from conftest import PANEL_JUDGES
from main import main
from ui.printer import set_quiet
from utils.file_utils import format_rankings_csv
from utils.logger import Logger
from rankings.ranking import Ranking


@pytest.fixture(autouse=True)
def reset_output_state():
    yield
    set_quiet(False)
    Logger.set_level("warning")


@pytest.fixture
def panel_csv(tmp_path):
    path = tmp_path / "panel.csv"
    path.write_text(format_rankings_csv([Ranking(j) for j in PANEL_JUDGES]))
    return path


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_compare_prints_one_number(tmp_path, capsys):
    path = _write(tmp_path, "pair.csv", "1,2\n2,1\n")
    assert main(["compare", "--measure", "tau_x", path]) == 0
    assert capsys.readouterr().out == "-1\n"


def test_compare_two_files(tmp_path, capsys):
    a = _write(tmp_path, "a.csv", "1,2,NA\n")
    b = _write(tmp_path, "b.csv", "2,1,NA\n")
    assert main(["compare", "--measure", "tau_x", a, b]) == 0
    assert capsys.readouterr().out == "-0.333333333333\n"


def test_compare_json_record(tmp_path, capsys):
    path = _write(tmp_path, "pair.csv", "1,2,NA\n2,1,NA\n")
    assert main(["compare", "--measure", "tau_x_hat", "--json", path]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"common": 2, "inner_product": -2, "measure": "tau_x_hat", "value": -1.0}


def test_global_flags_before_the_subcommand(tmp_path, capsys):
    path = _write(tmp_path, "pair.csv", "1,2,NA\n2,1,NA\n")
    assert main(["--json", "compare", "--measure", "tau_x_hat", path]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == -1.0

    sample = ["sample", "--n", "4", "--phi", "0.5", "--count", "2", "--json"]
    assert main(["--seed", "11", *sample]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 11
    # The subcommand's own flag wins
    assert main(["--seed", "1", *sample, "--seed", "11"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 11


def test_compare_distance_with_gamma(tmp_path, capsys):
    path = _write(tmp_path, "pair.csv", "1,2\n2,1\n")
    assert main(["compare", "--measure", "d_ks", "--gamma", "2", path]) == 0
    assert capsys.readouterr().out == "2\n"


def test_aggregate_prints_every_optimum(panel_csv, capsys):
    assert main(["aggregate", "--measure", "tau_x", str(panel_csv)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[:4] == ["4,5,1,2,3", "4,5,2,3,1", "objective: 0.6", "optima: 2"]
    assert lines[4].startswith("nodes: ")
    assert lines[5] == "proven_complete: true"


def test_aggregate_json_and_start(panel_csv, capsys):
    args = ["aggregate", "--measure", "tau_x", "--start", "1,2,3,4,5", "--json", str(panel_csv)]
    assert main(args) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["rankings"] == [[4, 5, 1, 2, 3], [4, 5, 2, 3, 1]]
    assert record["proven_complete"] is True


def test_aggregate_node_limit_exit_code(panel_csv, capsys):
    assert main(["aggregate", "--measure", "tau_x_hat", "--node-limit", "1", str(panel_csv)]) == 3
    assert "proven_complete: false" in capsys.readouterr().out


def test_aggregate_warns_about_skipped_judges(tmp_path, capsys):
    path = _write(tmp_path, "judges.csv", "1,2,3\nNA,1,NA\n")
    assert main(["aggregate", "--measure", "tau_x_hat", path]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("1,2,3\n")
    assert "ignored" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        ["compare", "--measure", "tau_x", "--bogus", "x.csv"],
        ["aggregate", "--measure", "d_ks", "x.csv"],
        ["sample", "--phi", "0.5", "--count", "0"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert "[error] usage" in capsys.readouterr().err


def test_ragged_input_is_a_data_error(tmp_path, capsys):
    path = _write(tmp_path, "ragged.csv", "1,2,3\n1,2\n")
    assert main(["aggregate", "--measure", "tau_x", path]) == 2
    assert "[error] data: Ragged input" in capsys.readouterr().err


def test_missing_file_is_a_data_error(tmp_path, capsys):
    assert main(["compare", "--measure", "tau", str(tmp_path / "absent.csv")]) == 2
    assert "[error] io" in capsys.readouterr().err


def test_quiet_silences_errors_only_when_not_forced(tmp_path, capsys):
    path = _write(tmp_path, "one.csv", "1,2\n")
    assert main(["compare", "--measure", "tau_x", "--quiet", path]) == 2
    assert "need two" in capsys.readouterr().err


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("concordia ")


def test_sample_is_reproducible_with_a_seed(capsys):
    args = ["sample", "--n", "5", "--phi", "0.5", "--count", "4", "--seed", "11", "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    record = json.loads(first)
    assert record["seed"] == 11 and len(record["rankings"]) == 4


def test_sample_without_seed_announces_one(capsys):
    assert main(["sample", "--ref", "2,1,3", "--phi", "0.5", "--generator", "rime2", "--subset-size", "2:2"]) == 0
    captured = capsys.readouterr()
    assert "Using seed" in captured.err
    assert captured.out.count("NA") == 1


def test_sample_needs_a_reference(capsys):
    assert main(["sample", "--phi", "0.5"]) == 2


def test_sample_to_file(tmp_path):
    out = tmp_path / "samples.csv"
    assert main(["sample", "--n", "4", "--phi", "0.3", "--count", "3", "--seed", "1", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4


def test_gen_instance_then_aggregate(tmp_path, capsys):
    spec = _write(
        tmp_path,
        "scenario.json",
        json.dumps({"n": 5, "num_judges": 8, "phi": 0.2, "size_range": [2, 4]}),
    )
    out = tmp_path / "inst.json"
    assert main(["gen-instance", "--spec", spec, "--out", str(out), "--seed", "5"]) == 0
    assert "seed: 5" in capsys.readouterr().out
    inst = json.loads(out.read_text())
    assert inst["metadata"]["seed"] == 5 and len(inst["judges"]) == 8

    assert main(["aggregate", "--measure", "tau_x_hat", str(out)]) == 0
    assert "proven_complete: true" in capsys.readouterr().out


def test_gen_instance_to_stdout_uses_spec_seed(tmp_path, capsys):
    spec = _write(
        tmp_path,
        "scenario.json",
        json.dumps({"n": 4, "num_judges": 3, "phi": 0.5, "size_range": "2:3", "seed": 8}),
    )
    assert main(["gen-instance", "--spec", spec]) == 0
    assert json.loads(capsys.readouterr().out)["metadata"]["seed"] == 8


def test_export_ip(panel_csv, tmp_path, capsys):
    out = tmp_path / "model.lp"
    assert main(["export-ip", "--measure", "tau_x", "--out", str(out), str(panel_csv)]) == 0
    assert out.exists()
    lines = capsys.readouterr().out.splitlines()
    assert "r_variables: 20" in lines and "rows: 90" in lines


def test_experiment_json_is_byte_identical(tmp_path, capsys):
    config = _write(
        tmp_path,
        "config.json",
        json.dumps({"n": 5, "num_judges": 6, "seeds": 2, "size_range": [2, 4], "phi_grid": [0.2, 0.8]}),
    )
    outputs, reports = [], []
    for run in range(2):
        out = tmp_path / f"run{run}.csv"
        args = ["experiment", "--json", "decisiveness", "--config", config, "--out", str(out)]
        args += ["--seed", "3"]
        assert main(args) == 0
        outputs.append(capsys.readouterr().out)
        reports.append(out.read_text())
    assert outputs[0] == outputs[1]
    assert reports[0] == reports[1]
    manifest = json.loads(outputs[0])
    assert manifest["config"]["base_seed"] == 3
    assert (tmp_path / "run0.json").exists()


def test_fairness_experiment_summary(tmp_path, capsys):
    config = _write(
        tmp_path,
        "fairness.json",
        json.dumps(
            {
                "n": 5,
                "num_judges": 10,
                "seeds": 1,
                "phi_grid": [0.05],
                "spammer_phi_grid": [0.9],
                "majority_size_range": [2, 3],
                "alphas": [0.2],
                "minority_kinds": ["spammers"],
                "minority_size_ranges": [[3, 5]],
            }
        ),
    )
    out = tmp_path / "fairness.csv"
    assert main(["experiment", "fairness", "--config", config, "--out", str(out), "--seed", "1"]) == 0
    assert "rows: 4" in capsys.readouterr().out
    assert out.read_text().startswith("phi,minority_phi,alpha,minority_kind,minority_size_dist,measure,")
