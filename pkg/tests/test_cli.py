"""
Tests for the command line: every command, exit codes and error reports.
"""

import json

import pytest

from corals.cli import main
from corals.schemas import CoralGraphModel, CoralModel, MorseTreeModel, dump_model

SIMPLE_JOB = {
    "degree": {"positive": [[6, 3], [-6, 2]], "negative": [[0, -5]]},
    "constraint": {"entries": [{"direction": [2, 1], "value": "4"}]},
}


@pytest.fixture
def write(tmp_path):
    def _write(name, body):
        path = tmp_path / name
        path.write_text(body if isinstance(body, str) else json.dumps(body), encoding="utf-8")
        return str(path)
    return _write


def last_error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_validate_coral(write, capsys, simple_coral):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    assert main(["validate", "--input", path]) == 0
    assert json.loads(capsys.readouterr().out)["valid"] is True


def test_validate_tree(write, capsys, simple_tree):
    path = write("tree.json", dump_model(MorseTreeModel.from_tree(simple_tree)))
    assert main(["validate", "--input", path]) == 0
    assert json.loads(capsys.readouterr().out)["subject"] == "Morse tree"


def test_invalid_graph_exits_with_three(write, capsys, cyclic_graph):
    path = write("graph.json", dump_model(CoralGraphModel.from_graph(cyclic_graph)))
    assert main(["validate", "--input", path]) == 3
    report = last_error(capsys)
    assert report["error"] == "InvalidGraph"
    assert "Betti number nonzero" in report["details"]


def test_missing_input_exits_with_two(tmp_path, capsys):
    assert main(["validate", "--input", str(tmp_path / "absent.json")]) == 2
    assert last_error(capsys)["error"] == "ParseError"


def test_malformed_input_exits_with_two(write, capsys):
    path = write("broken.json", "{")
    assert main(["count", "--input", path]) == 2


def test_count_prints_the_total(write, capsys, tmp_path):
    path = write("job.json", SIMPLE_JOB)
    out = tmp_path / "result.json"
    assert main(["count", "--input", path, "--output", str(out)]) == 0
    assert capsys.readouterr().out == "1\n"
    assert json.loads(out.read_text(encoding="utf-8"))["total"] == "1"


def test_count_with_sampled_constraint(write, capsys):
    job = {"degree": {"positive": [[-1, 1], [1, 1]], "negative": [[0, -2]]}, "auto_stabilize": True}
    path = write("job.json", job)
    assert main(["count", "--input", path, "--seed", "5"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_bad_constraint_exits_with_four(write, capsys):
    job = dict(SIMPLE_JOB, constraint={"entries": [{"direction": [2, 1], "value": "-4"}]})
    path = write("job.json", job)
    assert main(["count", "--input", path]) == 4
    assert last_error(capsys)["error"] == "BadConstraint"


def test_enumerate(write, capsys):
    path = write("degree.json", SIMPLE_JOB["degree"])
    assert main(["enumerate", "--input", path]) == 0
    assert len(json.loads(capsys.readouterr().out)["types"]) == 1


def test_lift_and_project(write, capsys, simple_tree):
    tree = write("tree.json", dump_model(MorseTreeModel.from_tree(simple_tree)))
    assert main(["lift-tmt", "--input", tree, "--heights", "2"]) == 0
    coral = json.loads(capsys.readouterr().out)
    assert coral["positions"]["1"] == ["0", "2"]

    path = write("coral.json", coral)
    assert main(["project-tmt", "--input", path]) == 0
    assert json.loads(capsys.readouterr().out)["decoration"] == [0, 3, 5]


def test_lift_with_infeasible_heights(write, capsys, simple_tree):
    tree = write("tree.json", dump_model(MorseTreeModel.from_tree(simple_tree)))
    assert main(["lift-tmt", "--input", tree, "--heights", "1"]) == 4
    assert main(["lift-tmt", "--input", tree, "--heights", "two"]) == 2


def test_extend(write, capsys, simple_coral):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    assert main(["extend", "--input", path]) == 0
    assert len(json.loads(capsys.readouterr().out)["rays"]) == 3


def test_unwritable_output_exits_with_five(write, capsys, simple_coral, tmp_path):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    assert main(["extend", "--input", path, "--output", str(tmp_path)]) == 5


def test_area_series(write, capsys):
    job = {
        "degree": {"positive": [[1, 4], [1, 2]], "negative": [[-2, -6]]},
        "constraint": {"entries": [{"direction": [1, 4], "value": "-20"}]},
    }
    path = write("job.json", job)
    assert main(["area-series", "--input", path, "--b", "1", "--a-max", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["coefficients"] == {"0": "1"}
    assert main(["area-series", "--input", path]) == 2


def test_plot(write, capsys, simple_coral, tmp_path):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    assert main(["plot", "--input", path]) == 2
    out = tmp_path / "coral.svg"
    assert main(["plot", "--input", path, "--output", str(out), "--viewport", "-6,0,6,8"]) == 0
    assert 'class="segment"' in out.read_text(encoding="utf-8")


@pytest.mark.parametrize("argv", [
    ["--viewport", "-6,0,6,8"],
    ["--viewport=-6,0,6,8"],
    ["--viewport", "-3,1/2,3,5"],
])
def test_plot_accepts_negative_viewports(write, simple_coral, tmp_path, argv):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    out = tmp_path / "coral.svg"
    assert main(["plot", "--input", path, "--output", str(out)] + argv) == 0
    assert out.read_text(encoding="utf-8").startswith("<?xml")


def test_missing_viewport_value_is_a_usage_error(write, simple_coral, tmp_path):
    path = write("coral.json", dump_model(CoralModel.from_coral(simple_coral)))
    with pytest.raises(SystemExit) as excinfo:
        main(["plot", "--input", path, "--output", str(tmp_path / "c.svg"), "--viewport"])
    assert excinfo.value.code == 2
