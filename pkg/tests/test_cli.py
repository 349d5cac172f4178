import json
import re
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from polyauto import cli
from polyauto.errors import InvariantViolation

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
JOBS = sorted(p.name[: -len(".job.json")] for p in GOLDEN.glob("*.job.json"))


def polyauto(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "polyauto.cli", *args], input=stdin,
                          capture_output=True, text=True, cwd=ROOT)


@pytest.mark.parametrize("name", JOBS)
def test_golden_outputs(name, capsys):
    job = GOLDEN / f"{name}.job.json"
    assert cli.main(["run", str(job)]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / f"{name}.out.json").read_text()


@pytest.mark.parametrize("name", ["classify", "gb", "decompose", "classify-psi"])
def test_byte_identical_across_processes(name):
    job = str(GOLDEN / f"{name}.job.json")
    first, second = polyauto("run", job), polyauto("run", job)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_command_subparser_and_stdin(capsys, monkeypatch):
    doc = json.loads((GOLDEN / "gb.job.json").read_text())
    del doc["command"]
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(doc)))
    assert cli.main(["gb", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["basis"] == ["x - y", "y^2 - 1"]


def test_command_mismatch_is_an_input_error(capsys):
    assert cli.main(["gb", str(GOLDEN / "classify.job.json")]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "InputError"


def _job(**kw):
    return {"schema_version": 1, "vars": ["x", "y"], **kw}


@pytest.mark.parametrize("doc", [
    _job(command="gb", inputs={"generators": ["x"]}, colour="blue"),
    _job(command="frobnicate"),
    {"schema_version": 2, "command": "gb", "vars": ["x"]},
    _job(command="gb", budgets={"max_pairs": 0}),
    _job(command="gb", budgets={"speed": 3}),
    _job(command="gb", field={"kind": "reals"}),
])
def test_schema_rejections(doc):
    report, code = cli.run(doc)
    assert code == 2 and report["error"] == "SchemaError"


@pytest.mark.parametrize("doc", [
    _job(command="gb"),
    {"schema_version": 1, "command": "gb", "inputs": {"generators": ["x"]}},
    _job(command="gb", inputs={"generators": ["x +* y"]}),
    _job(command="classify", inputs={"F": {"coords": ["x"]}}),
    _job(command="iterate-degrees", inputs={"F": {"coords": ["x", "y"]}, "N": "five"}),
    _job(command="compose", inputs={"F": {"coords": ["x", "y"], "ring": {"vars": ["a", "b"]}},
                                    "G": {"coords": ["x", "y"]}}),
])
def test_input_errors(doc):
    report, code = cli.run(doc)
    assert code == 2 and set(report) == {"error", "message"}


def test_order_not_found_is_inconclusive():
    report, code = cli.run(_job(command="order", inputs={"F": {"coords": ["2*x", "y"]}}))
    assert code == 3


def test_budget_overrun_is_inconclusive():
    doc = _job(command="gb", vars=["x", "y", "z"], budgets={"max_pairs": 1},
                inputs={"generators": ["x^3 - y*z", "y^3 - x*z^2", "z^3 + x^2 - y"]})
    report, code = cli.run(doc)
    assert code == 3 and report["error"] == "BudgetExceeded"


def test_inconclusive_classification_keeps_the_report():
    doc = _job(command="classify", inputs={"F": {"coords": ["-y", "x"]}},
                budgets={"order_bound": 2, "degree_bound": 1})
    report, code = cli.run(doc)
    assert code == 3 and report["verdict"] == "inconclusive" and report["evidence"]


def test_budget_flags_override_the_job(capsys):
    assert cli.main(["run", str(GOLDEN / "invariants.job.json"), "--degree-bound", "2"]) == 0
    assert json.loads(capsys.readouterr().out) == {"degree_bound": 2, "basis": ["1", "x*y"]}


def test_internal_errors_exit_4(monkeypatch):
    def boom(job):
        raise InvariantViolation("broken")

    monkeypatch.setitem(cli.HANDLERS, "gb", boom)
    report, code = cli.run(_job(command="gb", inputs={"generators": ["x"]}))
    assert code == 4 and report["error"] == "InvariantViolation"


def test_missing_file_and_bad_json(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "nope.json")]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "FileNotFoundError"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["run", str(bad)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "JSONDecodeError"


def test_poloni_moser_writes_json(tmp_path, capsys):
    out = tmp_path / "pm.json"
    assert cli.main(["poloni-moser", "--degree-bound", "3", "--json", str(out)]) == 0
    printed = capsys.readouterr().out
    assert out.read_text() == printed
    report = json.loads(printed)
    assert report["conclusion"] == "success" and set(report["invariant_bases"]) == {"1", "2", "3"}


def test_poloni_moser_budget_gives_partial_report(capsys):
    assert cli.main(["poloni-moser", "--max-pairs", "1"]) == 3
    assert json.loads(capsys.readouterr().out)["conclusion"] == "incomplete"


def readme_examples():
    text = (ROOT / "README.md").read_text()
    for block in re.findall(r"```console\n(.*?)```", text, re.S):
        cmd, _, expected = block.partition("\n")
        assert cmd.startswith("$ ")
        yield cmd[2:], expected


@pytest.mark.parametrize("cmd,expected", list(readme_examples()))
def test_readme_examples(cmd, expected):
    argv = shlex.split(cmd)
    assert argv[0] == "polyauto"
    result = polyauto(*argv[1:])
    assert result.returncode == 0, result.stderr
    assert result.stdout == expected
