import io
import json

import pytest

from geoverify import __version__
from geoverify.harness import emit_report, load_fixture, run_suite, to_json, to_text
from geoverify.harness.cli import main
from geoverify.harness.fixtures import fixture_text

FIELDS = ["format_version", "fixture", "suite", "tolerance", "checks", "overall", "engine_version", "seed", "points", "values"]


@pytest.fixture(scope="module")
def sasakian_report():
    return run_suite(load_fixture("example2-r3"), "sasakian", points=5, seed=9)


def test_json_field_order(sasakian_report):
    data = json.loads(to_json(sasakian_report))
    assert list(data) == FIELDS
    assert data["engine_version"] == __version__ and data["seed"] == 9 and data["points"] == 5
    rec = data["checks"][-1]
    assert rec["name"] == "para-sasakian: nabla-xi-vs-eps-phi"
    assert list(rec)[:6] == ["name", "anchor", "hypothesis", "points", "max_residual", "pass"]
    assert rec["pass"] is False and rec["points"] == 5


def test_json_floats_round_trip(sasakian_report):
    data = json.loads(to_json(sasakian_report))
    for rec, check in zip(data["checks"], sasakian_report.checks):
        assert rec["max_residual"] == check.max_residual


def test_text_table(sasakian_report):
    text = to_text(sasakian_report, color=False)
    row = next(line for line in text.splitlines() if "nabla-xi-vs-eps-phi" in line)
    assert row.split()[:3] == ["para-sasakian:", "nabla-xi-vs-eps-phi", "FAIL"]
    assert text.rstrip().endswith("overall: FAIL")
    assert "\x1b[" not in text
    assert "\x1b[31mFAIL" in to_text(sasakian_report, color=True)


def test_color_from_environment(sasakian_report, monkeypatch):
    monkeypatch.setenv("GEOVERIFY_COLOR", "1")
    assert "\x1b[" in to_text(sasakian_report)


def test_emit_exit_codes(sasakian_report):
    buf = io.StringIO()
    assert emit_report(sasakian_report, "json", buf) == 1
    assert json.loads(buf.getvalue())["overall"] is False
    ok = run_suite(load_fixture("euclidean-r3"), "tensors", points=3)
    assert emit_report(ok, "text") == 0
    with pytest.raises(ValueError):
        emit_report(ok, "xml")


def test_cli_verify_text(capsys):
    code = main(["verify", "example2-r3", "--suite", "sasakian", "--format", "text", "--points", "4"])
    out = capsys.readouterr().out
    assert code == 1
    assert "para-sasakian: nabla-xi-vs-eps-phi" in out and "FAIL" in out


def test_cli_verify_spec_file(tmp_path, capsys):
    path = tmp_path / "ex2.manifold"
    path.write_text(fixture_text("example2-r3"))
    assert main(["verify", str(path), "--suite", "soliton", "--points", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["overall"] is True


def test_cli_fixtures(capsys):
    assert main(["fixtures", "list"]) == 0
    assert "example2-r3" in capsys.readouterr().out.split()
    assert main(["fixtures", "dump", "trivial-ps-r1"]) == 0
    assert "[manifold]" in capsys.readouterr().out
    assert main(["fixtures", "dump", "nope"]) == 2


def test_cli_theorems(tmp_path):
    out = tmp_path / "t.json"
    assert main(["theorems", "--trials", "300", "--seed", "4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["suite"] == "theorems" and data["points"] == 300


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "example2-r3", "--suite", "bogus"],
        ["verify", "no-such-fixture"],
        ["verify", "euclidean-r3", "--suite", "soliton"],
        ["theorems", "--trials", "0"],
        [],
    ],
)
def test_cli_operational_errors(argv, capsys):
    assert main(argv) == 2
    capsys.readouterr()


def test_cli_malformed_spec(tmp_path, capsys):
    bad = tmp_path / "bad.manifold"
    bad.write_text("[manifold]\nname = x\ncoordinates = [u]\n\n[metric]\ng = [[exp(u]]\n")
    assert main(["verify", str(bad)]) == 2
    assert "bad.manifold" in capsys.readouterr().err
