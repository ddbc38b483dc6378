import json
from importlib import resources

import jsonschema
import pytest

from ncline.cli import COMMANDS, main

SCHEMA = json.loads((resources.files("ncline") / "data" / "report.schema.json").read_text())

CASES = [
    ["gb", "--in", "cyclic3.alg", "--bound", "10"],
    ["normal-words", "--in", "cyclic3", "--bound", "4", "--degree", "2"],
    ["hilbert", "--in", "weighted", "--bound", "8"],
    ["rank", "--in", "cyclic3"],
    ["decompose", "--in", "cyclic3", "--seed", "3"],
    ["regular", "--in", "weighted"],
    ["strongly-free", "--in", "sum_squares3", "--x", "x3", "--bound", "8"],
    ["coherence-cert", "--in", "cyclic3.alg", "--bound", "10"],
    ["ideal-pres", "--in", "cyclic3", "--gens", "x1*x3, x1^2*x3", "--bound", "6"],
    ["betti", "--in", "cyclic3", "--bound", "6"],
    ["chain-witness", "--n", "3", "--tmax", "2", "--bound", "6"],
    ["gamma", "--in", "commutative_plane", "--bound", "4"],
    ["chi", "--in", "weighted"],
    ["cohomology", "--in", "commutative_plane", "--bound", "3"],
    ["kronecker", "--in", "commutative_plane"],
    ["koszul-dual", "--in", "sum_squares3", "--bound", "6"],
    ["twist", "--in", "commutative_plane", "--b", "quantum_plane"],
    ["distinguish", "--a", "p1_3.alg", "--b", "p1_4.alg"],
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_every_command_has_a_case():
    assert sorted(c[0] for c in CASES) == sorted(COMMANDS)


@pytest.mark.parametrize("argv", CASES, ids=[c[0] for c in CASES])
def test_json_reports_validate_and_are_deterministic(capsys, argv):
    code, out, _ = run(capsys, argv + ["--format", "json"])
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["command"] == argv[0]
    code2, out2, _ = run(capsys, argv + ["--format", "json"])
    assert out2 == out
    # the text form repeats the certification degrees verbatim
    _, text, _ = run(capsys, argv)
    for key, value in report["certified"].items():
        assert f"certified.{key}: {json.dumps(value)}" in text


def test_gb_report(capsys):
    _, out, _ = run(capsys, ["gb", "--in", "cyclic3.alg", "--bound", "10", "--format", "json"])
    res = json.loads(out)["result"]
    assert res["size"] == 1 and res["complete"] is True


def test_coherence_report(capsys):
    _, out, _ = run(capsys, ["coherence-cert", "--in", "cyclic3.alg", "--bound", "10", "--format", "json"])
    res = json.loads(out)["result"]
    assert res["kind"] == "rnci" and res["status"] == "certified"


def test_distinguish_report(capsys):
    _, out, _ = run(capsys, ["distinguish", "--a", "p1_3.alg", "--b", "p1_4.alg"])
    assert 'conclusion: "non-isomorphic"' in out


def test_incomplete_basis_exits_3(capsys):
    code, out, _ = run(capsys, ["gb", "--in", "two_relator_b", "--bound", "6", "--format", "json"])
    assert code == 3
    rep = json.loads(out)
    assert rep["result"]["complete"] is False
    assert rep["certified"] == {"groebner_basis": 6}


def test_negative_verdict_exits_0(capsys):
    code, out, _ = run(capsys, ["strongly-free", "--in", "commutative_plane", "--x", "y", "--format", "json"])
    assert code == 0
    assert json.loads(out)["result"]["status"] == "refuted"


@pytest.mark.parametrize(
    "argv",
    [
        ["gb", "--text", "field Q; gens x; rel x"],
        ["gb", "--in", "missing-file.alg"],
        ["gb"],
        ["gb", "--in", "cyclic3", "--bound", "1"],
        ["gb", "--in", "cyclic3", "--field", "F4"],
        ["nonsense"],
        ["twist", "--in", "commutative_plane"],
        ["strongly-free", "--in", "cyclic3"],
        ["gb", "--in", "cyclic3", "--precedence", "x1,x2"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2
    assert out == ""


def test_field_override(capsys):
    _, out, _ = run(capsys, ["hilbert", "--in", "cyclic3", "--field", "F5", "--bound", "4", "--format", "json"])
    rep = json.loads(out)
    assert rep["request"]["algebra"].startswith("field F5")
    assert rep["result"]["coefficients"] == [1, 3, 8, 21, 55]


def test_inline_text(capsys):
    code, out, _ = run(capsys, ["rank", "--text", "field Q; gens x y; rel x*y", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["request"]["input"]["source"] == "<inline>"
    assert rep["result"]["relations"][0]["rank"] == 1


def test_module_entry_point_exit_codes():
    import subprocess
    import sys

    ok = subprocess.run([sys.executable, "-m", "ncline.cli", "rank", "--in", "cyclic3"], capture_output=True, text=True)
    assert ok.returncode == 0 and "rank: 3" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "ncline.cli", "gb", "--text", "field Q; gens x; rel y*y"],
                         capture_output=True, text=True)
    assert bad.returncode == 2 and "unknown generator" in bad.stderr
