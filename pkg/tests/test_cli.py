import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from arroids.arrangement import CurveArrangement, arroid_of, unimodular_witness
from arroids.arroid import Arroid
from arroids.cli import run
from arroids.fan import WeightedFan

from cases import LINES_AND_CONIC_MINIMAL

DATA = Path(__file__).parent / "data"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    return code, buf.getvalue()


def test_validate_text():
    code, out = call("validate", DATA / "fourlines.json", "--format", "text")
    assert code == 0
    assert out.strip() == "bezout: ok, transversal: true"


def test_thm_text():
    code, out = call("thm", DATA / "fourlines.json", "--output", "text")
    assert code == 0
    assert out.strip() == "thm: true, per-ray balancing dims all 1"


def test_thm_false_on_concurrent_chords():
    code, out = call("thm", DATA / "concurrent_chords.json")
    assert code == 0
    rep = json.loads(out)
    assert rep["thm"] is False and rep["failing_rays"] == ["r:C"]


def test_tropicalize_lines_and_conic():
    code, out = call("tropicalize", DATA / "linesandconic.json")
    assert code == 0
    rep = json.loads(out)
    assert unimodular_witness(rep["minimal_rays"], LINES_AND_CONIC_MINIMAL) is not None


def test_gen_inf_family():
    for k, curves in ((0, 6), (1, 7)):
        code, out = call("gen-inf-family", k)
        assert code == 0
        data = json.loads(out)
        arr = CurveArrangement.from_dict(data)
        assert len(arr.ids) == curves and len(arr.abstract_records) == 7
    code, out = call("gen-inf-family", -1)
    assert code == 2
    assert json.loads(out)["error"] == "malformed_input"


def test_generated_family_accepted_by_other_verbs(tmp_path):
    _, out = call("gen-inf-family", 2)
    path = tmp_path / "inf2.json"
    path.write_text(out)
    for verb in ("validate", "fan", "thm", "homology"):
        assert call(verb, path)[0] == 0
    assert call("clusters", path, "--curve", "C1")[0] == 0
    assert call("modify-check", path, "-e", "L12")[0] in (0, 1)


def test_malformed_inputs_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("validate", bad)[0] == 2
    assert call("validate", tmp_path / "missing.json")[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"points": 3}))
    assert call("fan", wrong)[0] == 2
    assert call("contract", DATA / "fourlines.json")[0] == 2
    assert call("contract", DATA / "fourlines.json", "-e", "nope")[0] == 2
    assert call("star", DATA / "fourlines.json", "--ray", "r:nope")[0] == 2
    assert call("no-such-verb", DATA / "fourlines.json")[0] == 2


def test_validation_failure_exit_1(tmp_path):
    data = {
        "rank": 2,
        "elements": [{"id": "1", "degree": 1}, {"id": "2", "degree": 1}, {"id": "3", "degree": 1}],
        "points": [{"members": ["1", "3"]}, {"members": ["2", "3"]}],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = call("validate", path)
    assert code == 1
    rep = json.loads(out)
    assert rep["ok"] is False
    code, out = call("fan", path)
    assert code == 1
    assert json.loads(out)["error"] == "validation_failed"


def test_round_trips():
    _, out = call("contract", DATA / "fourlines.json", "-e", "L1")
    assert Arroid.from_dict(json.loads(out)).to_dict() == json.loads(out)
    _, out = call("fan", DATA / "generic_lines_conic.json")
    data = json.loads(out)
    assert data.pop("balanced") is True
    assert WeightedFan.from_dict(data).to_dict() == data
    _, out = call("delete", DATA / "generic_lines_conic.json", "-e", "C")
    assert Arroid.from_dict(json.loads(out)) == arroid_of(
        CurveArrangement.from_dict(json.loads((DATA / "generic_lines_conic.json").read_text()))
    ).delete("C")


@pytest.mark.parametrize(
    "argv",
    [
        ("fan", "fourlines.json"),
        ("homology", "generic_lines_conic.json", "--coefficients", "integer"),
        ("star", "fourlines.json", "--ray", "r:L1"),
        ("maximality", "inf1.json"),
        ("modify-check", "concurrent_chords.json", "-e", "C"),
    ],
)
def test_determinism(argv):
    verb, name, *rest = argv
    first = call(verb, DATA / name, *rest)
    second = call(verb, DATA / name, *rest)
    assert first == second
    assert first[0] in (0, 1)


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "arroids", "validate", str(DATA / "fourlines.json"), "--format", "text"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "bezout: ok, transversal: true"
