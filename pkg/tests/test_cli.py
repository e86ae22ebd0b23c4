import json
import re
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from finring import cli, theorem

SCHEMA = json.loads(resources.files("finring").joinpath("schema/report.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_z9_text(capsys):
    code, out, _ = run(capsys, "analyze", "--ring", "zmod:9")
    assert code == 0
    assert "two-sided zero divisors: [3, 6] (n = 2)" in out
    assert "two-sided bound: 9 <= 9 (holds, equality)" in out


def test_analyze_field(capsys):
    code, out, _ = run(capsys, "analyze", "--ring", "zmod:7")
    assert code == 0 and "no zero divisors; theorem vacuous" in out


def test_analyze_upper_trace(capsys):
    code, out, _ = run(capsys, "analyze", "--ring", "closure(matrix:zmod:2:2; E11,E12,E22)",
                       "--trace", "--json", "--no-timing")
    rep = json.loads(out)
    assert code == 0
    assert rep["trace"]["branch"] == "KOH_LEFT" and rep["profile"]["n"] == 5


@pytest.mark.parametrize("argv", [
    ["analyze", "--ring", "zmod:9", "--partition"],
    ["analyze", "--ring", "zmod:12", "--partition", "4", "--trace"],
    ["analyze", "--ring", "zmod:7"],
    ["trace", "--ring", "closure(matrix:zmod:2:2; E11,E21)"],
    ["trace", "--ring", "zmod:25"],
])
def test_json_reports_match_schema_and_round_trip(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert cli.Report.from_dict(data).to_dict() == data


@pytest.mark.parametrize("spec", ["zmod:9", "zmod:6", "closure(matrix:zmod:2:2; E11,E21)",
                                  "poly:2:x^2", "zmod:7"])
def test_text_and_json_agree(capsys, spec):
    _, js, _ = run(capsys, "analyze", "--ring", spec, "--json", "--no-timing")
    _, text, _ = run(capsys, "analyze", "--ring", spec, "--no-timing")
    rep = json.loads(js)
    nums = dict(re.findall(r"(order|characteristic|m_left|m_right|n) = ?(\d+)", text))
    nums.update(re.findall(r"^(order|characteristic): (\d+)$", text, flags=re.M))
    assert int(nums["order"]) == rep["ring"]["order"]
    assert int(nums["characteristic"]) == rep["ring"]["characteristic"]
    for key in ("m_left", "m_right", "n"):
        assert int(nums[key]) == rep["profile"][key]
    for key in ("koh_left_bound", "koh_right_bound", "ganesan_bound", "hirano_bound"):
        if rep["bounds"][key] is not None:
            assert f"{rep['ring']['order']} <= {rep['bounds'][key]} " in text


def test_no_timing_is_byte_stable(capsys):
    argv = ["analyze", "--ring", "closure(matrix:zmod:2:2; E11,E21)", "--trace", "--json", "--no-timing"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and "timing" not in json.loads(a)


def test_trace_column_ring(capsys):
    code, out, _ = run(capsys, "trace", "--ring", "closure(matrix:zmod:2:2; E11,E21)", "--json")
    t = json.loads(out)["trace"]
    assert code == 0 and t["branch"] == "RA_CONSTRUCTION" and t["a"] == 1


def test_trace_zmod25(capsys):
    _, out, _ = run(capsys, "trace", "--ring", "zmod:25", "--json")
    part = json.loads(out)["trace"]["partition"]
    assert part["A0_size"] == 5 and part["class_count"] == 5


@pytest.mark.parametrize("argv", [
    ["trace", "--ring", "zmod:11"],
    ["analyze", "--ring", "zmod"],
    ["analyze", "--ring", "zmod:5000"],
    ["analyze", "--ring", "zmod:20", "--max-ring-order", "10"],
    ["analyze", "--ring", "file:/does/not/exist.json"],
    ["analyze", "--ring", "zmod:9", "--partition", "2"],
    ["enumerate", "--order", "9"],
    ["enumerate", "--order", "16", "--deep"],
    ["verify", "--max-order", "9"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_bad_ring_file_names_axiom(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"order": 2, "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 1]],
                                "name": "ok"}))
    assert run(capsys, "analyze", "--ring", f"file:{path}")[0] == 0
    path.write_text(json.dumps({"order": 2, "add": [[0, 1], [1, 0]], "mul": [[0, 0], [1, 1]]}))
    code, _, err = run(capsys, "analyze", "--ring", f"file:{path}")
    assert code == 2 and "distributiv" in err


def test_enumerate_emit_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--order", "4", "--unital", "--up-to-iso",
                       "--emit-dir", str(tmp_path), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["counts"]["emitted"] == 4
    index = json.loads((tmp_path / "index.json").read_text())
    files = sorted(p.name for p in tmp_path.glob("*.json") if p.name != "index.json")
    assert sorted(r["file"] for r in index["classes"]) == files
    code, _, _ = run(capsys, "analyze", "--ring", f"file:{tmp_path / files[0]}")
    assert code == 0


def test_enumerate_text(capsys):
    code, out, _ = run(capsys, "enumerate", "--order", "4", "--noncommutative")
    assert code == 0 and out.startswith("order 4: 11 rings up to isomorphism")


def test_verify_order_4(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "4", "--json", "--no-timing")
    data = json.loads(out)
    assert code == 0
    assert all(data["claims"][c]["status"] == "pass" for c in theorem.CLAIMS[:-1])
    assert data["claims"]["CLAIM_PROPOSITION"]["status"] == "skipped"
    enumerated = [c for c in data["equality_cases"] if c["ring_spec"].startswith("R")]
    assert enumerated and {c["order"] for c in enumerated} == {4}


def test_verify_order_1(capsys):
    code, out, _ = run(capsys, "verify", "--max-order", "1", "--no-builtin", "--json")
    data = json.loads(out)
    assert code == 0 and data["rings"] == 1 and data["branches"]["vacuous"] == 1


def test_verify_reports_claim_failure(capsys, monkeypatch):
    monkeypatch.setattr(theorem, "is_prime_power", lambda q: False)
    code, out, err = run(capsys, "verify", "--max-order", "4", "--json")
    data = json.loads(out)
    assert code == 1
    assert data["failure"]["claim"] == "CLAIM_KOH_EQ"
    assert data["failure"]["ring"]["order"] == 4


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "finring.cli", "analyze", "--ring", "zmod:4",
                           "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["profile"]["two_sided"] == [2]
