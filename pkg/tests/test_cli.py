import csv
import io
import json
import subprocess
import sys

import pytest

from covollab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json", "--no-timing")
    return code, json.loads(out)


def test_covol_json(capsys):
    code, d = doc(capsys, "covol", "--family", "A", "--rank", "2", "--q", "3")
    assert code == 0 and d["outputs"]["value"] == "27/16"
    assert set(d) == {"command", "inputs", "outputs", "certificates", "elapsed_ms"}


def test_order(capsys):
    code, d = doc(capsys, "order", "--family", "G", "--rank", "2", "--q", "2")
    assert code == 0 and d["outputs"]["group_order"] == 12096


def test_big_orders_render_as_strings(capsys):
    code, d = doc(capsys, "order", "--family", "E", "--rank", "8", "--q", "27")
    assert code == 0 and isinstance(d["outputs"]["group_order"], str)


def test_lemma_root_failure_exit(capsys):
    code, d = doc(capsys, "verify-lemma-root", "--family", "A", "--rank", "1", "--q", "5")
    assert code == 1
    assert d["outputs"]["rank"] == 2 and d["certificates"][0]["status"] == "fail"


@pytest.mark.parametrize("argv", [
    ["order", "--family", "A", "--rank", "1", "--q", "6"],
    ["order", "--family", "E", "--rank", "5", "--q", "2"],
    ["covol", "--family", "A", "--rank", "1"],
    ["centralizer", "--family", "A", "--rank", "1", "--q", "3", "--trunc", "2"],
    ["verify-lemma-poly", "--q", "5", "--vars", "1", "--poly", "1@4;-1@0"],
    ["verify-p-properties", "--family", "B", "--rank", "2", "--q", "3", "--alpha", "1", "--level", "3",
     "--trunc", "6"],
    ["lift", "--family", "A", "--rank", "1", "--q", "5", "--trunc", "2"],
    ["covol", "--family", "A", "--rank", "1", "--q", "5", "--zeta", "1,2"],
])
def test_precondition_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and len(err.strip().splitlines()) == 1


def test_unknown_command_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_invalid_zeta_reports_failed_invariant(capsys):
    code, d = doc(capsys, "covol", "--family", "A", "--rank", "1", "--q", "5", "--zeta", "1,6,5")
    assert code == 1
    failed = [c["name"] for c in d["certificates"] if c["status"] == "fail"]
    assert failed == ["zeta_root_modulus"]


def test_genus_covol(capsys):
    code, d = doc(capsys, "audit-bounds", "--family", "A", "--rank", "1", "--q", "5", "--zeta", "1,-2,5")
    assert code == 0 and d["outputs"]["covol_genus"] == "145/1"


def test_flagged_threshold_is_not_failure(capsys):
    code, d = doc(capsys, "audit-bounds", "--family", "D", "--rank", "2", "--q", "3")
    assert code == 0 and d["certificates"][0]["status"] == "flagged"


def test_enclosure(capsys):
    code, d = doc(capsys, "enclosure", "--q", "3", "--depth", "30")
    assert code == 0 and all(c["status"] == "pass" for c in d["certificates"])


def test_e6_audit_exit_reflects_balance(capsys):
    code, d = doc(capsys, "e6-audit")
    status = {c["name"]: c["status"] for c in d["certificates"]}
    assert status["inequality"] == "pass"
    assert code == (0 if status["balance"] == "pass" else 1)


@pytest.mark.parametrize("argv", [
    ["roots", "--family", "E", "--rank", "6"],
    ["simply-laced-audit", "--family", "D", "--rank", "4"],
    ["verify-generation", "--family", "A", "--rank", "1", "--q", "3", "--level", "1", "--trunc", "2"],
    ["verify-p-properties", "--family", "A", "--rank", "2", "--q", "5", "--alpha", "1", "--level", "3",
     "--trunc", "5"],
    ["h1", "--family", "A", "--rank", "1", "--q", "13"],
    ["centralizer", "--family", "A", "--rank", "1", "--q", "5", "--trunc", "3"],
    ["lift", "--family", "A", "--rank", "1", "--q", "25", "--trunc", "3", "--seed", "7"],
    ["verify-lemma-poly", "--q", "5", "--vars", "2", "--poly", "2@3,1;1@0,2"],
])
def test_commands_pass(capsys, argv):
    code, d = doc(capsys, *argv)
    assert code == 0, d["certificates"]


def test_lift_outside_hypotheses_flagged(capsys):
    code, d = doc(capsys, "lift", "--family", "A", "--rank", "1", "--q", "5", "--trunc", "3", "--seed", "1",
                  "--allow-outside-hypotheses")
    names = {c["name"]: c["status"] for c in d["certificates"]}
    assert names.get("hypotheses", "flagged") == "flagged"
    assert names["post_check"] in ("pass", "fail")


def _flatten(prefix, x, rows):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows[prefix] = x


@pytest.mark.parametrize("argv", [["covol", "--family", "A", "--rank", "2", "--q", "3"],
                                  ["h1", "--family", "A", "--rank", "1", "--q", "13"],
                                  ["enclosure", "--q", "3", "--depth", "12"]])
def test_json_and_csv_agree(capsys, argv):
    _, d = doc(capsys, *argv)
    _, out, _ = run(capsys, *argv, "--format", "csv", "--no-timing")
    rows = list(csv.DictReader(io.StringIO(out)))
    flat = {}
    _flatten("", d["outputs"], flat)
    csv_outputs = {r["key"]: r["value"] for r in rows if r["section"] == "outputs"}
    assert set(csv_outputs) == set(flat)
    for k, v in flat.items():
        assert csv_outputs[k] == (v if isinstance(v, str) else json.dumps(v))
    certs = [(r["key"], r["value"]) for r in rows if r["section"] == "certificate"]
    assert certs == [(c["name"], c["status"]) for c in d["certificates"]]


def test_determinism_and_out_file(tmp_path):
    argv = [sys.executable, "-m", "covollab", "h1", "--family", "A", "--rank", "1", "--q", "5",
            "--module", "gl", "--format", "json", "--no-timing"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b
    target = tmp_path / "doc.json"
    subprocess.run(argv + ["--out", str(target)], check=True)
    assert target.read_bytes() == a


def test_text_format(capsys):
    code, out, _ = run(capsys, "roots", "--family", "A", "--rank", "2")
    assert code == 0 and "num_roots = 6" in out and "[PASS] root_count" in out
