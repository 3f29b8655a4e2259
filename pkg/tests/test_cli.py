import json
import subprocess
import sys

import pytest

from heckex.cli import main, run
from heckex.instances import BS2_SPEC, S3_SPEC

T1 = [{"dcoset": [3, 2, 1], "value": "1"}]


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return write


def _report(argv):
    code, text = run(argv)
    return code, json.loads(text) if code != 2 else text


def test_pair_info_reports_bs_modular_function(files):
    code, rep = _report(["pair", "info", "--pair", files("bs.json", BS2_SPEC)])
    assert code == 0 and rep["schema"] == "1"
    dilation = next(r for r in rep["result"]["generators"] if r["element"] == {"t": "0", "k": 1})
    assert dilation["Delta"] == "2"


def test_malformed_spec_exits_2_with_position(files):
    path = files("bad.json", '{"type": "perm",\n  "degree": 3,,\n}')
    code, text = run(["pair", "info", "--pair", path])
    assert code == 2
    assert f"{path}:2:15:" in text


def test_semantically_bad_spec_exits_2(files):
    code, text = run(["pair", "info", "--pair", files("bad.json", {"type": "perm", "degree": 3})])
    assert code == 2 and "missing" in text


def test_missing_operand_exits_2(files):
    code, _ = run(["hecke", "mul", "--pair", files("s3.json", S3_SPEC), "--input", files("in.json", {})])
    assert code == 2


def test_hecke_mul_t1_square(files):
    code, rep = _report(["hecke", "mul", "--pair", files("s3.json", S3_SPEC),
                         "--input", files("in.json", {"f1": T1, "f2": T1})])
    assert code == 0
    values = {tuple(t["dcoset"]): t["value"][0]["re"] for t in rep["result"]}
    assert values == {(1, 2, 3): "2", (1, 3, 2): "1"}


def test_check_all_passes_on_s3(files):
    code, rep = _report(["check", "all", "--pair", files("s3.json", S3_SPEC), "--samples", "10"])
    assert code == 0 and rep["pass"]
    names = [s["suite"] for s in rep["suites"]]
    assert names == sorted(names) and "stone_von_neumann" in names


def test_reports_are_byte_identical_across_thread_counts(files, monkeypatch):
    argv = ["check", "all", "--pair", files("s3.json", S3_SPEC), "--samples", "5", "--seed", "11"]
    _, first = run(argv)
    monkeypatch.setenv("HECKEX_THREADS", "4")
    _, second = run(argv)
    assert first == second


def test_failed_property_exits_1_and_replays(files):
    pair = files("s3.json", S3_SPEC)
    code, rep = _report(["rep", "covcheck", "--pair", pair, "--input", files("c.json", {"corrupt": True})])
    assert code == 1 and not rep["pass"]
    payload = rep["properties"][0]["counterexample"]
    code, again = _report(["rep", "covcheck", "--pair", pair, "--input", files("r.json", payload)])
    assert code == 1 and again["properties"][0]["counterexample"]["samples"][0]["g"] == payload["samples"][0]["g"]
    clean = {"samples": payload["samples"]}
    assert run(["rep", "covcheck", "--pair", pair, "--input", files("ok.json", clean)])[0] == 0


def test_lln_phi_round_trip(files):
    pair = files("s3.json", S3_SPEC)
    f = [{"dcoset": [1, 3, 2], "section": {"subgroup": [], "terms": [{"arrow": [2, 1, 3], "value": "1"}]}}]
    _, forward = _report(["lln", "phi", "--pair", pair, "--input", files("f.json", {"f": f})])
    _, back = _report(["lln", "phi", "--pair", pair,
                       "--input", files("b.json", {"f": forward["result"], "inverse": True})])
    _, direct = _report(["xp", "star", "--pair", pair, "--input", files("s.json", {"f": f})])
    _, twice = _report(["xp", "star", "--pair", pair, "--input", files("t.json", {"f": direct["result"]})])
    assert back["result"] == twice["result"]


def test_eq_verbs(files):
    bundle = files("ga.json", {"preset": "group-algebra", "grading": S3_SPEC})
    code, rep = _report(["eq", "build", "--bundle", bundle])
    assert code == 0 and rep["result"]["arrows"] == 36
    code, rep = _report(["eq", "quotient", "--bundle", bundle])
    assert code == 0 and [r["arrows"] for r in rep["result"]] == [36, 18]


def test_svn_on_bs_window(files):
    code, rep = _report(["svn", "run", "--pair", files("bs.json", BS2_SPEC)])
    assert code == 0
    assert rep["suites"][0]["properties"][0]["samples"] == 36


def test_out_flag_writes_report(files, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["pair", "info", "--pair", files("s3.json", S3_SPEC), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["pair"]["order"] == 6
    assert capsys.readouterr().out == ""


def test_acceptance_verb_single_criterion(files):
    code, rep = _report(["check", "acceptance", "--pair", files("s3.json", S3_SPEC), "--criterion", "4"])
    assert code == 0 and [c["criterion"] for c in rep["criteria"]] == [4]


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "heckex.cli", "pair", "info", "--pair", files("s3.json", S3_SPEC)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "pair info"
