import json
import subprocess
import sys



def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "fusionseed.cli"] + args,
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_zoo_list():
    code, out, _ = run_cli(["zoo", "list"])
    assert code == 0
    assert len([l for l in out.splitlines() if l.strip()]) >= 12
    assert "metadata only" in out


def test_emit_check_roundtrip(tmp_path):
    inst = tmp_path / "inst.json"
    code, _, _ = run_cli(["zoo", "emit", "sn_deleted", "--index", "0",
                          "--out", str(inst)])
    assert code == 0
    payload = json.loads(inst.read_text())
    assert payload["family"]["tag"] == "sn_deleted"
    code, out, _ = run_cli(["check", str(inst)])
    assert code == 0
    rep = json.loads(out)
    assert rep["family"]["tag"] == "sn_deleted"   # metadata echoed
    assert rep["passes"] is True
    assert rep["e0_menu"] == ["B0+H*"]


def test_check_deterministic(tmp_path):
    inst = tmp_path / "inst.json"
    run_cli(["zoo", "emit", "sn_deleted", "--index", "0", "--out", str(inst)])
    _, out1, _ = run_cli(["check", str(inst), "--seed", "7"])
    _, out2, _ = run_cli(["check", str(inst), "--seed", "7"])
    r1 = json.loads(out1)
    r2 = json.loads(out2)
    r1.pop("elapsed_s")
    r2.pop("elapsed_s")
    assert r1 == r2


def test_malformed_instance_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 5, "dim": 3, "generators": [[1, 2, 3]]}')
    code, _, err = run_cli(["check", str(bad)])
    assert code == 2
    notjson = tmp_path / "nope.json"
    notjson.write_text("this is not json")
    code, _, _ = run_cli(["check", str(notjson)])
    assert code == 2


def test_heavy_gate_exit_3():
    code, _, err = run_cli(["zoo", "emit", "extraspecial_p7"])
    assert code == 3
    assert "heavy" in err.lower()


def test_sgroup_command(tmp_path):
    inst = tmp_path / "inst.json"
    run_cli(["zoo", "emit", "sn_deleted", "--index", "0", "--out", str(inst)])
    code, out, _ = run_cli(["sgroup", str(inst)])
    assert code == 0
    rep = json.loads(out)
    assert rep["build"]["ok"]
    assert rep["filtration"]["quotient_dims"] == [1, 1]
    assert all(r["law_holds"] for r in rep["filtration"]["scalar_reports"])
    assert any(w["ok"] for w in rep["theta"])
    assert rep["step2"]["ok"]


def test_regress_filtered():
    code, out, _ = run_cli(["regress", "--filter", "gl2_3"])
    assert code == 0
    assert "PASS gl2_3" in out


def test_cap_env(tmp_path, monkeypatch):
    inst = tmp_path / "inst.json"
    run_cli(["zoo", "emit", "sn_deleted", "--index", "0", "--out", str(inst)])
    proc = subprocess.run(
        [sys.executable, "-m", "fusionseed.cli", "check", str(inst)],
        capture_output=True, text=True,
        env={"FUSIONSEED_CAP": "10", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 3
