import json

import pytest

from randers import cli


def run(argv):
    return cli.main(argv)


def test_info_runs(capsys):
    assert run(["info"]) == 0
    out = capsys.readouterr().out
    assert "kind: paraboloid-like" in out
    assert "von Mangoldt (curvature non-increasing): true" in out
    assert "geodesic parallels: none" in out
    # 17-significant-digit output round-trips
    margin_line = [l for l in out.splitlines() if "margin" in l][0]
    val = float(margin_line.split(":")[1])
    assert abs(val - 0.0012476611221554634) < 1e-18


def test_info_custom_surface(tmp_path, capsys):
    cfg = tmp_path / "bump.json"
    cfg.write_text(json.dumps({
        "kind": "custom", "m": "r - r^5/20", "m1": "1 - r^4/4", "m2": "-r^3",
        "mu": 0.5, "r_max": 1.8}))
    assert run(["info", "--surface", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "von Mangoldt: false" in out
    assert "geodesic parallels at r = 1.414213" in out


def test_geodesic_exports(tmp_path, capsys):
    rc = run(["geodesic", "--r0", "2", "--heading", "0.8", "--length", "5",
              "--out", str(tmp_path)])
    assert rc == 0
    csv = (tmp_path / "geodesic_F.csv").read_text().splitlines()
    assert csv[0] == "s,r,theta,dr,dtheta"
    meta = json.loads((tmp_path / "geodesic_F.json").read_text())
    assert meta["metric_tag"] == "F"
    assert meta["config"]["engine_version"]
    h_meta = json.loads((tmp_path / "geodesic_h.json").read_text())
    assert h_meta["metric_tag"] == "h"
    assert h_meta["nu"] == pytest.approx(meta["nu"])


def test_geodesic_fan_with_embedding(tmp_path):
    rc = run(["geodesic", "--fan", "4", "--length", "4", "--embed",
              "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "meridian_h.csv").exists()
    for k in range(4):
        assert (tmp_path / f"twisted_{k}_F.csv").exists()
        assert (tmp_path / f"twisted_{k}_F_xyz.csv").exists()
    obj = (tmp_path / "surface.obj").read_text()
    assert obj.startswith("#") and "\nf " in obj
    xyz = (tmp_path / "twisted_0_F_xyz.csv").read_text().splitlines()
    assert xyz[0] == "s,x,y,z"


def test_distance_command(tmp_path, capsys):
    rc = run(["distance", "--from", "1", "0", "--to", "1", "1",
              "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "distance.json").read_text())
    assert doc["distance"] == pytest.approx(0.41377347, abs=1e-6)
    assert doc["iterations"] > 0
    assert doc["config"]["command"] == "distance"


def test_cutlocus_command(tmp_path, capsys):
    rc = run(["cutlocus", "--q", "1", "0", "--s-max", "3.2",
              "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "cutlocus.json").read_text())
    assert doc["rho"] == 1.0
    assert doc["c"] == pytest.approx(2.0, abs=1e-7)
    chk = json.loads((tmp_path / "cutpoint_check.json").read_text())
    assert chk["verified"] is True
    csv = (tmp_path / "cutlocus.csv").read_text().splitlines()
    assert csv[0] == "s,r,theta"


def test_exit_codes(tmp_path):
    # usage error
    assert run(["--no-such-flag", "info"]) == 1
    assert run([]) == 1
    # domain / config errors
    assert run(["info", "--surface", "/nonexistent.json"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "weird"}))
    assert run(["info", "--surface", str(bad)]) == 2
    degen = tmp_path / "degen.json"
    degen.write_text(json.dumps({"kind": "custom", "m": "r", "m1": "1",
                                 "m2": "0", "mu": 2.0, "r_max": 5.0}))
    assert run(["info", "--surface", str(degen)]) == 2


def test_verify_exit_code_on_failure(tmp_path, monkeypatch, capsys):
    from randers.verify import CheckResult

    def fake_run_all(seed=0):
        return [CheckResult("stub-pass", True, 0.0, 1.0),
                CheckResult("stub-fail", False, 2.0, 1.0)]

    monkeypatch.setattr(cli.verify, "run_all", fake_run_all)
    rc = run(["verify", "--out", str(tmp_path)])
    assert rc == 3
    out = capsys.readouterr().out
    assert "[FAIL] stub-fail" in out
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["results"][1]["passed"] is False


def test_verify_passing_stub(tmp_path, monkeypatch):
    from randers.verify import CheckResult

    monkeypatch.setattr(cli.verify, "run_all",
                        lambda seed=0: [CheckResult("stub", True, 0.0, 1.0)])
    assert run(["verify", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "verify.json").read_text())
    assert doc["config"]["seed"] == 0
