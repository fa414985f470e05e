import csv
import json

import pytest

from irepta.cli import (COMPARE_HEADER, FLEX_HEADER, IGDT_HEADER, example_config_path, main)
from irepta.io import SCHEDULE_HEADER, read_csv_header, read_plan
from irepta.scenarios import SCENARIO_HEADER


@pytest.fixture
def config(tmp_path):
    doc = json.loads(example_config_path().read_text())
    doc["planning"]["N"] = 48
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(doc))
    return p


@pytest.fixture
def run(tmp_path, config, monkeypatch):
    for k in list(__import__("os").environ):
        if k.startswith("IREPTA_"):
            monkeypatch.delenv(k)

    def _run(*args, out="out", cfg=config):
        argv = ["--config", str(cfg), "--out-dir", str(tmp_path / out), "--seed", "3"]
        return main(argv + list(args))
    return _run


@pytest.fixture
def profile(tmp_path, run):
    path = tmp_path / "profile.csv"
    assert run("gen-profile", "--output", str(path)) == 0
    return path


def rows(path):
    with open(path) as fh:
        return list(csv.DictReader(ln for ln in fh if not ln.startswith("#")))


def test_example_config_loads():
    doc = json.loads(example_config_path().read_text())
    assert set(doc) >= {"planning", "facilities", "bounds", "solver"}


def test_plan_outputs_and_determinism(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan", out="a") == 0
    assert run("--profile", str(profile), "plan", out="b") == 0
    a, b = tmp_path / "a", tmp_path / "b"
    assert read_csv_header(a / "schedules.csv") == list(SCHEDULE_HEADER)
    assert (a / "plan.json").read_bytes() == (b / "plan.json").read_bytes()
    assert (a / "schedules.csv").read_bytes() == (b / "schedules.csv").read_bytes()
    doc = json.loads((a / "plan.json").read_text())
    man = json.loads((a / "manifest.json").read_text())
    assert doc["manifest_hash"] == man["hash"]
    assert (a / "schedules.csv").read_text().startswith(f"# manifest={man['hash']}")
    assert len(rows(a / "schedules.csv")) == 48


def test_validate(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan") == 0
    plan_path = tmp_path / "out" / "plan.json"
    assert run("--profile", str(profile), "validate", "--plan", str(plan_path)) == 0
    doc = json.loads(plan_path.read_text())
    doc["vector"][0] += 50.0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("--profile", str(profile), "validate", "--plan", str(bad)) == 1


def test_validate_rejects_other_profile(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan") == 0
    plan_path = tmp_path / "out" / "plan.json"
    # synthetic profile from a different seed than the one planned on
    argv = ["--config", str(tmp_path / "cfg.json"), "--out-dir", str(tmp_path / "v"),
            "--seed", "99", "validate", "--plan", str(plan_path)]
    assert main(argv) == 4


def test_exit_codes(tmp_path, run, profile, monkeypatch, capsys):
    assert run("--profile", str(profile), "plan", "--fix-ras", "0.05") == 2
    monkeypatch.setenv("IREPTA_SOLVER__TIME_LIMIT", "1e-9")
    assert run("--profile", str(profile), "plan") == 3
    monkeypatch.delenv("IREPTA_SOLVER__TIME_LIMIT")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("plan", cfg=bad) == 4
    bad.write_text(json.dumps({"planing": {}}))
    assert run("plan", cfg=bad) == 4
    assert run("--lp-backend", "mps-shellout", "plan") == 4
    short = tmp_path / "short.csv"
    short.write_text("t,p_w_sta,p_s_sta\n0,0.5,0.1\n")
    assert run("--profile", str(short), "plan") == 4
    wrong = tmp_path / "wrong.csv"
    wrong.write_text("t,wind,p_s_sta\n0,0.5,0.1\n")
    assert run("--profile", str(wrong), "plan") == 4
    assert "wind" in capsys.readouterr().err


def test_env_defaults(tmp_path, run, monkeypatch, config):
    monkeypatch.setenv("IREPTA_OUT_DIR", str(tmp_path / "env_out"))
    monkeypatch.setenv("IREPTA_CONFIG", str(config))
    monkeypatch.setenv("IREPTA_PLANNING__N", "24")
    assert main(["plan"]) == 0
    doc = json.loads((tmp_path / "env_out" / "plan.json").read_text())
    assert doc["meta"]["N"] == 24


def test_bundled_backend(tmp_path, run, monkeypatch):
    # the dense bundled simplex is meant for small models
    monkeypatch.setenv("IREPTA_PLANNING__N", "12")
    monkeypatch.setenv("IREPTA_PLANNING__DT_AS", "12")
    assert run("--lp-backend", "bundled", "plan", out="bundled") == 0
    assert run("plan", out="highs") == 0
    a, _ = read_plan(tmp_path / "bundled" / "plan.json")
    b, _ = read_plan(tmp_path / "highs" / "plan.json")
    assert a.lcoa == pytest.approx(b.lcoa, rel=1e-7)


def test_posteriori_with_history(tmp_path, run, profile):
    hist = tmp_path / "hist.csv"
    assert run("gen-history", "--years", "12", "--output", str(hist)) == 0
    assert run("--profile", str(profile), "plan") == 0
    plan = tmp_path / "out" / "plan.json"
    assert run("--profile", str(profile), "posteriori", "--plan", str(plan), "--history", str(hist),
               "--n-scenarios", "30", "--n-states", "3", out="post") == 0
    doc = json.loads((tmp_path / "post" / "posteriori.json").read_text())
    assert doc["n_scenarios"] == 30 and doc["elcoa"] > 0
    assert read_csv_header(tmp_path / "post" / "scenarios.csv") == list(SCENARIO_HEADER)


def test_sweep_and_compare(tmp_path, run, profile):
    assert run("--profile", str(profile), "sweep-flex", "--periods", "24,horizon") == 0
    flex = rows(tmp_path / "out" / "flex.csv")
    assert [r["status"] for r in flex] == ["optimal", "optimal"]
    assert float(flex[0]["dlcoa"]) <= float(flex[1]["dlcoa"]) * (1 + 1e-6)
    assert read_csv_header(tmp_path / "out" / "flex.csv") == list(FLEX_HEADER)
    assert run("--profile", str(profile), "compare-milp", "--ras-grid", "0.9,1.0",
               "--price", "2000") == 0
    assert read_csv_header(tmp_path / "out" / "compare.csv") == list(COMPARE_HEADER)
    summary = json.loads((tmp_path / "out" / "compare_summary.json").read_text())
    assert summary["milfp"]["lcoa"] <= summary["grid_min_lcoa"] * (1 + 1e-9)


def test_igdt_zero_budget(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan") == 0
    plan = tmp_path / "out" / "plan.json"
    assert run("--profile", str(profile), "igdt", "--beta", "0", "--plan", str(plan)) == 0
    out = rows(tmp_path / "out" / "igdt_robust.csv")
    assert read_csv_header(tmp_path / "out" / "igdt_robust.csv") == list(IGDT_HEADER)
    assert out[0]["status"] == "optimal" and abs(float(out[0]["alpha"])) <= 1e-6


def test_opportunistic_extreme_budget_flags_rows(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan") == 0
    plan = tmp_path / "out" / "plan.json"
    assert run("--profile", str(profile), "igdt", "--mode", "opportunistic", "--beta", "0.9",
               "--plan", str(plan)) == 0
    out = rows(tmp_path / "out" / "igdt_opportunistic.csv")
    assert [r["status"] for r in out] == ["infeasible"]


def test_single_grid_point_matches_fixed_plan(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan", "--fix-ras", "1.0", out="fixed") == 0
    assert run("--profile", str(profile), "compare-milp", "--ras-grid", "1.0", out="cmp") == 0
    grid = rows(tmp_path / "cmp" / "compare.csv")
    fixed, _ = read_plan(tmp_path / "fixed" / "plan.json")
    assert len(grid) == 1
    assert float(grid[0]["lcoa"]) == pytest.approx(fixed.lcoa, rel=1e-9)


def test_posteriori_byte_identical(tmp_path, run, profile):
    assert run("--profile", str(profile), "plan") == 0
    plan = tmp_path / "out" / "plan.json"
    for out in ("p1", "p2"):
        assert run("--profile", str(profile), "posteriori", "--plan", str(plan),
                   "--n-scenarios", "20", out=out) == 0
    for name in ("scenarios.csv", "histogram.csv", "posteriori.json"):
        assert (tmp_path / "p1" / name).read_bytes() == (tmp_path / "p2" / name).read_bytes()


def test_full_utilization_out_of_reach_exits_infeasible(tmp_path, run, profile):
    doc = json.loads(example_config_path().read_text())
    doc["planning"]["N"] = 48
    doc["bounds"].update(N_W=1, N_S=1)
    cfg = tmp_path / "tiny.json"
    cfg.write_text(json.dumps(doc))
    assert run("--profile", str(profile), "plan", "--fix-ras", "1.0", cfg=cfg) == 2
