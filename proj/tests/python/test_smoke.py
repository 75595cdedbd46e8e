import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.optimize import linprog

import enplan

ROOT = Path(__file__).resolve().parents[2]


def test_costing():
    assert abs(enplan.annuity_factor(0.02, 25) - 0.0512204) < 1e-6
    assert enplan.annuity_factor(0.0, 10) == pytest.approx(0.1)
    assert enplan.grid_unit_cost_from_line(480000, 0.175) == pytest.approx(2.7428e6, rel=1e-4)
    with pytest.raises(enplan.Error):
        enplan.annuity_factor(0.02, 0)


def test_shipped_systems_load_and_validate():
    desk = enplan.load_system(ROOT / "data" / "desk")
    assert desk.validate() == []
    assert desk.horizon_hours == 168
    assert "elec" in desk.carriers and "h2" in desk.carriers
    regional = enplan.load_system(ROOT / "data" / "toy3" / "regional")
    assert regional.nodes == ["A", "B", "F1", "F2"]


def test_save_round_trip(tmp_path):
    sys_ = enplan.random_system(3)
    sys_.save(tmp_path / "r3")
    again = enplan.load_system(tmp_path / "r3")
    assert again.nodes == sys_.nodes
    a = enplan.run(sys_)
    b = enplan.run(again)
    assert a["objective_bn_eur"] == b["objective_bn_eur"]


def test_integrated_not_dearer_than_disintegrated():
    s = enplan.random_system(5)
    integ = enplan.run(s, "integrated")
    dis = enplan.run(s, "disintegrated")
    assert integ["optimal"] and dis["optimal"]
    assert [x["label"] for x in dis["solves"]] == ["phase-a", "phase-b"]
    assert integ["objective_bn_eur"] <= dis["objective_bn_eur"] + 1e-9
    assert integ["costs"]["total"] == pytest.approx(integ["objective_bn_eur"], abs=1e-6)


def test_scenario_errors_raise():
    s = enplan.toy_regional()
    with pytest.raises(enplan.Error):
        enplan.run(s, "sideways")
    with pytest.raises(enplan.Error):
        enplan.run(s, "integrated", ["grid_cap=-1"])


def test_sweep_and_two_stage():
    s = enplan.toy_regional()
    curve = enplan.sweep(s, "grid_cap", [0.0, 1.0])
    assert [r["axis_value"] for r in curve] == [0.0, 1.0]
    assert curve[1]["objective_bn_eur"] <= curve[0]["objective_bn_eur"] + 1e-9
    r = enplan.two_stage(enplan.toy_continental(), s)
    assert r["optimal"]
    assert r["fixed"] and not r["exceeded"]


def test_mps_export_solved_externally(tmp_path):
    s = enplan.random_system(7)
    text, names = enplan.export_mps(s)
    assert text.startswith("NAME")
    assert names.splitlines()[0].startswith("kind")
    mps = tmp_path / "p.mps"
    mps.write_text(text)
    sol = tmp_path / "p.csv"
    subprocess.run([sys.executable, str(ROOT / "tools" / "mps_scipy_solve.py"), str(mps), str(sol)], check=True)
    rows = dict(line.split(",", 1) for line in sol.read_text().splitlines()[1:])
    assert rows["__status__"] == "optimal"
    builtin = enplan.run(s)
    assert float(rows["__objective__"]) * 1e-3 == pytest.approx(builtin["objective_bn_eur"], rel=1e-6)


def random_lp(rng, m, n):
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    lo = np.where(rng.random(n) < 0.3, -rng.integers(1, 5, n), 0).astype(float)
    up = lo + 1 + 9 * rng.random(n)
    mid = A @ ((lo + up) / 2)
    b = np.round(mid + 4 * rng.random(m) - 1)
    c = rng.integers(-5, 6, n) + 0.25 * rng.random(n)
    return c, A, b, list(zip(lo, up))


def test_builtin_simplex_matches_linprog():
    rng = np.random.default_rng(11)
    compared = 0
    for _ in range(60):
        m, n = rng.integers(3, 20), rng.integers(3, 30)
        c, A, b, bounds = random_lp(rng, m, n)
        ref = linprog(c, A_ub=A, b_ub=b, bounds=bounds, method="highs")
        got = enplan.solve_lp(c.tolist(), A.tolist(), b.tolist(), bounds=[(float(l), float(u)) for l, u in bounds])
        if ref.status == 2:
            assert got["status"] == "infeasible"
            continue
        assert got["status"] == "optimal"
        assert got["objective"] == pytest.approx(ref.fun, rel=1e-6, abs=1e-6)
        x = np.array(got["x"])
        assert np.all(A @ x <= b + 1e-6)
        compared += 1
    assert compared >= 20


def test_solve_lp_free_and_equality_rows():
    got = enplan.solve_lp([1.0, 1.0], A_eq=[[1.0, -1.0]], b_eq=[2.0], bounds=[(None, None), (0.0, None)])
    assert got["status"] == "optimal"
    assert got["x"] == pytest.approx([2.0, 0.0])
    assert enplan.solve_lp([-1.0], bounds=[(0.0, None)])["status"] == "unbounded"
