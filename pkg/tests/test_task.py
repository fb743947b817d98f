"""Task-layer tests: objective formulas against their published range
endpoints, feasibility gating, batch/scalar agreement, normalization."""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from cutflex import task as task_mod
from cutflex.oxley import ProcessParams, solve_cut
from cutflex.task import (
    EvalResult,
    ObjectiveVector,
    TaskSpec,
    evaluate,
    evaluate_batch,
    is_feasible,
    make_task,
    normalize,
    production_time,
    tool_wear,
)


# ---------------------------------------------------------------------------
# Objective formulas: the achieved-range endpoints are the oracle
# ---------------------------------------------------------------------------

def test_production_time_endpoints():
    assert production_time(5.0, 1000, 1.0) == 200.0
    assert production_time(0.1, 1_000_000, 1.0) == 1.0e7
    assert production_time(1.0, 1, 1.0) == 1.0


def test_production_time_preconditions():
    with pytest.raises(ValueError):
        production_time(0.0, 100)
    with pytest.raises(ValueError):
        production_time(1.0, 0)


def test_tool_wear_endpoints():
    assert tool_wear(0.1, 0.0, 0.0, 1000) == pytest.approx(110.0, rel=1e-12)
    assert tool_wear(5.0, 500.0, 500.0, 1_000_000) == pytest.approx(
        7.72e223, rel=1e-3)
    # closed form when both forces vanish
    for v, n in [(0.3, 7), (4.2, 12345)]:
        assert tool_wear(v, 0.0, 0.0, n) == pytest.approx(1.1 * v * n,
                                                          rel=1e-12)


def test_tool_wear_uses_magnitudes():
    assert tool_wear(1.0, -3.0, -4.0, 10) == tool_wear(1.0, 3.0, 4.0, 10)


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------

def _outputs(fc, ft):
    return SimpleNamespace(Fc=fc, Ft=ft)


def test_feasibility_strict_limits():
    t = make_task("steel")
    proc = SimpleNamespace(cutting_speed=5.0)
    ok, v = is_feasible(proc, _outputs(100.0, 50.0), t)
    assert ok and v == 0.0
    ok, v = is_feasible(proc, _outputs(600.0, 50.0), t)
    assert not ok and v == pytest.approx(100.0)
    # speed bound is contract-level even though the box keeps it unreachable
    ok, v = is_feasible(SimpleNamespace(cutting_speed=60.0),
                        _outputs(0.0, 0.0), t)
    assert not ok and v == pytest.approx(10.0)
    # violations add up
    ok, v = is_feasible(SimpleNamespace(cutting_speed=60.0),
                        _outputs(700.0, -510.0), t)
    assert not ok and v == pytest.approx(10.0 + 200.0 + 10.0)


# ---------------------------------------------------------------------------
# evaluate: composition through the solver
# ---------------------------------------------------------------------------

def test_evaluate_composes_golden_record():
    # hand-compose the steel golden solve through both objective formulas
    t = make_task("steel")
    proc = ProcessParams(cutting_speed=2.0, cutting_angle=0.0,
                         cutting_depth=1.0e-4)
    fc = 36.277447027023875
    ft = 16.49826852428395
    layers = 10000
    r = evaluate(t, proc)
    assert r.feasible and r.violation == 0.0
    assert r.objectives.production_time == pytest.approx(
        1.0 / 2.0 * layers, rel=1e-9)
    wear = (2.0 * math.exp(fc) + 0.2 * math.exp(ft)) * layers
    assert r.objectives.tool_wear == pytest.approx(wear, rel=1e-6)
    assert r.objectives.abs_Fc == pytest.approx(fc, rel=1e-9)
    assert r.objectives.abs_Ft == pytest.approx(ft, rel=1e-9)
    assert r.outputs.n_layers == layers


def test_evaluate_infeasible_gate():
    # the inconel golden point exceeds the cutting-force cap
    t = make_task("inconel_718")
    proc = ProcessParams(cutting_speed=4.0, cutting_angle=-0.3,
                         cutting_depth=1.0e-3)
    r = evaluate(t, proc)
    assert not r.feasible
    assert r.objectives is None
    assert r.outputs is not None
    assert r.violation == pytest.approx(abs(r.outputs.Fc) - 500.0)


def test_production_time_independent_of_material_outputs():
    t = make_task("tungsten_alloy")
    proc = ProcessParams(cutting_speed=5.0, cutting_angle=0.0,
                         cutting_depth=1.0e-3)
    r = evaluate(t, proc)
    if r.feasible:
        assert r.objectives.production_time == pytest.approx(200.0)


def test_evaluate_batch_matches_scalar():
    rng = np.random.default_rng(31)
    for name in ("steel", "inconel_718"):
        t = make_task(name)
        X = np.column_stack([rng.uniform(0.1, 5.0, 20),
                             rng.uniform(-0.5, 1.0, 20),
                             10 ** rng.uniform(-6, -3, 20)])
        objs, feas, viol = evaluate_batch(t, X)
        for i in range(20):
            r = evaluate(t, ProcessParams(*X[i]))
            assert feas[i] == r.feasible
            assert viol[i] == pytest.approx(r.violation)
            if r.feasible:
                np.testing.assert_allclose(
                    objs[i], r.objectives.as_array(), rtol=1e-12)
            else:
                assert np.isnan(objs[i]).all()


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def test_normalize_endpoints():
    lo = normalize(np.array([200.0, 110.0, 0.0, 0.0]))
    np.testing.assert_allclose(lo, 0.0, atol=1e-12)
    exact_hi = 5.5e6 * math.exp(500.0)
    hi = normalize(np.array([1.0e7, exact_hi, 500.0, 500.0]))
    np.testing.assert_allclose(hi, 1.0, atol=1e-12)
    # the printed rounded endpoint clamps to 1 as well
    hi2 = normalize(np.array([1.0e7, 7.72e223, 500.0, 500.0]))
    assert hi2[1] == 1.0


def test_normalize_force_midpoint():
    v = normalize(np.array([1234.0, 5678.0, 250.0, 250.0]))
    assert v[2] == 0.5 and v[3] == 0.5


def test_normalize_monotone_and_clamped():
    rng = np.random.default_rng(17)
    n = 200
    objs = np.column_stack([
        np.exp(rng.uniform(math.log(200), math.log(1e7), n)),
        np.exp(rng.uniform(math.log(110), 500 + math.log(5.5e6), n)),
        rng.uniform(0, 500, n),
        rng.uniform(0, 500, n)])
    v = normalize(objs)
    assert (v >= 0).all() and (v <= 1).all()
    assert np.array_equal(normalize(v * np.array([1, 1, 500, 500])
                                    + np.array([0, 0, 0, 0])),
                          normalize(v * np.array([1, 1, 500, 500])))
    # componentwise monotone: sort by a column, mapped column stays sorted
    for c in range(4):
        order = np.argsort(objs[:, c])
        assert (np.diff(v[order, c]) >= -1e-15).all()


def test_normalize_accepts_objective_vector():
    ov = ObjectiveVector(production_time=200.0, tool_wear=110.0,
                         abs_Fc=250.0, abs_Ft=0.0)
    v = normalize(ov)
    np.testing.assert_allclose(v, [0.0, 0.0, 0.5, 0.0], atol=1e-12)


def test_task_spec_validation():
    with pytest.raises(ValueError):
        TaskSpec(material=make_task("steel").material, total_depth=0.0)
    t = make_task("steel")
    assert t.name == "steel"
    assert t.lower == (0.1, -0.5, 1e-6)
    assert t.upper == (5.0, 1.0, 1e-3)
