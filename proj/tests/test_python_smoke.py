"""Smoke tests for the python bindings (module located via PLDC_PYMOD_DIR)."""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.environ.get("PLDC_PYMOD_DIR", "."))

p = pytest.importorskip("_pldc")


@pytest.fixture(scope="module")
def instance():
    return p.generate_synthetic(3, 2, 2, 4, seed=11)


def test_solvers_agree(instance):
    obj, x = p.solve_extensive(instance, instance.b_nominal)
    ls = p.solve_lshaped(instance, instance.b_nominal)
    assert abs(obj - ls["objective"]) <= 1e-7 * (1 + abs(obj))
    sd1 = p.solve_sd(instance, instance.b_nominal, seed=42)
    sd2 = p.solve_sd(instance, instance.b_nominal, seed=42)
    assert np.array_equal(sd1["x"], sd2["x"])
    assert abs(sd1["objective"] - ls["objective"]) <= 0.05 * (1 + abs(ls["objective"]))


def test_policy_roundtrip(instance, tmp_path):
    rhs = p.sample_rhs(instance, 6, seed=3)
    ds = p.build_dataset(instance, rhs)
    pol = p.fit_policy(instance, ds)
    assert pol.num_cells >= 1
    assert pol.max_recovery_error <= 1e-6
    for b in rhs:
        x_hat, _ = p.apply_policy(pol, b)
        ls = p.solve_lshaped(instance, b)
        assert np.max(np.abs(x_hat - ls["x"])) <= 1e-6
    path = str(tmp_path / "policy.json")
    p.save_policy(pol, path)
    pol2 = p.load_policy(path)
    x1, e1 = p.apply_policy(pol, rhs[0])
    x2, e2 = p.apply_policy(pol2, rhs[0])
    assert np.array_equal(x1, x2) and e1 == e2


def test_sequential_runs(instance):
    rhs = p.sample_rhs(instance, 4, seed=9)
    init = p.build_dataset(instance, rhs)
    res = p.run_sequential(instance, init, seed=5, ci_tol=0.5, min_rounds=3,
                           max_rounds=30, pool=200)
    assert res["converged"]
    assert res["rounds"][-1]["R"] == 0.0
    assert res["rounds"][-1]["p_or_r"] == 0.0


def test_instance_io(instance, tmp_path):
    path = str(tmp_path / "inst.json")
    p.write_instance(instance, path)
    inst2 = p.load_instance(path)
    assert np.array_equal(instance.c, inst2.c)
    assert inst2.num_scenarios == 4


def test_error_mapping(instance):
    with pytest.raises(p.PldcError):
        p.solve_lshaped(instance, -instance.b_nominal)
