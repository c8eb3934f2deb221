import math

import numpy as np
import pytest

import cgal_al as cg


def test_generated_instance_shapes():
    p = cg.gen_qcqp(5, 2, 1)
    assert p.dim == 25 and p.num_constraints == 2
    x = p.barycenter()
    assert np.allclose(x, 1.0 / 5)
    assert np.all(p.constraints(x) < 0)
    assert p.set_name == "birkhoff"


def test_generation_is_deterministic():
    a, b = cg.gen_qcqp(6, 2, 3), cg.gen_qcqp(6, 2, 3)
    x = a.barycenter()
    assert a.objective(x) == b.objective(x)
    assert cg.gen_qcqp(6, 2, 4).objective(x) != a.objective(x)


def test_grad_psi_matches_finite_differences():
    p = cg.gen_ball_qp(2, 1)
    x, z, lam = np.array([0.3, -0.2]), np.array([1.5]), 3.0
    g = p.grad_psi(x, z, lam)
    h = 1e-6
    fd = [(p.psi(x + h * e, z, lam) - p.psi(x - h * e, z, lam)) / (2 * h) for e in np.eye(2)]
    assert np.allclose(g, fd, rtol=1e-6, atol=1e-9)


def test_assignment_matches_enumeration():
    from itertools import permutations

    rng = np.random.default_rng(0)
    c = rng.normal(size=(5, 5))
    perm, cost = cg.solve_assignment(c)
    best = min(sum(c[i, q[i]] for i in range(5)) for q in permutations(range(5)))
    assert math.isclose(cost, best, rel_tol=0, abs_tol=1e-12)
    assert sorted(perm) == list(range(5))


def test_run_and_metrics_on_ball():
    cfg = cg.preset("ball-ss")
    cfg.budget = 2000
    cfg.stride = 100
    out = cg.run(cfg)
    assert list(out["k"][:3]) == [0, 100, 200] and out["k"][-1] == 2000
    _, l_star = cg.oracle_optimum_2d(cg.gen_ball_qp(2, 1))
    assert abs(l_star - 1.1458980337503146) < 1e-9
    k, val, feas = cg.metrics(out, l_star, out["g0_inf"])
    assert val[-1] < val[1]
    assert np.all(feas >= 1e-8)
    assert np.all(out["z"] >= 0)


def test_runs_are_reproducible():
    cfg = cg.preset("ball-ol")
    cfg.budget = 500
    a, b = cg.run(cfg), cg.run(cfg)
    for key in ("objective", "gap", "al_value", "z_norm1"):
        assert np.array_equal(a[key], b[key])


def test_fit_rate_recovers_slope():
    k = np.arange(10, 10001, 10)
    cert = cg.fit_rate(k, 3.0 * k**-0.7, 100, 10000, -0.7)
    assert abs(cert["slope"] + 0.7) < 1e-9
    assert cert["bounded"]


def test_simulate_recursion():
    r = cg.simulate("prop21", 100000, t1=0.5, t2=1.0)
    assert r["bounded"]
    assert abs(r["slope"] + 0.5) < 0.05
    with pytest.raises(ValueError):
        cg.simulate("prop23")


def test_config_errors_are_value_errors():
    cfg = cg.Config()
    with pytest.raises(ValueError):
        cfg.set("tau", "1.5")
        cfg.validate()
    with pytest.raises(cg.ConfigError):
        cg.preset("no-such-preset")
    assert "ball-ss" in cg.preset_names()
