"""Fixed-point solver contract: convergence, warnings, failure modes."""

import math
import time

import numpy as np
import pytest

from qspf.errors import DivergenceError, MaxIterReached, SolverError
from qspf.fpi import (
    L1_CONVERGENCE_BOUND,
    FpiConfig,
    check_convergence_domain,
    fpi_solve,
)
from qspf.poly import ChebTarget
from qspf.qsp import direct_residual
from qspf.targets import HamSimSpec, hamsim_target, random_target


def test_config_validation():
    with pytest.raises(ValueError):
        FpiConfig(tol=0.0)
    with pytest.raises(ValueError):
        FpiConfig(max_iter=0)
    with pytest.raises(ValueError):
        FpiConfig(evaluator="sideways")


def test_convergence_domain_predicate():
    assert check_convergence_domain(ChebTarget(np.array([0.4, 0.3])))
    assert not check_convergence_domain(ChebTarget(np.array([0.5, 0.4])))
    edge = ChebTarget(np.array([L1_CONVERGENCE_BOUND]))
    assert not check_convergence_domain(edge)  # strict inequality


def test_zero_target_converges_immediately():
    rep = fpi_solve(ChebTarget(np.zeros(5)), FpiConfig(tol=1e-12))
    assert rep.iterations == 1
    assert np.array_equal(rep.psi.reduced, np.zeros(5))
    assert rep.residual_history.shape == (1,)


def test_scalar_closed_form():
    rep = fpi_solve(ChebTarget(np.array([0.5])), FpiConfig(tol=3e-15))
    assert abs(rep.psi.reduced[0] - math.asin(0.5)) < 1e-14
    assert rep.wall_time >= 0.0
    assert rep.warnings == []


def test_residuals_decrease_and_converge_fast():
    t = random_target(24, 0.25, seed=51)  # comfortably inside the ball
    assert check_convergence_domain(t) or t.one_norm() < 0.861
    rep = fpi_solve(t, FpiConfig(tol=1e-12))
    assert rep.iterations <= 60
    h = rep.residual_history
    assert h.size == rep.iterations
    assert np.all(np.diff(h) < 0)  # linear contraction, no plateaus at this scale
    assert h[-1] <= 1e-12


def test_certificate_against_direct_evaluator():
    t = random_target(80, 0.5, seed=52)
    cfg = FpiConfig(tol=1e-12)
    rep = fpi_solve(t, cfg)
    assert direct_residual(rep.psi, t) <= 2 * cfg.tol


def test_evaluator_choice_does_not_change_answer():
    t = random_target(20, 0.5, seed=53)
    fast = fpi_solve(t, FpiConfig(tol=1e-12, evaluator="fast"))
    direct = fpi_solve(t, FpiConfig(tol=1e-12, evaluator="direct"))
    assert fast.iterations == direct.iterations
    assert np.max(np.abs(fast.psi.reduced - direct.psi.reduced)) < 1e-10


def test_warning_outside_convergence_ball():
    t = ChebTarget(np.array([0.5, 0.4]))  # one-norm 0.9 >= 0.861
    try:
        rep = fpi_solve(t, FpiConfig(tol=1e-12, max_iter=200))
    except SolverError as exc:
        rep = exc.report
    assert rep is not None
    assert any("not guaranteed" in w for w in rep.warnings)


def test_divergence_or_cap_on_large_hamsim():
    t = hamsim_target(HamSimSpec(tau=20.0))
    with pytest.raises((DivergenceError, MaxIterReached)) as exc:
        fpi_solve(t, FpiConfig(tol=1e-12, max_iter=60))
    rep = exc.value.report
    assert rep is not None
    assert rep.iterations >= 1
    assert rep.residual_history.size == rep.iterations
    assert any("not guaranteed" in w for w in rep.warnings)


def test_max_iter_reached_carries_partial_state():
    t = random_target(16, 0.5, seed=54)
    with pytest.raises(MaxIterReached) as exc:
        fpi_solve(t, FpiConfig(tol=1e-16, max_iter=3))
    rep = exc.value.report
    assert rep.iterations == 3
    assert rep.residual_history.size == 3
    assert rep.psi.reduced.size == 17


def test_cost_scales_quasilinearly():
    # one decade of degree, warmed caches; quadratic growth would give a
    # log-ratio slope of ~2, the tree evaluator sits well under 1.7
    for d in (512, 1024, 4096):
        t = random_target(d, 0.5, seed=55)
        fpi_solve(t, FpiConfig(tol=1e-10, max_iter=100))  # warm
    times = {}
    for d in (1024, 4096):
        t = random_target(d, 0.5, seed=55)
        t0 = time.perf_counter()
        rep = fpi_solve(t, FpiConfig(tol=1e-10, max_iter=100))
        times[d] = (time.perf_counter() - t0) / rep.iterations
    slope = math.log(times[4096] / times[1024]) / math.log(4096 / 1024)
    assert slope < 1.7, times
