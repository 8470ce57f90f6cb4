"""Acceptance criteria, one test per criterion (A1-A8).

Each test prints a single summary line (visible with -s or on failure) and
asserts the stated tolerance; run `pytest tests/test_acceptance.py -v` for a
pass/fail line per criterion.  A4 additionally writes the benchmark artifacts
consumed by the figures package (artifacts/a4_bench.csv, a4_slopes.json).
"""

import json
import math
import os
import time

import numpy as np
import pytest

from qspf.cli import BenchRecord, write_bench_csv
from qspf.errors import SolverError
from qspf.fpi import FpiConfig, fpi_solve
from qspf.halfchol import build_p, dense_gram, hc_phase_factors, schur_ldl_halfsolve
from qspf.poly import ChebTarget, LaurentPoly, cheb_to_laurent_b
from qspf.qsp import (
    cheb_coeffs_direct,
    direct_residual,
    eval_fast_cheb,
    expand_reduced,
    nlft_forward,
)
from qspf.targets import HamSimSpec, hamsim_target, random_target
from qspf.weiss import WeissConfig, rhw_phase_factors, weiss

A1_DEGREES = (64, 256, 1024)
A1_TOL = 1e-12


def report(line: str) -> None:
    print(line, flush=True)


def median_wall(fn, repeats=3):
    fn()  # warmup: JIT compilation, FFT plan caches
    walls = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        walls.append(time.perf_counter() - t0)
    return float(np.median(walls)), out


@pytest.fixture(scope="module")
def a1_runs():
    """Both production solvers on the shared random instances."""
    runs = {}
    for d in A1_DEGREES:
        t = random_target(d, 0.5, seed=d)
        t0 = time.perf_counter()
        hc = hc_phase_factors(t, WeissConfig(eta=0.5, eps=min(1e-12, A1_TOL / 4)))
        hc_wall = time.perf_counter() - t0
        t0 = time.perf_counter()
        fp = fpi_solve(t, FpiConfig(tol=A1_TOL / 4))
        fp_wall = time.perf_counter() - t0
        runs[d] = {
            "target": t,
            "hc": hc,
            "ffpi": fp,
            "walls": {"hc": hc_wall, "ffpi": fp_wall},
            "residuals": {
                "hc": direct_residual(hc.phases, t),
                "ffpi": direct_residual(fp.psi, t),
            },
        }
    return runs


def test_A1_end_to_end_accuracy(a1_runs):
    """Random targets (||f||_inf = 0.5, d in {64, 256, 1024}): both solvers
    reach a direct-evaluator residual <= 1e-12 in under 10 s per solve."""
    worst_res = 0.0
    worst_wall = 0.0
    for d, run in a1_runs.items():
        for method in ("hc", "ffpi"):
            res = run["residuals"][method]
            wall = run["walls"][method]
            worst_res = max(worst_res, res)
            worst_wall = max(worst_wall, wall)
            assert res <= A1_TOL, (method, d, res)
            assert wall < 10.0, (method, d, wall)
    report(f"A1 PASS: worst residual {worst_res:.2e} (tol {A1_TOL:.0e}), "
           f"slowest solve {worst_wall:.2f}s (limit 10s)")


def test_A2_solver_agreement(a1_runs):
    """The two solvers produce the same reduced phases to 1e-10."""
    worst = 0.0
    for d, run in a1_runs.items():
        diff = float(np.max(np.abs(run["hc"].phases.reduced - run["ffpi"].psi.reduced)))
        worst = max(worst, diff)
        assert diff <= 1e-10, (d, diff)
    report(f"A2 PASS: max phase disagreement {worst:.2e} (tol 1e-10)")


def test_A3_hamiltonian_simulation_targets():
    """cos(tau x) targets, tau in {50, 100, 200}, scale 0.999, eta = 1e-3:
    the completion-based solver stays under 1e-10 residual and 60 s; the
    iteration is outside its contraction ball there, so for it either a
    warning or a controlled failure counts as passing."""
    lines = []
    for tau in (50.0, 100.0, 200.0):
        t = hamsim_target(HamSimSpec(tau=tau))
        t0 = time.perf_counter()
        hc = hc_phase_factors(t, WeissConfig(eta=1e-3))
        wall = time.perf_counter() - t0
        res = direct_residual(hc.phases, t)
        assert res <= 1e-10, (tau, res)
        assert wall < 60.0, (tau, wall)

        try:
            rep = fpi_solve(t, FpiConfig(tol=1e-12, max_iter=50))
            flagged = bool(rep.warnings)
        except SolverError as exc:
            flagged = True
            rep = exc.report
        assert flagged, f"iteration at tau={tau} neither warned nor failed"
        lines.append(f"tau={tau:.0f}: hc {res:.1e} in {wall:.1f}s "
                     f"(grid 2^{hc.weiss.grid_size.bit_length() - 1})")
    report("A3 PASS: " + "; ".join(lines))


def test_A4_scaling_and_benchmark_artifacts(artifacts_dir):
    """log-log runtime slopes over d = 2^10..2^14 (warmup + median of 3):
    the iterative solver scales quasi-linearly (slope <= 1.35), the
    displacement kernel quadratically (slope in [1.7, 2.3]); finishes in
    under 5 minutes and writes the CSV consumed by the figures package."""
    t_start = time.perf_counter()
    degrees = [2**k for k in range(10, 15)]
    records = []
    ffpi_walls = []
    schur_walls = []
    for d in degrees:
        target = random_target(d, 0.5, seed=d)
        wall, rep = median_wall(lambda: fpi_solve(target, FpiConfig(tol=2.5e-13)))
        ffpi_walls.append(wall)
        records.append(BenchRecord(
            method="ffpi", d=d, eta=0.5, wall_ms=1e3 * wall,
            residual=direct_residual(rep.psi, target), iterations=rep.iterations,
            seed=d, grid_size=0,
        ))
        wres = weiss(target, WeissConfig(eta=0.5))  # untimed preparation
        p = build_p(wres.c)
        wall, _ = median_wall(lambda: schur_ldl_halfsolve(p))
        schur_walls.append(wall)

    logd = np.log2(np.asarray(degrees, dtype=float))
    ffpi_slope = float(np.polyfit(logd, np.log2(ffpi_walls), 1)[0])
    schur_slope = float(np.polyfit(logd, np.log2(schur_walls), 1)[0])
    elapsed = time.perf_counter() - t_start

    write_bench_csv(records, os.path.join(artifacts_dir, "a4_bench.csv"), force=True)
    with open(os.path.join(artifacts_dir, "a4_slopes.json"), "w", encoding="utf-8") as fh:
        json.dump({"ffpi_slope": ffpi_slope, "schur_slope": schur_slope,
                   "degrees": degrees, "ffpi_walls_s": ffpi_walls,
                   "schur_walls_s": schur_walls}, fh, indent=2)
        fh.write("\n")

    assert ffpi_slope <= 1.35, ffpi_slope
    assert 1.7 <= schur_slope <= 2.3, schur_slope
    assert elapsed < 300.0, elapsed
    report(f"A4 PASS: ffpi slope {ffpi_slope:.3f} (<= 1.35), schur slope "
           f"{schur_slope:.3f} (in [1.7, 2.3]), {elapsed:.0f}s total")


def test_A5i_fast_evaluator_against_direct():
    """50 random full phase vectors, degrees geomspaced up to 2048: the tree
    evaluator matches the direct one to 1e-11 coefficientwise."""
    rng = np.random.default_rng(2024)
    degrees = np.unique(np.geomspace(1, 2048, 50).astype(int))
    worst = 0.0
    count = 0
    for d in degrees:
        for _ in range(max(1, 50 // degrees.size)):
            phi = rng.uniform(-np.pi / 2, np.pi / 2, 2 * int(d) + 1)
            err = float(np.max(np.abs(eval_fast_cheb(phi) - cheb_coeffs_direct(phi))))
            worst = max(worst, err)
            count += 1
            assert err <= 1e-11, (d, err)
    report(f"A5(i) PASS: {count} instances, worst coefficient error {worst:.2e} "
           "(tol 1e-11)")


def test_A5ii_schur_against_dense_ldl():
    """Streamed factorization vs dense LDL up to d = 256, error measured
    relative to the squared generator size."""
    worst = 0.0
    for d in (16, 64, 256):
        t = random_target(d, 0.5, seed=100 + d)
        p = build_p(weiss(t, WeissConfig(eta=0.5)).c)
        out = schur_ldl_halfsolve(p, keep_L=True)
        K = dense_gram(p)
        C = np.linalg.cholesky(K)
        dvec = np.diag(C)
        L, D = C / dvec[None, :], dvec**2
        scale = 1.0 + float(p @ p)  # ||G_0||_F^2
        err = max(
            float(np.max(np.abs(out.L - L))),
            float(np.max(np.abs(out.diagD - D))),
            float(np.max(np.abs(out.y - np.linalg.solve(L, p)))),
        )
        worst = max(worst, err / scale)
        assert err <= 1e-10 * scale, (d, err, scale)
    report(f"A5(ii) PASS: worst scaled deviation {worst:.2e} (tol 1e-10)")


def test_A5iii_per_k_oracle_against_half_cholesky():
    """The dense per-k solver and the streamed one agree to 1e-9 for
    d <= 128 (eta >= 0.1)."""
    worst = 0.0
    for d in (16, 64, 128):
        t = random_target(d, 0.5, seed=200 + d)
        wres = weiss(t, WeissConfig(eta=0.5))
        slow = rhw_phase_factors(wres.c)
        fast = schur_ldl_halfsolve(build_p(wres.c)).phases
        diff = float(np.max(np.abs(slow.reduced - fast.reduced)))
        worst = max(worst, diff)
        assert diff <= 1e-9, (d, diff)
    report(f"A5(iii) PASS: worst phase deviation {worst:.2e} (tol 1e-9)")


def test_A6_nlft_roundtrip_of_solutions(a1_runs):
    """Forward NLFT of the solved phases reproduces b = i*f coefficientwise
    to 1e-10 and stays unitary on the circle to 1e-10."""
    worst_b = 0.0
    worst_u = 0.0
    for d, run in a1_runs.items():
        psi = run["hc"].phases.reduced
        seq = 1j * np.tan(np.concatenate([psi[:0:-1], psi]))
        pair = nlft_forward(LaurentPoly(-d, seq))
        want_b = cheb_to_laurent_b(run["target"])
        lo = min(pair.b.lo, want_b.lo)
        hi = max(pair.b.hi, want_b.hi)
        width = hi - lo + 1
        bb = np.zeros(width, dtype=np.complex128)
        ww = np.zeros(width, dtype=np.complex128)
        bb[pair.b.lo - lo : pair.b.lo - lo + pair.b.width] = pair.b.coeffs
        ww[want_b.lo - lo : want_b.lo - lo + want_b.width] = want_b.coeffs
        berr = float(np.max(np.abs(bb - ww)))
        uerr = pair.unitarity_residual()
        worst_b = max(worst_b, berr)
        worst_u = max(worst_u, uerr)
        assert berr <= 1e-10, (d, berr)
        assert uerr <= 1e-10, (d, uerr)
    report(f"A6 PASS: worst |b - i f| {worst_b:.2e}, worst unitarity defect "
           f"{worst_u:.2e} (tol 1e-10)")


def test_A7_factorization_backward_error_and_spectrum():
    """||L D L^T - K||_F <= 100 d^3 ||G||_F^2 eps_mach for d <= 512, and
    eig(K) within [1 - 1e-8, (1/eta)(1 + 1e-8)] for eta = 0.5 targets."""
    eta = 0.5
    worst_ratio = 0.0
    for d in (32, 128, 512):
        t = random_target(d, 0.5, seed=300 + d)
        p = build_p(weiss(t, WeissConfig(eta=eta)).c)
        out = schur_ldl_halfsolve(p, keep_L=True)
        K = dense_gram(p)
        m = p.size
        gnorm2 = 1.0 + float(p @ p)
        bound = 100.0 * m**3 * gnorm2 * 2.0**-52
        err = float(np.linalg.norm(out.L * out.diagD @ out.L.T - K))
        worst_ratio = max(worst_ratio, err / bound)
        assert err <= bound, (d, err, bound)
        evals = np.linalg.eigvalsh(K)
        assert evals[0] >= 1.0 - 1e-8, (d, evals[0])
        assert evals[-1] <= (1.0 / eta) * (1.0 + 1e-8), (d, evals[-1])
    report(f"A7 PASS: backward error at {worst_ratio:.1%} of bound; spectrum "
           "within [1, 1/eta]")


def test_A8_arcsine_identity():
    """Constant targets f = s: every route returns psi_0 = arcsin(s) to
    1e-14 (the iterative routes only inside their convergence ball)."""
    worst = 0.0
    for s in (0.1, 0.5, 0.6, 0.9):
        want = math.asin(s)
        t = ChebTarget(np.array([s]))
        got = {
            "hc": hc_phase_factors(t, WeissConfig(eta=1.0 - s)).phases.reduced[0],
            "rhw": rhw_phase_factors(weiss(t, WeissConfig(eta=1.0 - s)).c).reduced[0],
        }
        if s <= 0.861:
            got["ffpi"] = fpi_solve(t, FpiConfig(tol=3e-15)).psi.reduced[0]
            got["fpi_direct"] = fpi_solve(
                t, FpiConfig(tol=3e-15, evaluator="direct")).psi.reduced[0]
        for name, val in got.items():
            err = abs(val - want)
            worst = max(worst, err)
            assert err <= 1e-14, (name, s, err)
    report(f"A8 PASS: worst |psi_0 - arcsin(s)| = {worst:.2e} (tol 1e-14)")
