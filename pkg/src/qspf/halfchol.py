"""Half-Cholesky phase recovery via the displacement-structure Schur recursion.

With c = (c_0, ..., c_d) from the Weiss completion (purely imaginary), let
p = -i * reverse(c) (real) and B the real lower-triangular Toeplitz matrix
whose first column is p.  The Gram matrix K = I + B B^T has displacement rank
two:

    K - Z K Z^T = G_0 G_0^T,   G_0 = [e_0, p],

(Z the down-shift), so its LDL^T factorization streams in O(d^2): at step k a
right rotation Q_k in SO(2) zeroes the second entry of row k of G_k, giving
G_k = [u, v] Q_k with u_k[k] > 0; column k of L is u/u[k], D_kk = u[k]^2, and
the next generator is G_{k+1} = [Z u, v].  The solve y = L^{-1} p is folded
into the same sweep (forward substitution consumes each column as it is
produced), so the dense L is never materialized unless requested.  The
reduced phases are Psi = reverse(arctan(y)).

The hot kernel is JIT-compiled (numba, fastmath off); a plain-python twin of
the same recursion is kept for equality tests and for inspecting the
generator sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BreakdownError, NotImaginary
from .poly import ChebTarget
from .qsp import PhaseFactors
from .weiss import WeissConfig, WeissResult, weiss

_PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class GeneratorPair:
    """Displacement generator G_k = [u, v] (step k: first k entries of u and
    k+1 of v are zero, u[k] > 0 after the rotation)."""

    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class HalfCholResult:
    """y = L^{-1} p, diagD = diag of D, phases = reverse(arctan(y));
    L is retained only when requested, weiss only when produced upstream."""

    y: np.ndarray
    diagD: np.ndarray
    phases: PhaseFactors
    L: np.ndarray | None = None
    weiss: WeissResult | None = None


def build_p(c, tol: float = 1e-8) -> np.ndarray:
    """p = -i * reverse(c) as a real vector; rejects non-imaginary input."""
    c = np.asarray(c, dtype=np.complex128)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("c must be a non-empty 1-D array")
    scale = max(1.0, float(np.max(np.abs(c))))
    worst = float(np.max(np.abs(c.real)))
    if worst > tol * scale:
        raise NotImaginary(
            f"max |Re c_k| = {worst:.3e} exceeds {tol:.1e} * max(1, |c|); "
            "expected purely imaginary coefficients"
        )
    return np.ascontiguousarray((-1j * c[::-1]).real)


@njit(cache=True)
def _schur_kernel(p):  # pragma: no cover - exercised via schur_ldl_halfsolve
    m = p.shape[0]
    u = np.zeros(m)
    v = p.copy()
    u[0] = 1.0
    y = p.copy()
    diagD = np.empty(m)
    for k in range(m):
        g0 = u[k]
        g1 = v[k]
        r = math.hypot(g0, g1)
        if r < 1e-300:
            diagD[k] = 0.0  # flagged by the caller
            return y, diagD
        cc = g0 / r
        ss = g1 / r
        for i in range(k, m):
            ui = u[i]
            vi = v[i]
            u[i] = cc * ui + ss * vi
            v[i] = -ss * ui + cc * vi
        v[k] = 0.0
        ukk = u[k]
        diagD[k] = ukk * ukk
        yk = y[k]
        for i in range(k + 1, m):
            y[i] -= (u[i] / ukk) * yk
        for i in range(m - 1, k, -1):
            u[i] = u[i - 1]
        u[k] = 0.0
    return y, diagD


def _schur_steps_py(p, keep_L=False, collect_generators=False):
    """Plain-python twin of the kernel.  Returns (y, diagD, L or None,
    generator list or None).  Generators are snapshots AFTER each rotation."""
    p = np.asarray(p, dtype=np.float64)
    m = p.size
    u = np.zeros(m)
    v = p.copy()
    u[0] = 1.0
    y = p.copy()
    diagD = np.empty(m)
    L = np.zeros((m, m)) if keep_L else None
    gens = [] if collect_generators else None
    for k in range(m):
        r = math.hypot(u[k], v[k])
        if r < _PIVOT_FLOOR:
            raise BreakdownError(f"vanishing pivot at step {k}")
        cc, ss = u[k] / r, v[k] / r
        uk = cc * u[k:] + ss * v[k:]
        vk = -ss * u[k:] + cc * v[k:]
        vk[0] = 0.0
        u[k:] = uk
        v[k:] = vk
        diagD[k] = u[k] ** 2
        if gens is not None:
            gens.append(GeneratorPair(u.copy(), v.copy()))
        if L is not None:
            L[k:, k] = u[k:] / u[k]
        y[k + 1 :] -= (u[k + 1 :] / u[k]) * y[k]
        u[k + 1 :] = u[k:-1]
        u[k] = 0.0
    return y, diagD, L, gens


def schur_ldl_halfsolve(p, keep_L: bool = False) -> HalfCholResult:
    """Stream the LDL^T of K = I + B B^T and return y = L^{-1} p and phases.

    keep_L materializes the unit lower-triangular factor (tests only; O(d^2)
    memory).
    """
    p = np.ascontiguousarray(np.asarray(p, dtype=np.float64))
    if p.ndim != 1 or p.size == 0:
        raise ValueError("p must be a non-empty 1-D real array")
    if not np.all(np.isfinite(p)):
        raise BreakdownError("p contains non-finite entries")
    if keep_L:
        y, diagD, L, _ = _schur_steps_py(p, keep_L=True)
    else:
        y, diagD = _schur_kernel(p)
        L = None
    # K >= I forces every pivot >= 1; anything else is a numerical breakdown.
    if not np.all(np.isfinite(y)) or not np.all(diagD >= 1.0 - 1e-10):
        raise BreakdownError("Schur recursion lost positive definiteness")
    phases = PhaseFactors(np.arctan(y)[::-1])
    return HalfCholResult(y=y, diagD=diagD, phases=phases, L=L)


def hc_phase_factors(target: ChebTarget, cfg: WeissConfig, keep_L: bool = False) -> HalfCholResult:
    """Weiss completion followed by the half-Cholesky solve."""
    wres = weiss(target, cfg)
    p = build_p(wres.c)
    out = schur_ldl_halfsolve(p, keep_L=keep_L)
    return HalfCholResult(out.y, out.diagD, out.phases, out.L, wres)


def dense_gram(p) -> np.ndarray:
    """K = I + B B^T with B lower-triangular Toeplitz, first column p (test aid)."""
    p = np.asarray(p, dtype=np.float64)
    m = p.size
    B = np.zeros((m, m))
    for j in range(m):
        B[j:, j] = p[: m - j]
    return np.eye(m) + B @ B.T
