"""Weiss completion: from b = i*f on the circle to the outer a and c = b/a.

Given an even target with sup-norm at most 1 - eta, the boundary function
b(z) = i*f(cos theta) (z = e^{2i theta}) satisfies |b| <= 1 - eta on the unit
circle.  The complementary outer function, analytic and non-vanishing on
|z| > 1 with a(inf) > 0, is recovered through its logarithm:

    R = (1/2) * log(1 - |b|^2)  on an N-point grid,
    G = anti-analytic projection of R   (keep k=0, double k<0, drop k>0),
    a = exp(G),

and c_k are the Fourier coefficients of b/a for k = 0..d.  N starts at the
a-priori estimate nextpow2(4*(d/eta)*log(d/(eta*eps))) clamped to max_grid
and doubles until both convergence measures sit below eps:

* residual_unitarity = max | |a|^2 + |b|^2 - 1 | on the grid,
* tail mass sum_{k>d} |chat_k|^2 over positive frequencies up to N/2
  (energy that leaked past the analytic window; it bounds the aliasing
  error folded back into the retained head).

`rhw_phase_factors` is the slow per-k reference: each reduced phase comes
from one dense Hankel system, exercised only as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GridExhausted, NormViolation, SingularSystem
from .poly import ChebTarget, LaurentPoly, cheb_to_laurent_b, laurent_eval_grid, next_pow2
from .qsp import PhaseFactors

_ETA_FLOOR_MARGIN = 1.0 - 1e-3  # grid samples may slightly exceed the dense-grid sup


@dataclass(frozen=True)
class WeissConfig:
    """eta: target lives in S_eta (sup-norm <= 1 - eta); eps: convergence
    tolerance for the doubling loop; max_grid: hard cap on N."""

    eta: float
    eps: float = 1e-12
    max_grid: int = 2**24

    def __post_init__(self):
        if not (0.0 < self.eta < 1.0):
            raise ValueError("eta must lie in (0, 1)")
        if not (0.0 < self.eps < 1.0):
            raise ValueError("eps must lie in (0, 1)")
        if self.max_grid < 2 or (self.max_grid & (self.max_grid - 1)) != 0:
            raise ValueError("max_grid must be a power of two >= 2")


@dataclass(frozen=True)
class WeissResult:
    """c: coefficients of b/a at exponents 0..d (purely imaginary up to
    roundoff); grid_size: the N that met the criteria; the two convergence
    measures as achieved."""

    c: np.ndarray
    grid_size: int
    residual_unitarity: float
    tail_mass: float


class _GridFields(NamedTuple):
    c: np.ndarray
    residual_unitarity: float
    tail_mass: float
    a_values: np.ndarray | None
    b_values: np.ndarray | None


def _weiss_on_grid(
    b: LaurentPoly, d: int, eta: float, n: int, keep_fields: bool = False
) -> _GridFields:
    """One pass of the completion on a fixed n-point grid."""
    bv = laurent_eval_grid(b, n).values
    one_minus = 1.0 - (bv.real**2 + bv.imag**2)
    floor = eta * (2.0 - eta) * _ETA_FLOOR_MARGIN
    m = float(one_minus.min())
    if m < floor:
        raise NormViolation(
            f"1 - |b|^2 reached {m:.3e} on the grid, below the eta floor {floor:.3e}; "
            "the target is not in S_eta for the configured eta"
        )
    ghat = np.fft.fft(0.5 * np.log(one_minus))
    half = n // 2
    ghat[1:half] = 0.0  # drop strictly positive frequencies; Nyquist kept as-is
    ghat[half + 1 :] *= 2.0
    av = np.exp(np.fft.ifft(ghat))
    del ghat
    residual = float(np.max(np.abs((av.real**2 + av.imag**2) - one_minus)))
    del one_minus
    cv = bv / av
    if not keep_fields:
        del bv
    chat = np.fft.fft(cv)
    chat /= n
    del cv
    c = chat[: d + 1].copy()
    tail = float(np.sum(np.abs(chat[d + 1 : half + 1]) ** 2))
    if keep_fields:
        return _GridFields(c, residual, tail, av, bv)
    return _GridFields(c, residual, tail, None, None)


def initial_grid_size(d: int, cfg: WeissConfig) -> int:
    """A-priori start nextpow2(4*(d/eta)*log(d/(eta*eps))), clamped to max_grid."""
    d_eff = max(d, 1)
    n0 = 4.0 * (d_eff / cfg.eta) * math.log(d_eff / (cfg.eta * cfg.eps))
    n = next_pow2(max(int(math.ceil(n0)), 2 * (2 * d + 1), 32))
    return min(n, cfg.max_grid)


def weiss(target: ChebTarget, cfg: WeissConfig) -> WeissResult:
    """Run the completion with grid doubling; see module docstring for criteria."""
    d = target.degree_half
    b = cheb_to_laurent_b(target)
    n = initial_grid_size(d, cfg)
    if n < b.width:
        raise GridExhausted(
            f"max_grid={cfg.max_grid} cannot even hold the coefficient window ({b.width})"
        )
    while True:
        got = _weiss_on_grid(b, d, cfg.eta, n)
        if got.residual_unitarity <= cfg.eps and got.tail_mass <= cfg.eps:
            return WeissResult(got.c, n, got.residual_unitarity, got.tail_mass)
        if n >= cfg.max_grid:
            raise GridExhausted(
                f"criteria not met at max_grid={cfg.max_grid}: "
                f"residual_unitarity={got.residual_unitarity:.3e}, "
                f"tail_mass={got.tail_mass:.3e}, eps={cfg.eps:.3e}"
            )
        n *= 2


def rhw_phase_factors(c) -> PhaseFactors:
    """Reference per-k solver: each psi_k from one dense doubled Hankel system.

    Xi_k is the (d+1-k) x (d+1-k) Hankel matrix with first column
    (c_k, ..., c_d) and last row (c_d, 0, ..., 0); solving

        [[I, -Xi_k], [-Xi_k, I]] [a_k; b_k] = [e_0; 0]

    gives psi_k = arctan(-i * b_k[0] / a_k[0]).  Dense O(d^4) overall;
    intended for d <= 512 as a cross-check oracle.
    """
    c = np.asarray(c, dtype=np.complex128)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("c must be a non-empty 1-D array")
    d = c.size - 1
    psi = np.empty(d + 1, dtype=np.float64)
    for k in range(d + 1):
        m = d + 1 - k
        h = np.zeros(2 * m - 1, dtype=np.complex128)
        h[:m] = c[k:]
        xi = h[np.add.outer(np.arange(m), np.arange(m))]
        sys = np.zeros((2 * m, 2 * m), dtype=np.complex128)
        sys[:m, :m] = np.eye(m)
        sys[m:, m:] = np.eye(m)
        sys[:m, m:] = -xi
        sys[m:, :m] = -xi
        rhs = np.zeros(2 * m, dtype=np.complex128)
        rhs[0] = 1.0
        try:
            sol = np.linalg.solve(sys, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"doubled Hankel system singular at k={k}") from exc
        ratio = -1j * sol[m] / sol[0]
        psi[k] = math.atan(ratio.real)
    return PhaseFactors(psi)
