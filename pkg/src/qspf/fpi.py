"""Fixed-point iteration for reduced phase factors.

Psi^{(0)} = 0;  Psi^{(k+1)} = Psi^{(k)} - (1/2) (F(Psi^{(k)}) - fhat),

where F maps reduced phases to the Chebyshev coefficients of the response.
Convergence is guaranteed for ||fhat||_1 < 0.861; outside that ball the
solver proceeds anyway with a warning recorded in the report (best effort)
and stops with DivergenceError if the residual exceeds 10x its initial value
for 5 consecutive iterations, or MaxIterReached at the iteration cap.  The
step size 1/2 is part of the contract, not a tunable.

With evaluator="fast" each iteration costs O(d log^2 d) (FFPI); "direct"
uses the reference evaluator (FPI) and is O(d^2) per iteration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, MaxIterReached
from .poly import ChebTarget
from .qsp import PhaseFactors, qsp_map_F

L1_CONVERGENCE_BOUND = 0.861

_DIVERGENCE_FACTOR = 10.0
_DIVERGENCE_STREAK = 5


@dataclass(frozen=True)
class FpiConfig:
    tol: float = 1e-12
    max_iter: int = 500
    evaluator: str = "fast"

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.evaluator not in ("fast", "direct"):
            raise ValueError("evaluator must be 'fast' or 'direct'")


@dataclass(frozen=True)
class SolveReport:
    psi: PhaseFactors
    iterations: int
    residual_history: np.ndarray
    wall_time: float  # seconds
    warnings: list[str] = field(default_factory=list)


def check_convergence_domain(target: ChebTarget) -> bool:
    """True iff ||fhat||_1 < 0.861 (the proven convergence ball)."""
    return target.one_norm() < L1_CONVERGENCE_BOUND


def fpi_solve(target: ChebTarget, cfg: FpiConfig = FpiConfig()) -> SolveReport:
    """Iterate to the maximal solution; see module docstring for the contract.

    iterations counts evaluations of F; the returned psi is the iterate whose
    residual met tol.
    """
    fhat = target.coeffs
    warnings: list[str] = []
    one_norm = target.one_norm()
    if one_norm >= L1_CONVERGENCE_BOUND:
        warnings.append(
            f"||fhat||_1 = {one_norm:.6f} >= {L1_CONVERGENCE_BOUND}; convergence is "
            "not guaranteed, proceeding best-effort"
        )
    psi = np.zeros(target.degree_half + 1, dtype=np.float64)
    history: list[float] = []
    streak = 0
    t0 = time.perf_counter()
    for it in range(1, cfg.max_iter + 1):
        res_vec = qsp_map_F(psi, evaluator=cfg.evaluator) - fhat
        res = float(np.max(np.abs(res_vec)))
        history.append(res)
        if res <= cfg.tol:
            return SolveReport(
                psi=PhaseFactors(psi),
                iterations=it,
                residual_history=np.asarray(history),
                wall_time=time.perf_counter() - t0,
                warnings=warnings,
            )
        if not np.isfinite(res) or res > _DIVERGENCE_FACTOR * history[0]:
            streak += 1
            if streak >= _DIVERGENCE_STREAK:
                raise DivergenceError(
                    f"residual {res:.3e} above {_DIVERGENCE_FACTOR}x initial "
                    f"({history[0]:.3e}) for {streak} consecutive iterations",
                    report=SolveReport(
                        psi=PhaseFactors(psi),
                        iterations=it,
                        residual_history=np.asarray(history),
                        wall_time=time.perf_counter() - t0,
                        warnings=warnings,
                    ),
                )
        else:
            streak = 0
        psi = psi - 0.5 * res_vec
    raise MaxIterReached(
        f"residual {history[-1]:.3e} after {cfg.max_iter} iterations (tol {cfg.tol:.1e})",
        report=SolveReport(
            psi=PhaseFactors(psi),
            iterations=cfg.max_iter,
            residual_history=np.asarray(history),
            wall_time=time.perf_counter() - t0,
            warnings=warnings,
        ),
    )
