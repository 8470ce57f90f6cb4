"""Target generators: random even polynomials and Hamiltonian-simulation cosines.

random_target draws i.i.d. standard-normal Chebyshev coefficients from a
counter-based, platform-independent stream (Philox) and rescales so the
measured sup-norm equals the request.  The sup-norm estimator samples a
uniform theta grid (>= 32 points per highest mode), refines the strongest
well-separated candidate lobes with two zoom passes, and finishes with a
parabolic vertex fit; the result is accurate to ~1e-14 relative.

hamsim_target builds the Jacobi-Anger expansion of scale*cos(tau*x),

    cos(tau x) = J_0(tau) + 2 * sum_{j>=1} (-1)^j J_{2j}(tau) T_{2j}(x),

truncated at the smallest even n >= 1.4*|tau| + ln(1/eps0), d = n/2.  Bessel
values come from Miller's backward recurrence normalized with
J_0 + 2*sum J_{2k} = 1 (power series below |tau| < 2); no external
special-function dependency.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .poly import ChebTarget, next_pow2

_SERIES_CUTOVER = 2.0


@dataclass(frozen=True)
class HamSimSpec:
    tau: float
    scale: float = 0.999
    eps0: float = 1e-15

    def __post_init__(self):
        if not np.isfinite(self.tau):
            raise DomainError("tau must be finite")
        if not (0.0 < self.scale < 1.0):
            raise DomainError("scale must lie in (0, 1)")
        if not (0.0 < self.eps0 < 1.0):
            raise DomainError("eps0 must lie in (0, 1)")


# ---------------------------------------------------------------------------
# sup-norm estimation
# ---------------------------------------------------------------------------


def _eval_theta(coeffs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    # f(cos theta) = sum_j fhat_j cos(2 j theta), direct (small point sets only)
    j2 = 2.0 * np.arange(coeffs.size)
    return np.cos(np.outer(thetas, j2)) @ coeffs


def sup_norm(target: ChebTarget) -> float:
    """Refined sup-norm of f over [-1, 1]."""
    fh = target.coeffs
    d = target.degree_half
    if d == 0:
        return float(abs(fh[0]))
    n = next_pow2(max(64 * d, 256))  # > 4d, so frequencies +-2j never alias
    buf = np.zeros(n)
    buf[0] = fh[0]
    j = np.arange(1, d + 1)
    buf[2 * j] = 0.5 * fh[1:]
    buf[n - 2 * j] = 0.5 * fh[1:]
    vals = (np.fft.ifft(buf).real * n)[: n // 2 + 1]  # theta in [0, pi]
    mags = np.abs(vals)
    # strongest well-separated candidate lobes (argmax alone can pick the
    # wrong lobe when two peaks are within the coarse sampling error)
    order = np.argsort(mags)[::-1]
    picks: list[int] = []
    for i in order:
        if len(picks) >= 32:
            break
        if all(abs(int(i) - j) > 8 for j in picks):
            picks.append(int(i))
    h0 = 2.0 * np.pi / n
    best = 0.0
    for i in picks:
        theta = h0 * i
        sign = 1.0 if vals[i] >= 0 else -1.0
        h = h0
        for _ in range(2):
            ts = np.linspace(theta - h, theta + h, 129)
            vv = sign * _eval_theta(fh, ts)
            k = int(np.argmax(vv))
            theta = float(ts[k])
            h = float(ts[1] - ts[0])
        f0, f1, f2 = (sign * _eval_theta(fh, np.array([theta - h, theta, theta + h]))).tolist()
        denom = f0 - 2.0 * f1 + f2
        peak = f1
        if denom < 0.0:
            delta = 0.5 * h * (f0 - f2) / denom
            if abs(delta) <= h:
                cand = float(sign * _eval_theta(fh, np.array([theta + delta]))[0])
                peak = max(peak, cand)
        best = max(best, peak)
    return float(best)


def random_target(d: int, inf_norm: float, seed: int) -> ChebTarget:
    """i.i.d. N(0,1) coefficients (Philox stream `seed`), rescaled so the
    measured sup-norm equals inf_norm."""
    if d < 0:
        raise DomainError("d must be non-negative")
    if not (0.0 < inf_norm < 1.0):
        raise DomainError("inf_norm must lie in (0, 1)")
    gen = np.random.Generator(np.random.Philox(seed))
    raw = gen.standard_normal(d + 1)
    m = sup_norm(ChebTarget(raw))
    if m == 0.0:
        raise DomainError("degenerate draw with zero sup-norm")
    return ChebTarget(raw * (inf_norm / m))


# ---------------------------------------------------------------------------
# Bessel J_k and the Jacobi-Anger target
# ---------------------------------------------------------------------------


def _bessel_series_one(k: int, x: float) -> float:
    # J_k(x) = sum_i (-1)^i (x/2)^{k+2i} / (i! (k+i)!), small |x| only
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    half = 0.5 * x
    term = math.exp(k * math.log(half) - math.lgamma(k + 1))
    total = term
    for i in range(1, 64):
        term *= -(half * half) / (i * (k + i))
        total += term
        if abs(term) <= 1e-22 * abs(total) + 1e-300:
            break
    return total


def bessel_j_sequence(nmax: int, x: float) -> np.ndarray:
    """J_0(x), ..., J_nmax(x) for x >= 0."""
    if x < 0:
        raise DomainError("x must be non-negative")
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if x < _SERIES_CUTOVER:
        return np.array([_bessel_series_one(k, x) for k in range(nmax + 1)])
    # Miller's backward recurrence with normalization J_0 + 2 sum J_{2k} = 1
    start = max(nmax, int(math.ceil(x)))
    start += max(25, int(1.8 * math.sqrt(start)) + 1)
    vals = np.zeros(start + 2)
    vals[start + 1] = 0.0
    vals[start] = 1e-30
    for k in range(start, 0, -1):
        vals[k - 1] = (2.0 * k / x) * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals[k - 1 :] *= 1e-250
    norm = vals[0] + 2.0 * np.sum(vals[2::2])
    return vals[: nmax + 1] / norm


def hamsim_target(spec: HamSimSpec) -> ChebTarget:
    """Chebyshev coefficients of scale*cos(tau*x), truncation set by HamSimSpec."""
    tau = abs(spec.tau)
    n = math.ceil(1.4 * tau + math.log(1.0 / spec.eps0))
    if n % 2:
        n += 1
    d = n // 2
    J = bessel_j_sequence(2 * d, tau)
    fh = np.empty(d + 1)
    fh[0] = spec.scale * J[0]
    j = np.arange(1, d + 1)
    fh[1:] = spec.scale * 2.0 * np.where(j % 2 == 0, 1.0, -1.0) * J[2 * j]
    return ChebTarget(fh)


# ---------------------------------------------------------------------------
# target files
# ---------------------------------------------------------------------------


def save_target(target: ChebTarget, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(target.to_dict(), fh)
        fh.write("\n")


def load_target(path) -> ChebTarget:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict) or "coeffs" not in obj or "degree_half" not in obj:
        raise DomainError(f"{path}: not a target file (need degree_half + coeffs)")
    return ChebTarget.from_dict(obj)
