"""QSP unitary evaluation and the forward map from phases to target coefficients.

The protocol is

    U(x, Phi) = e^{i phi_0 Z} W(x) e^{i phi_1 Z} W(x) ... W(x) e^{i phi_n Z},
    W(x) = [[x, i*sqrt(1-x^2)], [i*sqrt(1-x^2), x]],

with n even; the response is g(x, Phi) = Im U_00(x, Phi), an even real
polynomial of degree n = 2d expressed as sum_j q_j T_{2j}(x).

Symmetric phase vectors (phi_j = phi_{n-j}) are stored reduced:
Psi = (psi_0, ..., psi_d) with psi_0 the central phase, expanding to
Phi = (psi_d, ..., psi_1, psi_0, psi_1, ..., psi_d).

Two evaluators are provided:

* `eval_direct` folds the 2x2 matrix product pointwise (O(n) per point) and
  is the reference everything else is certified against;
* `eval_fast_cheb` writes each factor e^{i phi_j Z} W(x) as a degree-1
  Laurent matrix in t = e^{i theta} (x = cos theta) and multiplies them with
  a balanced, batched product tree, reading the q_j straight off the
  coefficients of the top-left entry in O(d log^2 d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedParity
from .poly import ChebTarget, LaurentPoly, laurent_eval_grid, next_pow2

_X_SLACK = 1e-12  # cos-generated grids may land one ulp outside [-1, 1]


@dataclass(frozen=True)
class PhaseFactors:
    """Reduced symmetric phase vector Psi = (psi_0, ..., psi_d)."""

    reduced: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.reduced, dtype=np.float64).copy()
        if a.ndim != 1 or a.size == 0:
            raise ValueError("reduced phase vector must be non-empty and 1-D")
        if not np.all(np.isfinite(a)):
            raise ValueError("phases must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "reduced", a)

    @property
    def degree_half(self) -> int:
        return self.reduced.size - 1

    def full(self) -> np.ndarray:
        return expand_reduced(self.reduced)


def expand_reduced(psi) -> np.ndarray:
    """Reduced (psi_0..psi_d) -> full symmetric (psi_d..psi_1, psi_0, psi_1..psi_d)."""
    if isinstance(psi, PhaseFactors):
        psi = psi.reduced
    psi = np.asarray(psi, dtype=np.float64)
    if psi.ndim != 1 or psi.size == 0:
        raise ValueError("reduced phase vector must be non-empty and 1-D")
    return np.concatenate([psi[:0:-1], psi])


def _check_full(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    if phi.ndim != 1 or phi.size == 0:
        raise ValueError("phase vector must be non-empty and 1-D")
    if phi.size % 2 == 0:
        raise UnsupportedParity(
            f"full phase vector of length {phi.size} implies odd degree {phi.size - 1}; "
            "only even target polynomials are supported"
        )
    return phi


def eval_direct(phi, xs):
    """g(x, Phi) = Im U_00(x, Phi) by folding the 2x2 product, vectorized over x."""
    phi = _check_full(phi)
    xs_in = np.asarray(xs, dtype=np.float64)
    scalar = xs_in.ndim == 0
    x = np.atleast_1d(xs_in)
    if x.size and float(np.max(np.abs(x))) > 1.0 + _X_SLACK:
        raise DomainError("evaluation points must satisfy |x| <= 1")
    x = np.clip(x, -1.0, 1.0)
    s = 1j * np.sqrt(1.0 - x * x)
    n = phi.size - 1
    u00 = np.full(x.shape, np.exp(1j * phi[0]), dtype=np.complex128)
    u01 = np.zeros(x.shape, dtype=np.complex128)
    for j in range(1, n + 1):
        ep = complex(np.exp(1j * phi[j]))
        t0 = x * u00 + s * u01
        t1 = s * u00 + x * u01
        u00 = ep * t0
        u01 = np.conj(ep) * t1
    g = u00.imag
    return float(g[0]) if scalar else g


def cheb_coeffs_direct(phi) -> np.ndarray:
    """Chebyshev coefficients q of g(., Phi) from direct evaluation on 4d+1 points.

    Samples x_m = cos(2*pi*m/(4d+1)); since g has only even cosine modes up to
    2d and the values are even in theta, one DFT of the mirrored samples gives
    q exactly (up to roundoff).
    """
    phi = _check_full(phi)
    d = (phi.size - 1) // 2
    N = 4 * d + 1
    theta = 2.0 * np.pi * np.arange(2 * d + 1) / N
    g = np.atleast_1d(eval_direct(phi, np.cos(theta)))
    v = np.empty(N, dtype=np.float64)
    v[: 2 * d + 1] = g
    if d:
        v[2 * d + 1 :] = g[1:][::-1]
    V = np.fft.fft(v)
    q = np.empty(d + 1, dtype=np.float64)
    q[0] = V[0].real / N
    if d:
        q[1:] = 2.0 * V[2 : 2 * d + 1 : 2].real / N
    return q


def _product_tree_top_row(phi) -> np.ndarray:
    """Coefficients (exponents -m..m in t) of U_00 for the n = len(phi)-1 factors.

    Leaves are the V_j = e^{i phi_j Z} W in protocol order; the schedule is
    padded with identity factors to the next power of two (the padding changes
    the tree shape only, never the product).  Each level does four batched
    spectral multiplies; the conjugated right-factor spectra come from the
    index reversal DFT(conj f)[k] = conj(DFT f)[-k mod nfft].
    """
    n = phi.size - 1
    m = next_pow2(n)
    e = np.exp(1j * phi[:n])
    P = np.zeros((m, 3), dtype=np.complex128)
    Q = np.zeros((m, 3), dtype=np.complex128)
    P[:n, 0] = 0.5 * e
    P[:n, 2] = 0.5 * e
    Q[:n, 0] = -0.5 * e
    Q[:n, 2] = 0.5 * e
    P[n:, 1] = 1.0
    while P.shape[0] > 1:
        L = P.shape[1]
        out_len = 2 * L - 1
        nfft = next_pow2(out_len)
        FP = np.fft.fft(P, nfft, axis=1)
        FQ = np.fft.fft(Q, nfft, axis=1)
        FP1, FP2 = FP[0::2], FP[1::2]
        FQ1, FQ2 = FQ[0::2], FQ[1::2]
        rev = (-np.arange(nfft)) % nfft
        FP2c = np.conj(FP2[:, rev])
        FQ2c = np.conj(FQ2[:, rev])
        P = np.fft.ifft(FP1 * FP2 + FQ1 * FQ2c, axis=1)[:, :out_len]
        Q = np.fft.ifft(FP1 * FQ2 + FQ1 * FP2c, axis=1)[:, :out_len]
    # window [-m, m]; multiply by the trailing e^{i phi_n Z} afterwards
    return P[0]


def eval_fast_cheb(phi) -> np.ndarray:
    """Chebyshev coefficients q of g(., Phi) via the balanced product tree."""
    phi = _check_full(phi)
    n = phi.size - 1
    d = n // 2
    if n == 0:
        return np.array([math.sin(phi[0])])
    top = _product_tree_top_row(phi) * np.exp(1j * phi[n])
    c = (top.size - 1) // 2  # index of exponent 0
    q = np.empty(d + 1, dtype=np.float64)
    q[0] = top[c].imag
    if d:
        # open-ended slices: a stop of c-2d-1 would go negative and wrap
        up = top[c + 2 :: 2][:d]
        dn = top[c - 2 :: -2][:d]
        q[1:] = (up + dn).imag
    return q


def qsp_map_F(psi, evaluator: str = "fast") -> np.ndarray:
    """The forward map F(Psi) = q: reduced phases -> Chebyshev coefficients.

    evaluator="fast" uses the product tree; "direct" uses pointwise
    evaluation plus the grid transform (reference path).
    """
    phi = expand_reduced(psi)
    if evaluator == "fast":
        return eval_fast_cheb(phi)
    if evaluator == "direct":
        return cheb_coeffs_direct(phi)
    raise ValueError(f"unknown evaluator {evaluator!r}")


def direct_residual(psi, target: ChebTarget) -> float:
    """max-abs Chebyshev-coefficient residual of F(Psi) against the target,
    always measured with the direct evaluator."""
    if isinstance(psi, PhaseFactors):
        psi = psi.reduced
    psi = np.asarray(psi, dtype=np.float64)
    if psi.size != target.degree_half + 1:
        raise ValueError(
            f"phase vector implies d={psi.size - 1} but target has d={target.degree_half}"
        )
    q = cheb_coeffs_direct(expand_reduced(psi))
    return float(np.max(np.abs(q - target.coeffs)))


# ---------------------------------------------------------------------------
# Nonlinear Fourier transform, forward direction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SU2LaurentPair:
    """Pair (a, b) of Laurent polynomials with a a* + b b* = 1 on the circle,
    representing [[a, b], [-b*, a*]] (star: c_k -> conj(c_{-k}))."""

    a: LaurentPoly
    b: LaurentPoly

    def unitarity_residual(self, n: int | None = None) -> float:
        """max | |a|^2 + |b|^2 - 1 | on an n-point circle grid."""
        if n is None:
            n = next_pow2(4 * max(self.a.width, self.b.width, 1))
        av = laurent_eval_grid(self.a, n).values
        bv = laurent_eval_grid(self.b, n).values
        return float(np.max(np.abs(np.abs(av) ** 2 + np.abs(bv) ** 2 - 1.0)))


def _su2_combine(x: SU2LaurentPair, y: SU2LaurentPair) -> SU2LaurentPair:
    # [[a1,b1],[-b1*,a1*]] @ [[a2,b2],[-b2*,a2*]], top row only (bottom is determined)
    a = x.a * y.a - x.b * y.b.star()
    b = x.a * y.b + x.b * y.a.star()
    return SU2LaurentPair(a, b)


def nlft_forward(F: LaurentPoly) -> SU2LaurentPair:
    """Forward NLFT of a compactly supported sequence F_n (n = F.lo .. F.hi).

    Multiplies, in ascending n, the factors

        (1 + |F_n|^2)^{-1/2} [[1, F_n z^n], [-conj(F_n) z^{-n}, 1]]

    starting from the identity, using a balanced tree of Laurent products.
    """
    leaves = []
    for off, fn in enumerate(F.coeffs):
        k = F.lo + off
        fn = complex(fn)
        scale = 1.0 / math.sqrt(1.0 + abs(fn) ** 2)
        leaves.append(
            SU2LaurentPair(
                LaurentPoly.const(scale),
                LaurentPoly.monomial(k, fn * scale),
            )
        )
    if not leaves:
        return SU2LaurentPair(LaurentPoly.one(), LaurentPoly.zero())
    while len(leaves) > 1:
        nxt = [
            _su2_combine(leaves[i], leaves[i + 1]) for i in range(0, len(leaves) - 1, 2)
        ]
        if len(leaves) % 2:
            nxt.append(leaves[-1])
        leaves = nxt
    return leaves[0]
