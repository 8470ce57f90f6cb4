"""Laurent polynomials on the unit circle and even Chebyshev targets.

Everything downstream manipulates finitely supported Laurent series
``sum_k c_k z^k`` (stored as a contiguous complex coefficient window) and
real, even target functions ``f(x) = sum_j fhat_j T_{2j}(x)`` given by their
Chebyshev coefficient vector.  The two meet through the substitution
``x = cos(theta)``, ``z = exp(2i theta)``, under which ``T_{2j}(x)`` becomes
``(z^j + z^-j)/2``.

Multiplication uses schoolbook convolution below a small cutoff (exact for
tiny inputs) and zero-padded FFTs rounded up to a power of two above it.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import AliasError

_SCHOOLBOOK_CUTOFF = 128


def next_pow2(n: int) -> int:
    """Smallest power of two >= n (and >= 1)."""
    return 1 << max(0, int(n) - 1).bit_length()


def _as_complex_vector(coeffs) -> np.ndarray:
    a = np.asarray(coeffs, dtype=np.complex128)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("coefficient window must be a non-empty 1-D array")
    return a


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """A Laurent polynomial sum_{k=lo}^{lo+len-1} coeffs[k-lo] * z^k.

    Instances are immutable; the coefficient array is marked read-only.
    Exactly-zero coefficients at either end may be present; `trim()` removes
    them, and equality compares trimmed windows coefficientwise.
    """

    lo: int
    coeffs: np.ndarray

    def __post_init__(self):
        a = _as_complex_vector(self.coeffs).copy()
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "lo", int(self.lo))

    # -- window accessors ---------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def width(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def coeff(self, k: int) -> complex:
        """Coefficient of z^k (zero outside the stored window)."""
        if self.lo <= k <= self.hi:
            return complex(self.coeffs[k - self.lo])
        return 0j

    # -- canonical forms ----------------------------------------------------

    def trim(self) -> "LaurentPoly":
        """Drop exactly-zero coefficients at both ends (keep one slot if all zero)."""
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return LaurentPoly(0, np.zeros(1, dtype=np.complex128))
        a, b = int(nz[0]), int(nz[-1])
        if a == 0 and b == len(self.coeffs) - 1:
            return self
        return LaurentPoly(self.lo + a, self.coeffs[a : b + 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.trim(), other.trim()
        return a.lo == b.lo and a.width == b.width and bool(np.all(a.coeffs == b.coeffs))

    def approx_eq(self, other: "LaurentPoly", tol: float = 1e-12) -> bool:
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        n = hi - lo + 1
        a = np.zeros(n, dtype=np.complex128)
        b = np.zeros(n, dtype=np.complex128)
        a[self.lo - lo : self.lo - lo + self.width] = self.coeffs
        b[other.lo - lo : other.lo - lo + other.width] = other.coeffs
        return bool(np.max(np.abs(a - b)) <= tol)

    # -- algebra --------------------------------------------------------------

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.lo, -self.coeffs)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        out[self.lo - lo : self.lo - lo + self.width] += self.coeffs
        out[other.lo - lo : other.lo - lo + other.width] += other.coeffs
        return LaurentPoly(lo, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return laurent_mul(self, other)
        return LaurentPoly(self.lo, self.coeffs * other)

    __rmul__ = __mul__

    def star(self) -> "LaurentPoly":
        """The involution p*(z) = conj(p(1/conj(z))): c_k -> conj(c_{-k})."""
        return LaurentPoly(-self.hi, np.conj(self.coeffs[::-1]))

    def eval_at(self, z) -> np.ndarray:
        """Direct evaluation sum_k c_k z^k (reference path, O(width) per point)."""
        z = np.asarray(z, dtype=np.complex128)
        out = np.zeros(z.shape, dtype=np.complex128)
        # Horner on the polynomial part, times z^lo.
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out * z**self.lo

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(0, np.zeros(1, dtype=np.complex128))

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly(0, np.ones(1, dtype=np.complex128))

    @staticmethod
    def const(value: complex) -> "LaurentPoly":
        return LaurentPoly(0, np.array([value], dtype=np.complex128))

    @staticmethod
    def monomial(k: int, value: complex = 1.0) -> "LaurentPoly":
        return LaurentPoly(k, np.array([value], dtype=np.complex128))


def laurent_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Product of two Laurent polynomials.

    Schoolbook convolution for small outputs, zero-padded power-of-two FFT
    otherwise.  Output window is [p.lo + q.lo, p.hi + q.hi].
    """
    if p.is_zero or q.is_zero:
        return LaurentPoly.zero()
    out_len = p.width + q.width - 1
    if out_len <= _SCHOOLBOOK_CUTOFF:
        out = np.convolve(p.coeffs, q.coeffs)
    else:
        nfft = next_pow2(out_len)
        fa = np.fft.fft(p.coeffs, nfft)
        fb = np.fft.fft(q.coeffs, nfft)
        out = np.fft.ifft(fa * fb)[:out_len]
    return LaurentPoly(p.lo + q.lo, out)


@dataclass(frozen=True)
class UnitGridSamples:
    """Values of a function on the uniform grid z_m = exp(2*pi*i*m/n), m=0..n-1."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).copy()
        n = int(self.n)
        if n < 1 or (n & (n - 1)) != 0:
            raise ValueError("grid size must be a power of two")
        if v.ndim != 1 or v.size != n:
            raise ValueError("values must be a 1-D array of length n")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", n)


def laurent_eval_grid(p: LaurentPoly, n: int) -> UnitGridSamples:
    """Evaluate p on the n-point unit-circle grid via one inverse FFT.

    Requires power-of-two n >= p.width so no two window slots alias.
    """
    n = int(n)
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError("grid size must be a power of two")
    if n < p.width:
        raise AliasError(f"grid of size {n} cannot hold a window of width {p.width}")
    buf = np.zeros(n, dtype=np.complex128)
    idx = np.arange(p.lo, p.lo + p.width) % n
    buf[idx] = p.coeffs
    values = np.fft.ifft(buf)
    values *= n
    return UnitGridSamples(n, values)


def grid_to_laurent(samples: UnitGridSamples, lo: int, length: int) -> LaurentPoly:
    """Recover a coefficient window [lo, lo+length-1] from grid samples.

    Exact when the sampled function is a Laurent polynomial supported inside
    a window of width <= n containing [lo, lo+length-1]; otherwise the usual
    frequency folding applies.
    """
    if length < 1:
        raise ValueError("length must be positive")
    if length > samples.n:
        raise AliasError(f"cannot extract {length} coefficients from {samples.n} samples")
    hat = np.fft.fft(samples.values) / samples.n
    idx = np.arange(lo, lo + length) % samples.n
    return LaurentPoly(lo, hat[idx])


@dataclass(frozen=True)
class ChebTarget:
    """Even real target f(x) = sum_{j=0}^{d} coeffs[j] * T_{2j}(x)."""

    coeffs: np.ndarray
    degree_half: int = dataclasses.field(default=-1)

    def __post_init__(self):
        a = np.asarray(self.coeffs, dtype=np.float64).copy()
        if a.ndim != 1 or a.size == 0:
            raise ValueError("coeffs must be a non-empty 1-D real array")
        if not np.all(np.isfinite(a)):
            raise ValueError("coeffs must be finite")
        d = self.degree_half if self.degree_half >= 0 else a.size - 1
        if d != a.size - 1:
            raise ValueError("degree_half must equal len(coeffs) - 1")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "degree_half", int(d))

    def one_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def eval(self, x) -> np.ndarray:
        """Clenshaw evaluation of f at points x in [-1, 1]."""
        full = np.zeros(2 * self.degree_half + 1, dtype=np.float64)
        full[::2] = self.coeffs
        return np.polynomial.chebyshev.chebval(np.asarray(x, dtype=np.float64), full)

    def to_dict(self) -> dict:
        return {"degree_half": self.degree_half, "coeffs": [float(v) for v in self.coeffs]}

    @staticmethod
    def from_dict(obj: dict) -> "ChebTarget":
        return ChebTarget(np.asarray(obj["coeffs"], dtype=np.float64), int(obj["degree_half"]))


def cheb_to_laurent_b(target: ChebTarget) -> LaurentPoly:
    """The boundary function b(z) = i*f(x) under x = cos(theta), z = e^{2i theta}.

    b = i * (fhat_0 + sum_{j>=1} fhat_j (z^j + z^-j)/2); the window is
    [-d, d], the coefficients are purely imaginary and palindromic.
    """
    fh = target.coeffs
    d = target.degree_half
    out = np.zeros(2 * d + 1, dtype=np.complex128)
    out[d] = 1j * fh[0]
    if d:
        half = 0.5j * fh[1:]
        out[d + 1 :] = half
        out[:d] = half[::-1]
    return LaurentPoly(-d, out)
