"""Exact Fourier analysis on F_2^m with integer arithmetic.

The transform is the unnormalized Walsh-Hadamard transform
T(g) = sum_x v[x] * (-1)^(g.x); applied twice it gives 2^m times the
identity.  Indicator transforms always fit int64; the generic entry point
switches to arbitrary-precision Python ints whenever the exact a-priori
bound (sum of absolute values, which dominates every butterfly partial)
does not certify 64-bit safety.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .core import DenseSet, Point, PointSet, iterated_sumset
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    InvariantViolationError,
)
from .intmath import ceil_div, exact_sum_u64

__all__ = [
    "Spectrum",
    "fwht",
    "fourier_indicator",
    "max_nontrivial",
    "large_spectrum",
    "large_spectrum_pow32",
    "conv4_support",
]

_I64_SAFE = 1 << 62


def _abs_sum_exact(v: np.ndarray) -> int:
    if v.dtype == object:
        return int(sum(abs(int(x)) for x in v))
    return exact_sum_u64(np.abs(v).astype(np.uint64))


def fwht(values) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of an integer vector.

    Exact for arbitrary integer inputs: runs in int64 when the partial-sum
    bound certifies no overflow, otherwise on Python ints.
    """
    v = np.asarray(values)
    if v.ndim != 1 or v.shape[0] == 0 or v.shape[0] & (v.shape[0] - 1):
        raise DimensionMismatchError("transform length must be a power of two")
    if v.dtype == object:
        ints = v
    elif np.issubdtype(v.dtype, np.integer):
        ints = v.astype(np.int64)
    else:
        raise DimensionMismatchError("transform input must be integer-valued")
    # every butterfly partial is a signed sum of distinct inputs
    if _abs_sum_exact(ints) < _I64_SAFE and ints.dtype != object:
        return kernels.fwht_i64_inplace(ints.copy())
    obj = np.array([int(x) for x in ints], dtype=object)
    return kernels.fwht_obj_inplace(obj)


@dataclass(frozen=True)
class Spectrum:
    """All 2^m transform coefficients of a set indicator."""

    dim: int
    set_size: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.coeffs
        if c.shape != (1 << self.dim,):
            raise DimensionMismatchError("coefficient count must be 2^dim")
        if int(c[0]) != self.set_size:
            raise InvariantViolationError("T(0) must equal |A|")
        if c.size and int(np.abs(c).max()) > self.set_size:
            raise InvariantViolationError("|T(g)| must be at most |A|")
        sq = (c * c).astype(np.uint64)
        if exact_sum_u64(sq) != (self.set_size << self.dim):
            raise InvariantViolationError("sum of T^2 must equal 2^m |A|")
        c.flags.writeable = False


def fourier_indicator(a: DenseSet) -> Spectrum:
    """Exact spectrum of the indicator of A."""
    coeffs = kernels.fwht_i64_inplace(a.bits.astype(np.int64))
    return Spectrum(a.dim, a.size, coeffs)


def max_nontrivial(s: Spectrum) -> tuple[Point, int]:
    """(gamma, T(gamma)) with |T| maximal over gamma != 0; smallest gamma wins ties."""
    if s.dim < 1:
        raise DimensionMismatchError("no nontrivial characters in dimension 0")
    mags = np.abs(s.coeffs[1:])
    g = 1 + int(np.argmax(mags))
    return Point(s.dim, g), int(s.coeffs[g])


def large_spectrum(a: DenseSet, threshold: Fraction) -> PointSet:
    """All characters with |T(gamma)| / 2^m >= threshold (exact comparison)."""
    threshold = Fraction(threshold)
    if not 0 < threshold <= 1:
        raise DimensionMismatchError("threshold must satisfy 0 < t <= 1")
    if a.size == 0:
        raise EmptySetError("large_spectrum needs a nonempty set")
    if a.dim < 1:
        raise DimensionMismatchError("large_spectrum needs dim >= 1")
    s = fourier_indicator(a)
    p, q = threshold.numerator, threshold.denominator
    # integer coefficients: |T| >= p*2^m/q  <=>  |T| >= ceil(p*2^m/q)
    bound = ceil_div(p << a.dim, q)
    idx = np.nonzero(np.abs(s.coeffs) >= bound)[0]
    gamma = PointSet.from_iterable(a.dim, (int(i) for i in idx))
    # Parseval bound |G| <= alpha * threshold^-2, cross-multiplied
    if gamma.size * p * p << a.dim > a.size * q * q:
        raise InvariantViolationError("large spectrum exceeds the Parseval bound")
    return gamma


def large_spectrum_pow32(a: DenseSet) -> PointSet:
    """Characters whose normalized coefficient is at least density**(3/2).

    The threshold is irrational, so the comparison is run in its exactly
    equivalent squared form T(gamma)^2 * 2^m >= |A|^3 on plain integers.
    The resulting set never exceeds density**-2 characters (asserted).
    """
    if a.size == 0:
        raise EmptySetError("large_spectrum_pow32 needs a nonempty set")
    if a.dim < 1:
        raise DimensionMismatchError("large_spectrum_pow32 needs dim >= 1")
    s = fourier_indicator(a)
    t2 = s.coeffs.astype(np.int64) ** 2  # |T| <= |A| <= 2^26: squares fit
    bound = ceil_div(a.size**3, 1 << a.dim)
    idx = np.nonzero(t2 >= bound)[0]
    gamma = PointSet.from_iterable(a.dim, (int(i) for i in idx))
    if gamma.size * a.size * a.size > 1 << (2 * a.dim):
        raise InvariantViolationError("large spectrum exceeds the Parseval bound")
    return gamma


def conv4_support(a: DenseSet, cross_check: bool = True) -> DenseSet:
    """Support of the four-fold convolution of the indicator of A, i.e. 4A.

    Computed through the spectrum: the inverse transform of T^4 equals
    2^m times the quadruple counts, and that division must be exact.  By
    default the result is verified bit-for-bit against iterated_sumset(A, 4),
    which goes through entirely different machinery.
    """
    if a.size == 0:
        raise EmptySetError("conv4_support needs a nonempty set")
    m = a.dim
    n = 1 << m
    t = kernels.fwht_i64_inplace(a.bits.astype(np.int64))
    u = t * t  # |T| <= 2^m <= 2^26, so T^2 fits comfortably
    # exact sum of T^4 bounds every partial of the inverse transform
    lo = (u & np.int64((1 << 26) - 1)).astype(np.uint64)
    hi = (u >> np.int64(26)).astype(np.uint64)
    s4 = (
        (exact_sum_u64(hi * hi) << 52)
        + (exact_sum_u64(hi * lo) << 27)
        + exact_sum_u64(lo * lo)
    )
    if s4 < _I64_SAFE:
        w = kernels.fwht_i64_inplace(u * u)
        if int(w.min()) < 0 or np.any(w & np.int64(n - 1)):
            raise InvariantViolationError("quadruple counts must be nonnegative multiples of 2^m")
        support = (w != 0).astype(np.uint8)
        counts_ok = True
    else:
        obj = np.array([int(x) for x in u], dtype=object)
        w = kernels.fwht_obj_inplace(obj * obj)
        counts_ok = bool(np.all(w % n == 0)) and bool(np.all(w >= 0))
        if not counts_ok:
            raise InvariantViolationError("quadruple counts must be nonnegative multiples of 2^m")
        support = np.array([1 if x else 0 for x in w], dtype=np.uint8)
    result = DenseSet(m, support)
    if cross_check and result != iterated_sumset(a, 4):
        raise InvariantViolationError("spectral 4A disagrees with the sumset route")
    return result
