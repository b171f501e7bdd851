"""Exact integer and rational helpers.

Certified comparisons in this package never go through floating point; the
helpers here provide the few nontrivial exact primitives: overflow-free sums
of uint64 arrays, ceilings of square roots of rationals, and dyadic
bracketing of log2 of a rational.
"""

from fractions import Fraction
from math import isqrt

import numpy as np

__all__ = [
    "exact_sum_u64",
    "ceil_div",
    "ceil_log2",
    "ceil_sqrt_frac",
    "floor_log2_scaled",
    "frac_str",
    "parse_frac",
]

_CHUNK = 1 << 20


def exact_sum_u64(arr: np.ndarray) -> int:
    """Exact sum of a uint64 array as a Python int (no modular wraparound)."""
    if arr.dtype != np.uint64:
        arr = arr.astype(np.uint64)
    total = 0
    mask = np.uint64(0xFFFFFFFF)
    for start in range(0, arr.shape[0], _CHUNK):
        chunk = arr[start : start + _CHUNK]
        # each half is < 2^32, so 2^20 of them sum to < 2^52: no overflow
        lo = int((chunk & mask).sum(dtype=np.uint64))
        hi = int((chunk >> np.uint64(32)).sum(dtype=np.uint64))
        total += (hi << 32) + lo
    return total


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def ceil_log2(x: int) -> int:
    """Smallest t with 2^t >= x, for x >= 1."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def ceil_sqrt_frac(q: Fraction | int) -> int:
    """Smallest integer c >= 0 with c*c >= q."""
    q = Fraction(q)
    if q <= 0:
        return 0
    c = isqrt(q.numerator // q.denominator)
    while c * c * q.denominator < q.numerator:
        c += 1
    return c


def floor_log2_scaled(num: int, den: int, bits: int = 16) -> int:
    """floor(2^bits * log2(num/den)) for num >= den >= 1, exactly.

    Uses one exponentiation: P <= 2^bits*log2(num/den) < P+1 is decided by
    comparing num^(2^bits) against 2^P * den^(2^bits) in big-int arithmetic.
    """
    if den < 1 or num < den:
        raise ValueError("floor_log2_scaled needs num >= den >= 1")
    if num == den:
        return 0
    e = 1 << bits
    n_pow = pow(num, e)
    d_pow = pow(den, e)
    p = (n_pow // d_pow).bit_length() - 1
    # floor(real log) can sit one above the floor-quotient estimate; settle exactly
    while (d_pow << (p + 1)) <= n_pow:
        p += 1
    while (d_pow << p) > n_pow:
        p -= 1
    return p


def frac_str(q: Fraction) -> str:
    """Serialize a rational as the stable "num/den" form."""
    return f"{q.numerator}/{q.denominator}"


def parse_frac(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)
