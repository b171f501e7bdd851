"""Deterministic instance generators.

The extremal family is a subspace plus fresh independent representatives —
the standard witness that small doubling forces a coset exponentially larger
than the set.  The random family is a seeded uniform sample without
replacement; the subspace family enumerates a coordinate subspace.
"""

from __future__ import annotations

import random

from .core import PointSet

__all__ = ["gen_extremal", "gen_random", "gen_subspace"]


def gen_extremal(d: int, k: int, n: int | None = None) -> PointSet:
    """Union of the d-dimensional coordinate subspace and k-1 fresh basis
    vectors: size 2^d + k - 1, doubling grows linearly with k."""
    if d < 0 or k < 1:
        raise ValueError("need d >= 0 and k >= 1")
    need = max(d + k - 1, 1)
    if n is None:
        n = need
    if n < need:
        raise ValueError(f"ambient dim {n} too small; need at least {need}")
    values = list(range(1 << d))
    values.extend(1 << (d + i) for i in range(k - 1))
    return PointSet.from_iterable(n, values)


def gen_random(n: int, size: int, seed: int) -> PointSet:
    """Seeded uniform sample of `size` distinct points of F_2^n."""
    if not 1 <= n <= 64:
        raise ValueError("ambient dim must be in 1..64")
    if not 0 <= size <= (1 << n):
        raise ValueError(f"size {size} exceeds the space of 2^{n} points")
    rng = random.Random(seed)
    return PointSet.from_iterable(n, rng.sample(range(1 << n), size))


def gen_subspace(d: int, n: int) -> PointSet:
    """All points of the coordinate subspace spanned by the low d bits."""
    if d < 0 or n < max(d, 1):
        raise ValueError("need 0 <= d <= n and n >= 1")
    return PointSet.from_iterable(n, range(1 << d))
