"""Exact set algebra over F_2^n.

A point is an integer whose bit i is coordinate i.  Ambient sets (n <= 64)
are PointSets: sorted tuples of distinct Python ints.  Dense working sets
are DenseSets: one byte per element of F_2^m, m capped by a configurable
dense limit.  Every operation is a pure function on immutable values, and
all cardinalities, densities and ratios are exact.

The sumset has two independent required implementations that must agree
bit-for-bit: union-of-translates (butterfly block swaps) and the
Walsh-Hadamard convolution support.  ``sumset`` dispatches between them on a
cost estimate; both stay available by name for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatchError,
    EmptySetError,
    InstanceTooLargeError,
    InvariantViolationError,
)

__all__ = [
    "DEFAULT_DENSE_LIMIT",
    "HARD_DENSE_CAP",
    "Point",
    "PointSet",
    "DenseSet",
    "Subspace",
    "Coset",
    "Embedding",
    "rref_basis",
    "affine_span",
    "compress",
    "decompress",
    "sumset",
    "iterated_sumset",
    "doubling_constant",
    "translate",
    "is_subspace",
    "hyperplane_restrict",
]

DEFAULT_DENSE_LIMIT = 22
HARD_DENSE_CAP = 26


def _as_value(p: "Point | int", dim: int) -> int:
    if isinstance(p, Point):
        if p.ambient_dim != dim:
            raise DimensionMismatchError(
                f"point of dim {p.ambient_dim} used in dim {dim}"
            )
        return p.value
    v = int(p)
    if not 0 <= v < (1 << dim):
        raise DimensionMismatchError(f"value {v:#x} out of range for dim {dim}")
    return v


@dataclass(frozen=True, slots=True)
class Point:
    """A single element of F_2^n, 1 <= n <= 64."""

    ambient_dim: int
    value: int

    def __post_init__(self):
        if not 1 <= self.ambient_dim <= 64:
            raise DimensionMismatchError(f"ambient_dim {self.ambient_dim} not in 1..64")
        if not 0 <= self.value < (1 << self.ambient_dim):
            raise DimensionMismatchError(f"value {self.value:#x} out of range")


@dataclass(frozen=True, slots=True)
class PointSet:
    """Strictly sorted tuple of distinct points of F_2^n."""

    ambient_dim: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.ambient_dim <= 64:
            raise DimensionMismatchError(f"ambient_dim {self.ambient_dim} not in 1..64")
        bound = 1 << self.ambient_dim
        prev = -1
        for v in self.values:
            if not 0 <= v < bound:
                raise DimensionMismatchError(f"value {v:#x} out of range")
            if v <= prev:
                raise DimensionMismatchError("values must be strictly increasing")
            prev = v

    @classmethod
    def from_iterable(cls, ambient_dim: int, values: Iterable[int]) -> "PointSet":
        return cls(ambient_dim, tuple(sorted(set(int(v) for v in values))))

    @property
    def size(self) -> int:
        return len(self.values)

    def min_value(self) -> int:
        if not self.values:
            raise EmptySetError("empty point set has no minimum")
        return self.values[0]

    def __contains__(self, v: int) -> bool:
        import bisect

        i = bisect.bisect_left(self.values, v)
        return i < len(self.values) and self.values[i] == v


class DenseSet:
    """Subset of F_2^m as a 2^m-entry 0/1 byte vector."""

    __slots__ = ("dim", "bits", "_size")

    def __init__(self, dim: int, bits: np.ndarray):
        if not 0 <= dim <= HARD_DENSE_CAP:
            raise InstanceTooLargeError(f"dense dim {dim} not in 0..{HARD_DENSE_CAP}")
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.shape != (1 << dim,):
            raise DimensionMismatchError(
                f"bit vector length {bits.shape} does not match dim {dim}"
            )
        if bits.size and int(bits.max()) > 1:
            raise DimensionMismatchError("bit vector entries must be 0 or 1")
        bits.flags.writeable = False
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_size", int(bits.sum(dtype=np.int64)))

    def __setattr__(self, name, value):
        raise AttributeError("DenseSet is immutable")

    @classmethod
    def from_indices(cls, dim: int, indices: Iterable[int] | np.ndarray) -> "DenseSet":
        bits = np.zeros(1 << dim, dtype=np.uint8)
        idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                         dtype=np.int64)
        if idx.size:
            if int(idx.min()) < 0 or int(idx.max()) >> dim:
                raise DimensionMismatchError("index out of range for dense dim")
            bits[idx] = 1
        return cls(dim, bits)

    @classmethod
    def empty(cls, dim: int) -> "DenseSet":
        return cls(dim, np.zeros(1 << dim, dtype=np.uint8))

    @classmethod
    def full(cls, dim: int) -> "DenseSet":
        return cls(dim, np.ones(1 << dim, dtype=np.uint8))

    @property
    def size(self) -> int:
        return self._size

    @property
    def space_size(self) -> int:
        return 1 << self.dim

    @property
    def density(self) -> Fraction:
        return Fraction(self._size, 1 << self.dim)

    def indices(self) -> np.ndarray:
        return np.nonzero(self.bits)[0].astype(np.int64)

    def is_full(self) -> bool:
        return self._size == 1 << self.dim

    def __contains__(self, v: int) -> bool:
        return bool(self.bits[v])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DenseSet)
            and self.dim == other.dim
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __hash__(self):
        return hash((self.dim, self.bits.tobytes()))

    def __repr__(self):
        return f"DenseSet(dim={self.dim}, size={self._size})"


def _rref_rows(values: Iterable[int]) -> dict[int, int]:
    """Reduced row echelon basis as {pivot_bit_index: row}."""
    basis: dict[int, int] = {}
    for v in values:
        v = int(v)
        while v:
            p = (v & -v).bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                # clear any other pivot bits still present in v
                for q, row in basis.items():
                    if (v >> q) & 1:
                        v ^= row
                # clear the new pivot from existing rows
                for q in list(basis):
                    if (basis[q] >> p) & 1:
                        basis[q] ^= v
                basis[p] = v
                break
    return basis


@dataclass(frozen=True, slots=True)
class Subspace:
    """Linear subspace of F_2^n in reduced row echelon form.

    Basis rows are sorted by pivot (lowest set bit); each pivot bit occurs in
    exactly one row, which makes the representation canonical.
    """

    ambient_dim: int
    basis: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.ambient_dim <= 64:
            raise DimensionMismatchError("ambient_dim not in 0..64")
        seen = -1
        for i, row in enumerate(self.basis):
            if not 0 < row < (1 << self.ambient_dim):
                raise DimensionMismatchError("basis row out of range")
            p = (row & -row).bit_length() - 1
            if p <= seen:
                raise DimensionMismatchError("basis rows must be sorted by pivot")
            seen = p
            for j, other in enumerate(self.basis):
                if j != i and (other >> p) & 1:
                    raise DimensionMismatchError("basis is not fully reduced")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple((row & -row).bit_length() - 1 for row in self.basis)

    def reduce_value(self, v: int) -> int:
        """Canonical coset representative of v (pivot bits cleared)."""
        for row in self.basis:
            p = (row & -row).bit_length() - 1
            if (v >> p) & 1:
                v ^= row
        return v

    def contains_value(self, v: int) -> bool:
        return self.reduce_value(int(v)) == 0

    def enumerate_values(self) -> np.ndarray:
        vals = np.zeros(1, dtype=np.int64)
        for row in self.basis:
            vals = np.concatenate([vals, vals ^ np.int64(row)])
        return np.sort(vals)


@dataclass(frozen=True, slots=True)
class Coset:
    """Affine subspace rep + V with the canonical (pivot-free) representative."""

    rep: int
    subspace: Subspace

    def __post_init__(self):
        if not 0 <= self.rep < (1 << max(self.subspace.ambient_dim, 1)):
            raise DimensionMismatchError("rep out of range")
        if self.subspace.reduce_value(self.rep) != self.rep:
            raise DimensionMismatchError("rep is not in canonical form")

    @classmethod
    def of(cls, rep: int, subspace: Subspace) -> "Coset":
        return cls(subspace.reduce_value(int(rep)), subspace)

    @property
    def ambient_dim(self) -> int:
        return self.subspace.ambient_dim

    @property
    def size(self) -> int:
        return self.subspace.size

    def contains_value(self, v: int) -> bool:
        return self.subspace.contains_value(int(v) ^ self.rep)

    def enumerate_values(self) -> np.ndarray:
        return np.sort(self.subspace.enumerate_values() ^ np.int64(self.rep))


@dataclass(frozen=True, slots=True)
class Embedding:
    """Injective affine map F_2^in -> F_2^out: x -> offset + sum(columns[i] * x_i)."""

    in_dim: int
    out_dim: int
    columns: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if len(self.columns) != self.in_dim:
            raise DimensionMismatchError("need one column per input coordinate")
        if self.in_dim > self.out_dim:
            raise DimensionMismatchError("embedding cannot shrink the space")
        bound = 1 << self.out_dim
        if not 0 <= self.offset < max(bound, 1):
            raise DimensionMismatchError("offset out of range")
        for c in self.columns:
            if not 0 < c < bound:
                raise DimensionMismatchError("column out of range")
        if len(_rref_rows(self.columns)) != self.in_dim:
            raise DimensionMismatchError("columns must be linearly independent")

    @classmethod
    def identity(cls, dim: int) -> "Embedding":
        return cls(dim, dim, tuple(1 << i for i in range(dim)), 0)

    def apply_value(self, v: int) -> int:
        out = self.offset
        v = int(v)
        while v:
            j = (v & -v).bit_length() - 1
            out ^= self.columns[j]
            v &= v - 1
        return out

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        if self.out_dim > 62:
            raise InstanceTooLargeError("vectorized embedding limited to out_dim <= 62")
        out = np.full(arr.shape, self.offset, dtype=np.int64)
        for j, col in enumerate(self.columns):
            out ^= ((arr >> j) & 1) * np.int64(col)
        return out

    def compose(self, inner: "Embedding") -> "Embedding":
        """self after inner: x -> self(inner(x))."""
        if inner.out_dim != self.in_dim:
            raise DimensionMismatchError("embedding dims do not chain")
        lin = self.linear()
        cols = tuple(lin.apply_value(c) for c in inner.columns)
        return Embedding(inner.in_dim, self.out_dim, cols, self.apply_value(inner.offset))

    def linear(self) -> "Embedding":
        return self if self.offset == 0 else Embedding(self.in_dim, self.out_dim, self.columns, 0)

    def image_subspace(self) -> Subspace:
        return rref_basis(self.columns, self.out_dim)


def rref_basis(values: Iterable[int], ambient_dim: int) -> Subspace:
    """Canonical RREF basis of the span of the given vectors."""
    rows = _rref_rows(values)
    return Subspace(ambient_dim, tuple(rows[p] for p in sorted(rows)))


def affine_span(a: PointSet) -> Coset:
    """The unique minimal coset containing A (base point: the minimum of A)."""
    if not a.values:
        raise EmptySetError("affine_span needs a nonempty set")
    a0 = a.values[0]
    sub = rref_basis((v ^ a0 for v in a.values), a.ambient_dim)
    coset = Coset.of(a0, sub)
    for v in a.values:
        if not coset.contains_value(v):
            raise InvariantViolationError("affine_span does not contain its input")
    return coset


def _coords_in_basis(values: Sequence[int], basis: tuple[int, ...]) -> list[int]:
    """Coordinates of span members w.r.t. an RREF basis (pivot-bit extraction)."""
    pivots = [(row & -row).bit_length() - 1 for row in basis]
    coords = []
    for v in values:
        c = 0
        w = v
        for i, p in enumerate(pivots):
            if (v >> p) & 1:
                c |= 1 << i
                w ^= basis[i]
        if w:
            raise DimensionMismatchError(f"value {v:#x} is not in the span")
        coords.append(c)
    return coords


def compress(a: PointSet, dense_limit: int = DEFAULT_DENSE_LIMIT) -> tuple[DenseSet, Embedding]:
    """Re-coordinatize A onto its affine span.

    Returns the dense image (dim = rank of the difference span) and the
    affine embedding back into ambient coordinates; decompress is an exact
    round trip.
    """
    if not a.values:
        raise EmptySetError("compress needs a nonempty set")
    a0 = a.values[0]
    sub = rref_basis((v ^ a0 for v in a.values), a.ambient_dim)
    r = sub.dim
    if r > min(dense_limit, HARD_DENSE_CAP):
        raise InstanceTooLargeError(
            f"affine span has rank {r}, above the dense limit {dense_limit}"
        )
    coords = _coords_in_basis([v ^ a0 for v in a.values], sub.basis)
    dense = DenseSet.from_indices(r, coords)
    if dense.size != a.size:
        raise InvariantViolationError("compress lost points")
    emb = Embedding(r, a.ambient_dim, sub.basis, a0) if r else Embedding(0, a.ambient_dim, (), a0)
    return dense, emb


def decompress(x: DenseSet, emb: Embedding) -> PointSet:
    """Map a dense set back through an embedding; exact inverse of compress."""
    if emb.in_dim != x.dim:
        raise DimensionMismatchError("embedding does not match dense dim")
    values = [emb.apply_value(int(i)) for i in x.indices()]
    ps = PointSet.from_iterable(emb.out_dim, values)
    if ps.size != x.size:
        raise InvariantViolationError("embedding was not injective on the set")
    return ps


def _check_same_space(x: DenseSet, y: DenseSet):
    if x.dim != y.dim:
        raise DimensionMismatchError(f"dense dims differ: {x.dim} vs {y.dim}")


def _sumset_translate(x: DenseSet, y: DenseSet) -> DenseSet:
    smaller, larger = (x, y) if x.size <= y.size else (y, x)
    if smaller.size == 0:
        return DenseSet.empty(x.dim)
    acc = kernels.sumset_union_u8(larger.bits, smaller.indices())
    return DenseSet(x.dim, acc)


def _sumset_fwht(x: DenseSet, y: DenseSet) -> DenseSet:
    if x.size == 0 or y.size == 0:
        return DenseSet.empty(x.dim)
    n = 1 << x.dim
    tx = kernels.fwht_i64_inplace(x.bits.astype(np.int64))
    ty = kernels.fwht_i64_inplace(y.bits.astype(np.int64))
    # |tx*ty| <= 2^2m and inverse-transform partials <= 2^m*sqrt(|X||Y|) <= 2^2m:
    # int64-safe for every dim below the hard cap
    w = kernels.fwht_i64_inplace(tx * ty)
    if int(w.min()) < 0 or np.any(w & np.int64(n - 1)):
        raise InvariantViolationError("convolution counts must be nonnegative multiples of 2^m")
    return DenseSet(x.dim, (w != 0).astype(np.uint8))


def _sumset_naive(x: DenseSet, y: DenseSet) -> DenseSet:
    if x.dim > 16:
        raise InstanceTooLargeError("naive sumset is for small dims only")
    xi = x.indices()
    yi = y.indices()
    if xi.size == 0 or yi.size == 0:
        return DenseSet.empty(x.dim)
    bits = np.zeros(1 << x.dim, dtype=np.uint8)
    step = max(1, (1 << 24) // max(1, yi.size))
    for s in range(0, xi.size, step):
        pairs = xi[s : s + step, None] ^ yi[None, :]
        bits[pairs.reshape(-1)] = 1
    return DenseSet(x.dim, bits)


def sumset(x: DenseSet, y: DenseSet, method: str = "auto") -> DenseSet:
    """X + Y = {x ^ y}.  Methods: auto | translate | fwht | naive."""
    _check_same_space(x, y)
    if method == "auto":
        method = "translate" if min(x.size, y.size) <= 2 * x.dim + 16 else "fwht"
    if method == "translate":
        return _sumset_translate(x, y)
    if method == "fwht":
        return _sumset_fwht(x, y)
    if method == "naive":
        return _sumset_naive(x, y)
    raise ValueError(f"unknown sumset method {method!r}")


def iterated_sumset(x: DenseSet, s: int, method: str = "auto") -> DenseSet:
    """sX: all sums of exactly s elements of X (binary-decomposition doubling)."""
    if s < 1:
        raise ValueError("iterated_sumset needs s >= 1")
    if x.size == 0:
        raise EmptySetError("iterated_sumset needs a nonempty set")
    result: DenseSet | None = None
    base = x
    while s:
        if s & 1:
            result = base if result is None else sumset(result, base, method)
        s >>= 1
        if s:
            base = sumset(base, base, method)
    assert result is not None
    return result


def doubling_constant(x: DenseSet) -> Fraction:
    """K = |X+X| / |X|, exact."""
    if x.size == 0:
        raise EmptySetError("doubling constant needs a nonempty set")
    return Fraction(sumset(x, x).size, x.size)


def translate(x: DenseSet, a: "Point | int") -> DenseSet:
    """a + X via butterfly block swaps."""
    v = _as_value(a, x.dim) if x.dim else 0
    return DenseSet(x.dim, kernels.xor_translate_u8(x.bits, v))


def is_subspace(x: DenseSet) -> bool:
    """True iff 0 in X, X+X = X, and |X| = 2^rank(X)."""
    if x.size == 0 or 0 not in x:
        return False
    if sumset(x, x) != x:
        return False
    # greedy basis: scan members in order, extend when outside the current span
    span = np.zeros(1, dtype=np.int64)
    rank = 0
    span_bits = np.zeros(1 << x.dim, dtype=bool)
    span_bits[0] = True
    for v in x.indices():
        if not span_bits[v]:
            span = np.concatenate([span, span ^ v])
            span_bits[span] = True
            rank += 1
            if (1 << rank) == x.size:
                break
    return x.size == (1 << rank)


def _parity_of_and(idx: np.ndarray, gamma: int) -> np.ndarray:
    v = idx & np.int64(gamma)
    for s in (32, 16, 8, 4, 2, 1):
        v = v ^ (v >> s)
    return v & np.int64(1)


def hyperplane_restrict(x: DenseSet, gamma: "Point | int", side: int) -> tuple[DenseSet, Embedding]:
    """Restrict X to the affine hyperplane {v : gamma.v = side}, re-coordinatized.

    The new basis of the hyperplane is {e_i + gamma_i * e_j : i != j} with
    j the lowest set bit of gamma; side 1 carries the offset e_j.  In these
    coordinates the restriction is "drop bit j".
    """
    g = _as_value(gamma, x.dim)
    if g == 0:
        raise DimensionMismatchError("gamma must be a nonzero character")
    if side not in (0, 1):
        raise DimensionMismatchError("side must be 0 or 1")
    m = x.dim
    j = (g & -g).bit_length() - 1
    idx = np.arange(1 << m, dtype=np.int64)
    sel = idx[_parity_of_and(idx, g) == side]
    low = sel & np.int64((1 << j) - 1)
    new_idx = ((sel >> np.int64(j + 1)) << np.int64(j)) | low
    bits = np.zeros(1 << (m - 1), dtype=np.uint8)
    bits[new_idx] = x.bits[sel]
    cols = []
    for i in range(m):
        if i == j:
            continue
        c = 1 << i
        if (g >> i) & 1:
            c |= 1 << j
        cols.append(c)
    emb = Embedding(m - 1, m, tuple(cols), side << j)
    return DenseSet(m - 1, bits), emb
