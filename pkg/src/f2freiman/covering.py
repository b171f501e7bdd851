"""Coset covering: trade a large coset inside the four-fold sumset for a
small coset containing the whole set.

``ruzsa_cover`` is the greedy packing primitive (translates of B by the
chosen points are pairwise disjoint, yet two B-steps from the chosen points
reach all of S).  ``chang_cover`` applies it with B a coset of V, absorbs the
span of the chosen points' differences into V, and then one further round is
guaranteed to collapse to a single translate — that collapse is asserted, not
assumed.  The dimension overhead is reported against the exact minimal-coset
oracle; no size bound beyond containment is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    Coset,
    DenseSet,
    PointSet,
    affine_span,
    iterated_sumset,
    rref_basis,
    sumset,
    translate,
)
from .errors import DimensionMismatchError, EmptySetError, InvariantViolationError
from .intmath import frac_str

__all__ = [
    "CoverReport",
    "ruzsa_cover",
    "chang_cover",
    "minimal_coset_oracle",
]


@dataclass(frozen=True)
class CoverReport:
    """Result of covering a set A by translates grown from a coset Q."""

    a_size: int
    q: Coset
    c: Coset
    eta: Fraction  # |Q| / |A|
    overhead_dim: int  # dim(C) - dim(Q's subspace)
    round_sizes: tuple[int, ...]

    @property
    def final_ratio(self) -> Fraction:
        return Fraction(self.c.size, self.a_size)

    def to_json_dict(self) -> dict:
        return {
            "eta": frac_str(self.eta),
            "overhead_dim": self.overhead_dim,
            "round_sizes": list(self.round_sizes),
            "q_dim": self.q.subspace.dim,
            "c_dim": self.c.subspace.dim,
            "c_rep": f"0x{self.c.rep:x}",
            "c_basis": [f"0x{row:x}" for row in self.c.subspace.basis],
            "final_ratio": frac_str(self.final_ratio),
        }


def _coset_dense(rep: int, basis_rows, dim: int) -> DenseSet:
    vals = np.zeros(1, dtype=np.int64)
    for row in basis_rows:
        vals = np.concatenate([vals, vals ^ np.int64(row)])
    return DenseSet.from_indices(dim, vals ^ np.int64(rep))


def ruzsa_cover(s: DenseSet, b: DenseSet) -> PointSet:
    """Greedy maximal X <= S with {x + B : x in X} pairwise disjoint.

    Scans S in increasing point order (dimension at least 1).  Asserted
    postconditions: the translates are exactly disjoint (each acceptance
    grows their union by exactly |B|), S is inside X + B + B, and
    |X| * |B| <= |S + B|.
    """
    if s.dim != b.dim:
        raise DimensionMismatchError("S and B must share a dimension")
    if s.dim < 1:
        raise DimensionMismatchError("covering points need dimension >= 1")
    if b.size == 0:
        raise EmptySetError("covering needs a nonempty B")
    bb = sumset(b, b)
    union_bits = np.zeros(s.space_size, dtype=np.uint8)
    reach_bits = np.zeros(s.space_size, dtype=np.uint8)  # X + B + B so far
    covered = 0
    chosen: list[int] = []
    for xi in s.indices():
        xi = int(xi)
        # xi + B meets the union of accepted translates iff xi is within
        # two B-steps of an accepted point
        if reach_bits[xi]:
            continue
        union_bits |= translate(b, xi).bits
        new_covered = int(union_bits.sum(dtype=np.int64))
        if new_covered != covered + b.size:
            raise InvariantViolationError("accepted translates are not disjoint")
        covered = new_covered
        reach_bits |= translate(bb, xi).bits
        chosen.append(xi)
    if not bool(np.all(reach_bits[s.indices()] == 1)):
        raise InvariantViolationError("X + B + B does not cover S")
    if chosen and len(chosen) * b.size > sumset(s, b).size:
        raise InvariantViolationError("cover is larger than the packing bound")
    return PointSet.from_iterable(s.dim, chosen)


def chang_cover(a: DenseSet, q: Coset) -> CoverReport:
    """Cover A by a single coset grown from Q's subspace.

    Requires Q inside the four-fold sumset of A.  Round i covers A by
    translates of a coset of V_i; V then absorbs the span of the chosen
    points' differences.  Once that absorption happens, A lies in a single
    coset of the enlarged V, so the round after it must return exactly one
    point — asserted.  The output coset contains A (asserted) and its
    subspace contains Q's (asserted).
    """
    if a.size == 0:
        raise EmptySetError("chang_cover needs a nonempty set")
    if q.ambient_dim != a.dim:
        raise DimensionMismatchError("Q must live in A's space")
    four_a = iterated_sumset(a, 4)
    q_vals = q.enumerate_values()
    if not bool(np.all(four_a.bits[q_vals] == 1)):
        raise ValueError("Q is not contained in the four-fold sumset of A")
    eta = Fraction(q.size, a.size)
    if a.dim == 0:
        return CoverReport(a.size, q, q, eta, 0, (1,))

    v = q.subspace
    round_sizes: list[int] = []
    c: Coset | None = None
    for round_index in range(2):
        b = _coset_dense(q.rep, v.basis, a.dim)
        x = ruzsa_cover(a, b)
        round_sizes.append(x.size)
        if x.size == 1:
            c = Coset.of(x.values[0], v)
            break
        if round_index == 1:
            raise InvariantViolationError("cover did not collapse after absorption")
        xi0 = x.values[0]
        grown = rref_basis(tuple(v.basis) + tuple(xv ^ xi0 for xv in x.values), a.dim)
        if grown.dim < v.dim:
            raise InvariantViolationError("absorption shrank the subspace")
        v = grown
    assert c is not None
    c_bits = _coset_dense(c.rep, c.subspace.basis, a.dim)
    if not bool(np.all(c_bits.bits[a.indices()] == 1)):
        raise InvariantViolationError("final coset does not contain the set")
    for row in q.subspace.basis:
        if not c.subspace.contains_value(row):
            raise InvariantViolationError("final subspace lost Q's directions")
    return CoverReport(
        a_size=a.size,
        q=q,
        c=c,
        eta=eta,
        overhead_dim=c.subspace.dim - q.subspace.dim,
        round_sizes=tuple(round_sizes),
    )


def minimal_coset_oracle(a: PointSet) -> Coset:
    """Exact smallest coset containing A (ground truth for cover overhead)."""
    return affine_span(a)
