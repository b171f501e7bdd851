"""Density-increment extraction of large subspaces inside 4A.

Two iterations are provided.  The pure form needs only a density: while the
four-fold sumset is not the whole space, the largest nontrivial spectrum
coefficient forces a hyperplane restriction whose density grows by an exact,
certified amount.  The paired form runs on (A, B) under the sum bound
|A+B| <= K|B| with K fixed at entry, increments until B's density reaches
1/(2K), then hands B to the pure form.

Every inequality asserted here is a theorem of the exact finite setting;
violations are defect signals (InvariantViolationError), never recoverable
conditions.  Codimension budgets are hard bounds computed in exact integer
arithmetic and enforced during iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (
    DenseSet,
    Embedding,
    Subspace,
    doubling_constant,
    hyperplane_restrict,
    is_subspace,
    iterated_sumset,
    rref_basis,
    sumset,
)
from .errors import EmptySetError, InvariantViolationError
from .intmath import ceil_sqrt_frac, floor_log2_scaled, frac_str
from .spectral import conv4_support, fourier_indicator, max_nontrivial

__all__ = [
    "FullSpace",
    "Increment",
    "PairTerminal",
    "PairIncrement",
    "StepRecord",
    "StructureResult",
    "pure_codim_budget",
    "doubling_codim_budget",
    "pure_increment_step",
    "pure_density_subspace",
    "pair_increment_step",
    "doubling_subspace",
]


@dataclass(frozen=True)
class FullSpace:
    """The four-fold sumset covers the whole space."""

    dim: int


@dataclass(frozen=True)
class Increment:
    """One pure density-increment step."""

    gamma: int
    side: int
    restricted: DenseSet
    embedding: Embedding
    alpha_before: Fraction
    alpha_after: Fraction


@dataclass(frozen=True)
class PairIncrement:
    """One paired step: both sets restricted to sides of the same hyperplane."""

    gamma: int
    side_a: int
    side_b: int
    a: DenseSet
    b: DenseSet
    embedding_a: Embedding
    embedding_b: Embedding
    alpha_after: Fraction
    beta_after: Fraction


@dataclass(frozen=True)
class PairTerminal:
    """B got dense enough; carries the pure-form result computed on B."""

    result: "StructureResult"


@dataclass(frozen=True)
class StepRecord:
    """One step of an iteration, with embeddings back into model coordinates."""

    phase: str  # "pair" or "pure"
    index: int
    local_dim: int  # dimension of the space the step produced
    gamma: int  # in the coordinates the step started from
    side_a: Optional[int]
    side_b: Optional[int]
    alpha: Optional[Fraction]
    beta: Optional[Fraction]
    embedding_a: Optional[Embedding]
    embedding_b: Optional[Embedding]

    def to_json_dict(self) -> dict:
        def emb(e: Optional[Embedding]):
            if e is None:
                return None
            return {
                "in_dim": e.in_dim,
                "out_dim": e.out_dim,
                "columns": [f"0x{c:x}" for c in e.columns],
                "offset": f"0x{e.offset:x}",
            }

        return {
            "phase": self.phase,
            "index": self.index,
            "local_dim": self.local_dim,
            "gamma": f"0x{self.gamma:x}",
            "side_a": self.side_a,
            "side_b": self.side_b,
            "alpha": frac_str(self.alpha) if self.alpha is not None else None,
            "beta": frac_str(self.beta) if self.beta is not None else None,
            "x": f"0x{self.embedding_a.offset:x}" if self.embedding_a else None,
            "y": f"0x{self.embedding_b.offset:x}" if self.embedding_b else None,
            "embedding_a": emb(self.embedding_a),
            "embedding_b": emb(self.embedding_b),
        }


@dataclass(frozen=True)
class StructureResult:
    """A certified subspace W inside the four-fold sumset of the input."""

    base_dim: int
    base_size: int
    w: Subspace
    codim: int
    bound_budget: int
    trace: tuple[StepRecord, ...]

    def to_json_dict(self) -> dict:
        return {
            "base_dim": self.base_dim,
            "base_size": self.base_size,
            "w_basis": [f"0x{b:x}" for b in self.w.basis],
            "codim": self.codim,
            "bound_budget": self.bound_budget,
            "trace": [r.to_json_dict() for r in self.trace],
        }


def pure_codim_budget(size: int, dim: int) -> int:
    """ceil(7 / sqrt(alpha)) + 1 with alpha = size / 2^dim, exactly."""
    if size < 1:
        raise EmptySetError("budget needs a nonempty set")
    return ceil_sqrt_frac(Fraction(49 << dim, size)) + 1


def doubling_codim_budget(size: int, dim: int, k: Fraction) -> int:
    """ceil(sqrt(8K) * log2(1/alpha)) + ceil(7 * sqrt(2K)) + 2, exactly.

    The log2 factor is bracketed by exact dyadic powering to 2^-16; when the
    bracket straddles an integer boundary the upper end is used.
    """
    if size < 1:
        raise EmptySetError("budget needs a nonempty set")
    t2 = ceil_sqrt_frac(98 * k)
    if size == 1 << dim:
        return t2 + 2
    p = floor_log2_scaled(1 << dim, size, bits=16)
    denom = k.denominator << 32
    c_up = ceil_sqrt_frac(Fraction(8 * k.numerator * (p + 1) * (p + 1), denom))
    return c_up + t2 + 2


def _denser_side(a: DenseSet) -> tuple[int, int, int, Fraction]:
    """Argmax character, coefficient, side, and restricted density (|A|+|T|)/2^m."""
    s = fourier_indicator(a)
    gamma_pt, t = max_nontrivial(s)
    side = 0 if t > 0 else 1
    alpha_after = Fraction(a.size + abs(t), 1 << a.dim)
    return gamma_pt.value, t, side, alpha_after


def _assert_embedded_subset(sub: DenseSet, emb: Embedding, sup: DenseSet, what: str):
    idx = sub.indices()
    if idx.size and not bool(sup.bits[emb.apply_array(idx)].all()):
        raise InvariantViolationError(f"{what}: restricted set does not embed into its parent")


def pure_increment_step(a: DenseSet) -> FullSpace | Increment:
    """One step of the pure iteration.

    Either 4A is the whole space, or the argmax character gamma satisfies
    T(gamma)^2 * 2^m >= |A|^3 and the denser side of the gamma-hyperplane
    raises the density from alpha to at least alpha(1 + sqrt(alpha)/2);
    both facts are asserted exactly.
    """
    if a.size == 0:
        raise EmptySetError("increment step needs a nonempty set")
    m = a.dim
    # |A| > 2^m / 2 forces 2A (hence 4A) to be everything, skipping the sumsets
    if 2 * a.size > (1 << m) or iterated_sumset(a, 4).is_full():
        return FullSpace(m)
    gamma, t, side, alpha_after = _denser_side(a)
    if (t * t) << m < a.size**3:
        raise InvariantViolationError("argmax coefficient below the alpha^(3/2) guarantee")
    restricted, emb = hyperplane_restrict(a, gamma, side)
    alpha = a.density
    if restricted.density != alpha_after:
        raise InvariantViolationError("restricted density disagrees with the coefficient")
    d = alpha_after - alpha
    if alpha_after < alpha or 4 * d * d < alpha**3:
        raise InvariantViolationError("density increment below the certified bound")
    _assert_embedded_subset(restricted, emb, a, "pure step")
    return Increment(gamma, side, restricted, emb, alpha, alpha_after)


def _certify(a: DenseSet, w: Subspace, budget: int, records: list[StepRecord]) -> StructureResult:
    m = a.dim
    codim = m - w.dim
    if codim > budget:
        raise InvariantViolationError(f"codimension {codim} exceeds the budget {budget}")
    c4 = conv4_support(a)  # spectral route, cross-checked against the sumset route
    vals = w.enumerate_values()
    if not bool(c4.bits[vals].all()):
        raise InvariantViolationError("W is not contained in the four-fold sumset")
    if not is_subspace(DenseSet.from_indices(m, vals)):
        raise InvariantViolationError("W does not enumerate to a subspace")
    return StructureResult(m, a.size, w, codim, budget, tuple(records))


def pure_density_subspace(a: DenseSet) -> StructureResult:
    """Iterate pure increments until 4A fills its space; lift that space back.

    Codimension is bounded by ceil(7/sqrt(alpha)) + 1, asserted throughout.
    """
    if a.size == 0:
        raise EmptySetError("pure iteration needs a nonempty set")
    m = a.dim
    budget = pure_codim_budget(a.size, m)
    emb = Embedding.identity(m)
    cur = a
    records: list[StepRecord] = []
    while True:
        step = pure_increment_step(cur)
        if isinstance(step, FullSpace):
            break
        emb = emb.compose(step.embedding)
        if len(records) + 1 > budget:
            raise InvariantViolationError("pure iteration exceeded its codimension budget")
        records.append(
            StepRecord(
                phase="pure",
                index=len(records),
                local_dim=cur.dim - 1,
                gamma=step.gamma,
                side_a=step.side,
                side_b=None,
                alpha=step.alpha_after,
                beta=None,
                embedding_a=emb,
                embedding_b=None,
            )
        )
        cur = step.restricted
    # offsets cancel in four-fold sums, so the linear image of the final
    # (full) local space lands inside 4A
    w = emb.image_subspace() if emb.in_dim else Subspace(m, ())
    return _certify(a, w, budget, records)


def pair_increment_step(a: DenseSet, b: DenseSet, k: Fraction) -> PairTerminal | PairIncrement:
    """One step of the paired iteration under |A+B| <= K|B|.

    Terminal branch: |B|/2^m >= 1/(2K) exactly; runs the pure form on B.
    Increment branch: A's argmax character satisfies 2K T^2 >= |A|^2, A is
    restricted to its denser side (certified increment), and B to a side
    keeping the sum bound; all comparisons cross-multiplied integers.
    """
    if a.dim != b.dim:
        raise InvariantViolationError("paired sets must share a space")
    if a.size == 0 or b.size == 0:
        raise EmptySetError("paired iteration needs nonempty sets")
    m = a.dim
    kn, kd = k.numerator, k.denominator
    if kd * sumset(a, b).size > kn * b.size:
        raise InvariantViolationError("pair hypothesis |A+B| <= K|B| does not hold")
    if 2 * kn * b.size >= (kd << m):
        return PairTerminal(pure_density_subspace(b))
    gamma, t, side_a, _ = _denser_side(a)
    if 2 * kn * t * t < kd * a.size**2:
        raise InvariantViolationError("argmax coefficient below the (2K)^(-1/2) guarantee")
    a2, emb_a = hyperplane_restrict(a, gamma, side_a)
    alpha, alpha2 = a.density, a2.density
    d = alpha2 - alpha
    if alpha2 < alpha or 8 * k * d * d < alpha**2:
        raise InvariantViolationError("paired density increment below the certified bound")
    chosen = None
    for side_b in (0, 1):
        b2, emb_b = hyperplane_restrict(b, gamma, side_b)
        if b2.size == 0:
            continue
        if kd * sumset(a2, b2).size <= kn * b2.size:
            chosen = (side_b, b2, emb_b)
            break
    if chosen is None:
        raise InvariantViolationError("no side of B keeps the sum bound (averaging failed)")
    side_b, b2, emb_b = chosen
    _assert_embedded_subset(a2, emb_a, a, "pair step A")
    _assert_embedded_subset(b2, emb_b, b, "pair step B")
    return PairIncrement(gamma, side_a, side_b, a2, b2, emb_a, emb_b, alpha2, b2.density)


def doubling_subspace(a: DenseSet) -> StructureResult:
    """Subspace in 4A for a set with doubling constant K = |A+A|/|A|.

    Runs the paired iteration from A = B with K fixed at entry; codimension
    bounded by ceil(sqrt(8K) log2(1/alpha)) + ceil(7 sqrt(2K)) + 2.
    """
    if a.size == 0:
        raise EmptySetError("doubling iteration needs a nonempty set")
    m = a.dim
    k = doubling_constant(a)
    budget = doubling_codim_budget(a.size, m, k)
    emb_a = Embedding.identity(m)
    emb_b = Embedding.identity(m)
    cur_a = cur_b = a
    records: list[StepRecord] = []
    while True:
        step = pair_increment_step(cur_a, cur_b, k)
        if isinstance(step, PairTerminal):
            inner = step.result
            lin_b = emb_b.linear()
            for rec in inner.trace:
                lifted = emb_b.compose(rec.embedding_a)
                records.append(
                    StepRecord(
                        phase="pure",
                        index=len(records),
                        local_dim=rec.local_dim,
                        gamma=rec.gamma,
                        side_a=None,
                        side_b=rec.side_a,
                        alpha=None,
                        beta=rec.alpha,
                        embedding_a=None,
                        embedding_b=lifted,
                    )
                )
            w = rref_basis((lin_b.apply_value(r) for r in inner.w.basis), m)
            if m - w.dim != len(records):
                raise InvariantViolationError("lifted subspace lost dimensions")
            break
        emb_a = emb_a.compose(step.embedding_a)
        emb_b = emb_b.compose(step.embedding_b)
        if len(records) + 1 > budget:
            raise InvariantViolationError("paired iteration exceeded its codimension budget")
        records.append(
            StepRecord(
                phase="pair",
                index=len(records),
                local_dim=step.a.dim,
                gamma=step.gamma,
                side_a=step.side_a,
                side_b=step.side_b,
                alpha=step.alpha_after,
                beta=step.beta_after,
                embedding_a=emb_a,
                embedding_b=emb_b,
            )
        )
        cur_a, cur_b = step.a, step.b
    return _certify(a, w, budget, records)
