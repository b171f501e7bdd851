"""Linear models: embed an ambient set into a small space without changing
its additive structure up to order s.

A linear map is an s-order-preserving bijection on A exactly when its kernel
meets the 2s-fold sumset of A only at zero; that kernel certificate is what
gets checked, always against 2sA computed exactly in span coordinates.  The
model space is sized two above |2sA| (so a uniform random linear map succeeds
with probability at least 1/2); candidate maps are drawn from a seeded
generator, and when the span is already small the identity-on-span model is
returned directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_DENSE_LIMIT,
    Coset,
    DenseSet,
    Embedding,
    PointSet,
    affine_span,
    compress,
    doubling_constant,
    iterated_sumset,
    rref_basis,
)
from .errors import DimensionMismatchError, EmptySetError, InvariantViolationError
from .intmath import ceil_log2

__all__ = [
    "Model",
    "is_freiman_iso_linear",
    "find_model",
    "pullback_coset",
]


@dataclass(frozen=True)
class Model:
    """A certified order-s model of an ambient set.

    ``columns[i]`` is the image of ambient e_i in the model space; the map is
    linear (offset-free), surjective onto the model space, injective on A, and
    preserves all sums of up to s elements in both directions (kernel
    certificate, re-checkable via :func:`is_freiman_iso_linear`).
    """

    source_dim: int
    model_dim: int
    columns: tuple[int, ...]
    s: int
    a_source: PointSet
    a_model: DenseSet
    certificate: bool
    identity_on_span: bool
    retries: int
    span_embedding: Embedding  # span coordinates -> ambient (offset = min of A)
    a_span: DenseSet  # A in span coordinates

    def map_value(self, x: int) -> int:
        out = 0
        x = int(x)
        while x:
            j = (x & -x).bit_length() - 1
            out ^= self.columns[j]
            x &= x - 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "source_dim": self.source_dim,
            "model_dim": self.model_dim,
            "s": self.s,
            "identity_on_span": self.identity_on_span,
            "retries": self.retries,
            "certificate": self.certificate,
            "columns": [f"0x{c:x}" for c in self.columns],
            "size": self.a_model.size,
        }


def _span_coord_map(span_vals: np.ndarray, columns_by_span_bit: list[int]) -> np.ndarray:
    """Apply a linear map given on span coordinates to an int64 index array."""
    out = np.zeros(span_vals.shape, dtype=np.int64)
    for j, col in enumerate(columns_by_span_bit):
        out ^= ((span_vals >> j) & 1) * np.int64(col)
    return out


def _kernel_certificate(map_on_span: list[int], two_s_a: DenseSet) -> bool:
    """True iff the map kills no nonzero element of 2sA (span coordinates)."""
    idx = two_s_a.indices()
    mapped = _span_coord_map(idx, map_on_span)
    nonzero_in = idx != 0
    return bool(np.all(mapped[nonzero_in] != 0))


def is_freiman_iso_linear(
    columns: tuple[int, ...],
    a: PointSet,
    s: int,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    spot_checks: int = 1000,
    seed: int = 0,
) -> bool:
    """Kernel certificate for the linear map given by ambient columns.

    True iff the kernel meets the 2s-fold sumset of A only at zero, which for
    linear maps is equivalent to the definitional biconditional (s-fold sums
    agree exactly when their images do).  Random s-tuple pairs are also
    spot-checked against that definition; a spot check contradicting the
    kernel verdict is a defect signal, never a quiet ``False``.
    """
    if not a.values:
        raise EmptySetError("isomorphism check needs a nonempty set")
    if len(columns) != a.ambient_dim:
        raise DimensionMismatchError("need one column per ambient coordinate")
    if s < 1:
        raise ValueError("order s must be at least 1")
    a_span, span_emb = compress(a, dense_limit)
    two_s_a = iterated_sumset(a_span, 2 * s) if a_span.dim else DenseSet.full(0)

    def map_ambient(x: int) -> int:
        out = 0
        while x:
            j = (x & -x).bit_length() - 1
            out ^= columns[j]
            x &= x - 1
        return out

    # even-length sums cancel the base point, so span basis images suffice
    map_on_span = [map_ambient(c) for c in span_emb.columns]
    verdict = _kernel_certificate(map_on_span, two_s_a)
    if spot_checks:
        rng = random.Random(seed)
        vals = a.values
        for _ in range(spot_checks):
            xs = [rng.choice(vals) for _ in range(s)]
            ys = [rng.choice(vals) for _ in range(s)]
            sum_eq = _xor_all(xs) == _xor_all(ys)
            img_eq = _xor_all(map(map_ambient, xs)) == _xor_all(map(map_ambient, ys))
            if sum_eq and not img_eq:
                raise InvariantViolationError("a linear map failed the forward direction")
            if verdict and img_eq != sum_eq:
                raise InvariantViolationError("spot check contradicts the kernel certificate")
    return verdict


def _xor_all(values) -> int:
    out = 0
    for v in values:
        out ^= v
    return out


def find_model(
    a: PointSet,
    s: int = 8,
    seed: int = 0,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> Model:
    """Certified order-s model of A in a space of size at most 4|2sA|.

    The model dimension starts at ceil(log2 |2sA|) + 1; uniform random linear
    maps are drawn until one is surjective and passes the kernel certificate
    (64 retries per dimension, then the dimension grows by one — each growth
    doubles the size bound, and once the dimension reaches the span rank the
    identity-on-span model always succeeds, so construction cannot fail).
    """
    if not a.values:
        raise EmptySetError("find_model needs a nonempty set")
    if s < 1:
        raise ValueError("order s must be at least 1")
    a_span, span_emb = compress(a, dense_limit)
    r = a_span.dim
    two_s_a = iterated_sumset(a_span, 2 * s) if r else DenseSet.full(0)
    m = ceil_log2(two_s_a.size) + 1
    rng = random.Random(seed)
    retries = 0

    while True:
        if r <= m:
            # identity on span: span coordinates become model coordinates
            model_dim = r
            span_cols = [1 << j for j in range(r)]
            identity = True
            break
        cand = [rng.getrandbits(m) for _ in range(r)]
        if rref_basis(cand, m).dim == m and _kernel_certificate(cand, two_s_a):
            model_dim = m
            span_cols = cand
            identity = False
            break
        retries += 1
        if retries % 64 == 0:
            m += 1

    pivots = {p: j for j, p in enumerate(span_emb.image_subspace().pivots)}
    columns = tuple(
        span_cols[pivots[i]] if i in pivots else 0 for i in range(a.ambient_dim)
    )
    mapped = (
        sorted(_span_coord_map(a_span.indices(), span_cols).tolist())
        if r
        else [0] * a.size
    )
    a_model = DenseSet.from_indices(model_dim, set(mapped))
    if a_model.size != a.size:
        raise InvariantViolationError("model map is not injective on A")
    size_bound = (4 * two_s_a.size) << (retries // 64)
    if (1 << model_dim) > size_bound:
        raise InvariantViolationError("model space exceeds its construction bound")
    model = Model(
        source_dim=a.ambient_dim,
        model_dim=model_dim,
        columns=columns,
        s=s,
        a_source=a,
        a_model=a_model,
        certificate=_kernel_certificate(span_cols, two_s_a),
        identity_on_span=identity,
        retries=retries,
        span_embedding=span_emb,
        a_span=a_span,
    )
    if not model.certificate:
        raise InvariantViolationError("model kernel certificate failed")
    if doubling_constant(a_model) != doubling_constant(a_span):
        raise InvariantViolationError("model changed the doubling constant")
    return model


def pullback_coset(model: Model, w) -> Coset:
    """Pull a subspace W of the model space back through the model map.

    P = {x in the four-fold sumset of the source set : map(x) in W} has
    exactly |W| points (the map is injective there, since differences of
    four-fold sums are 2s-fold sums for s >= 8) and is a coset; both facts
    are asserted, and P is returned in ambient coordinates.
    """
    if w.ambient_dim != model.model_dim:
        raise DimensionMismatchError("W does not live in the model space")
    r = model.a_span.dim
    span_cols = [model.map_value(c) for c in model.span_embedding.columns]
    four_a = iterated_sumset(model.a_span, 4) if r else DenseSet.full(0)
    w_bits = np.zeros(1 << model.model_dim, dtype=np.uint8)
    w_bits[w.enumerate_values()] = 1
    # even-length sums cancel translates, so the model's four-fold sumset is
    # the image of the source one; W must sit inside it
    idx = four_a.indices()
    mapped = _span_coord_map(idx, span_cols)
    in_w = w_bits[mapped] == 1
    if int(in_w.sum(dtype=np.int64)) < w.size:
        raise ValueError("W is not contained in the model's four-fold sumset")
    chosen = idx[in_w]
    if chosen.size != w.size:
        raise InvariantViolationError("pullback size differs from |W|")
    lin = model.span_embedding.linear()
    points = PointSet.from_iterable(
        model.source_dim, (lin.apply_value(int(v)) for v in chosen)
    )
    if points.size != w.size:
        raise InvariantViolationError("pullback collapsed points in ambient space")
    coset = affine_span(points)
    if coset.size != points.size:
        raise InvariantViolationError("pullback is not exactly a coset")
    return coset
