"""End-to-end run: model, dense structure, pullback, covering.

Order of stages: build a certified small model of A, find a certified
subspace W inside the model's four-fold sumset, pull W back to a coset P of
the source space, then grow P's subspace until one coset of it contains A.
Every stage's certificate is a hard assertion; the classical size bounds
(model-size exponent, covering overhead, final-ratio exponent) are emitted as
monitored yardsticks and fitted constants, never asserted.

All ratios in reports are exact rationals rendered as "p/q" strings; the only
floating-point values are the clearly-labelled fitted constants and optional
wall-times, and times are omitted from serialized output unless explicitly
requested so that fixed-seed runs are byte-identical.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .core import (
    DEFAULT_DENSE_LIMIT,
    HARD_DENSE_CAP,
    Coset,
    DenseSet,
    PointSet,
    Subspace,
    _coords_in_basis,
    affine_span,
    compress,
    doubling_constant,
    rref_basis,
)
from .covering import CoverReport, chang_cover
from .errors import EmptySetError, InvariantViolationError
from .intmath import frac_str
from .model import Model, find_model, pullback_coset
from .spectral import fourier_indicator, large_spectrum_pow32, max_nontrivial
from .structure import StructureResult, doubling_subspace

__all__ = ["PipelineReport", "run_pipeline", "run_batch", "analyze_set"]


@dataclass(frozen=True)
class PipelineReport:
    """Full record of one pipeline run; `final_coset` is the deliverable."""

    a: PointSet
    k: Fraction
    model: Model
    structure: StructureResult
    pullback: Coset  # ambient coordinates
    cover: CoverReport  # runs in source-span coordinates
    final_coset: Coset  # ambient coordinates
    min_coset: Coset  # exact minimal coset (oracle)
    monitors: dict
    fits: dict
    stage_seconds: dict

    @property
    def final_ratio(self) -> Fraction:
        return Fraction(self.final_coset.size, self.a.size)

    def to_json_dict(self, include_times: bool = False) -> dict:
        out = {
            "input": {"ambient_dim": self.a.ambient_dim, "size": self.a.size},
            "doubling_k": frac_str(self.k),
            "model": self.model.to_json_dict(),
            "structure": self.structure.to_json_dict(),
            "pullback": {
                "dim": self.pullback.subspace.dim,
                "size": self.pullback.size,
                "rep": f"0x{self.pullback.rep:x}",
                "basis": [f"0x{r:x}" for r in self.pullback.subspace.basis],
            },
            "cover": self.cover.to_json_dict(),
            "final": {
                "coset_dim": self.final_coset.subspace.dim,
                "coset_size": self.final_coset.size,
                "rep": f"0x{self.final_coset.rep:x}",
                "basis": [f"0x{r:x}" for r in self.final_coset.subspace.basis],
                "ratio": frac_str(self.final_ratio),
                "contains_input": True,
                "min_coset_size": self.min_coset.size,
                "ratio_vs_minimal": frac_str(
                    Fraction(self.final_coset.size, self.min_coset.size)
                ),
            },
            "monitors": dict(self.monitors),
            "fits": dict(self.fits),
        }
        if include_times:
            out["stage_seconds"] = dict(self.stage_seconds)
        return out


def _run_stage(name: str, timings: dict, fn, *args, **kwargs):
    t0 = time.perf_counter()
    try:
        out = fn(*args, **kwargs)
    except Exception as e:
        try:
            wrapped = type(e)(f"{name} stage: {e}")
        except Exception:
            wrapped = RuntimeError(f"{name} stage: {e}")
        raise wrapped from e
    timings[name] = time.perf_counter() - t0
    return out


def _coset_to_span(model: Model, p: Coset) -> Coset:
    """Re-coordinatize an ambient coset lying in the image of the span map."""
    emb = model.span_embedding
    r = model.a_span.dim
    if r == 0:
        return Coset.of(0, Subspace(0, ()))
    coords = _coords_in_basis([p.rep, *p.subspace.basis], emb.columns)
    v_span = rref_basis(coords[1:], r)
    if v_span.dim != p.subspace.dim:
        raise InvariantViolationError("coset directions collapsed in span coordinates")
    q = Coset.of(coords[0], v_span)
    if q.size != p.size:
        raise InvariantViolationError("coset size changed in span coordinates")
    return q


def _coset_to_ambient(model: Model, c: Coset) -> Coset:
    emb = model.span_embedding
    lin = emb.linear()
    rows = [lin.apply_value(row) for row in c.subspace.basis]
    sub = rref_basis(rows, model.source_dim)
    if sub.dim != c.subspace.dim:
        raise InvariantViolationError("coset directions collapsed in ambient coordinates")
    out = Coset.of(emb.apply_value(c.rep), sub)
    if out.size != c.size:
        raise InvariantViolationError("coset size changed in ambient coordinates")
    return out


def _cover_stage(model: Model, pullback: Coset) -> tuple[CoverReport, Coset]:
    q_span = _coset_to_span(model, pullback)
    cover = chang_cover(model.a_span, q_span)
    return cover, _coset_to_ambient(model, cover.c)


def _fit_constants(k: Fraction, model: Model, cover: CoverReport, final_ratio: Fraction) -> dict:
    kf = float(k)
    fits: dict = {"fit_model_exp": None, "fit_cover_c": None, "fit_theorem_c": None}
    if k > 1:
        fits["fit_model_exp"] = math.log2(
            (1 << model.model_dim) / model.a_model.size
        ) / math.log2(kf)
        fits["fit_theorem_c"] = math.log2(float(final_ratio)) / (
            kf**1.5 * math.log2(kf)
        )
    ratio = k / cover.eta
    if ratio > 1:
        fits["fit_cover_c"] = cover.overhead_dim / (kf * math.log2(float(ratio)))
    return fits


def run_pipeline(
    a: PointSet,
    seed: int = 0,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    s: int = 8,
) -> PipelineReport:
    """Run all four stages on A and return the certified report.

    Raises with stage attribution on any failure; an invariant violation
    anywhere is a defect, not an input problem.
    """
    if not a.values:
        raise EmptySetError("pipeline needs a nonempty set")
    timings: dict = {}
    model = _run_stage(
        "model", timings, find_model, a, s=s, seed=seed, dense_limit=dense_limit
    )
    k = doubling_constant(model.a_model)
    structure = _run_stage("structure", timings, doubling_subspace, model.a_model)
    pullback = _run_stage("pullback", timings, pullback_coset, model, structure.w)
    cover, final_coset = _run_stage("cover", timings, _cover_stage, model, pullback)
    for v in a.values:
        if not final_coset.contains_value(v):
            raise InvariantViolationError(
                "cover stage: final coset misses a point of the input"
            )
    min_coset = affine_span(a)

    size = a.size
    space = 1 << model.model_dim
    k16 = k**16
    monitors = {
        "model_size": space,
        "model_size_bound": frac_str(2 * k16 * size),
        "model_size_ok": Fraction(space) <= 2 * k16 * size,
        "model_density": frac_str(Fraction(size, space)),
        "density_yardstick": frac_str(1 / k16),
        "density_ok": Fraction(size, space) >= 1 / k16,
    }
    final_ratio = Fraction(final_coset.size, size)
    fits = _fit_constants(k, model, cover, final_ratio)
    return PipelineReport(
        a=a,
        k=k,
        model=model,
        structure=structure,
        pullback=pullback,
        cover=cover,
        final_coset=final_coset,
        min_coset=min_coset,
        monitors=monitors,
        fits=fits,
        stage_seconds=timings,
    )


def run_batch(
    sets: Sequence[PointSet],
    seeds: Sequence[int] | int = 0,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    max_workers: int | None = None,
) -> list[PipelineReport]:
    """Run the pipeline over many instances on a bounded worker pool.

    Results come back ordered by instance index regardless of completion
    order, so batch output is as deterministic as a sequential run.
    """
    if isinstance(seeds, int):
        seeds = [seeds] * len(sets)
    if len(seeds) != len(sets):
        raise ValueError("need one seed per instance")
    kernels.warmup()
    workers = max_workers or min(4, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(
                lambda t: run_pipeline(t[0], seed=t[1], dense_limit=dense_limit),
                zip(sets, seeds),
            )
        )


def analyze_set(a: PointSet, dense_limit: int = DEFAULT_DENSE_LIMIT) -> dict:
    """Exact summary of one set: doubling, span density, spectrum.

    The spectrum is taken in ambient coordinates when the ambient space is
    small enough to enumerate, otherwise in span coordinates; the report says
    which.  The large-spectrum size uses the density^{3/2} threshold.
    """
    if not a.values:
        raise EmptySetError("analyze needs a nonempty set")
    a_span, _ = compress(a, dense_limit)
    k = doubling_constant(a_span)
    if a.ambient_dim <= min(dense_limit, HARD_DENSE_CAP):
        work = DenseSet.from_indices(a.ambient_dim, a.values)
        space = "ambient"
    else:
        work = a_span
        space = "span"
    spectrum = None
    if work.dim >= 1:
        sp = fourier_indicator(work)
        gamma, t = max_nontrivial(sp)
        spectrum = {
            "space": space,
            "dim": work.dim,
            "density": frac_str(work.density),
            "max_nontrivial_gamma": f"0x{gamma.value:x}",
            "max_nontrivial_coeff": frac_str(Fraction(t, 1 << work.dim)),
            "large_spectrum_size": large_spectrum_pow32(work).size,
        }
    return {
        "ambient_dim": a.ambient_dim,
        "size": a.size,
        "rank": a_span.dim,
        "doubling_k": frac_str(k),
        "alpha_span": frac_str(a_span.density),
        "spectrum": spectrum,
    }
