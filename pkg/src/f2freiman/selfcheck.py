"""Deterministic invariant battery over small spaces (dim <= 12).

Each check re-derives a law through an independent route (exhaustive
enumeration, alternate kernel lane, or definitional recomputation) rather
than trusting the assertions inside the operations under test.  Output is
one PASS/FAIL line per check plus a summary; the exit decision belongs to
the caller.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _kernels_numpy, kernels
from .core import (
    DenseSet,
    PointSet,
    compress,
    decompress,
    doubling_constant,
    hyperplane_restrict,
    is_subspace,
    iterated_sumset,
    sumset,
    translate,
)
from .covering import chang_cover, ruzsa_cover
from .errors import InvariantViolationError
from .generators import gen_extremal, gen_random, gen_subspace
from .model import find_model, is_freiman_iso_linear, pullback_coset
from .pipeline import run_pipeline
from .spectral import conv4_support, fourier_indicator, fwht
from .structure import doubling_subspace, pure_density_subspace
from .core import Coset, Subspace

__all__ = ["selftest", "CHECKS"]


def _fail(msg: str):
    raise InvariantViolationError(msg)


def _random_dense(rng: random.Random, m: int, min_size: int = 1) -> DenseSet:
    size = rng.randint(min_size, 1 << m)
    return DenseSet.from_indices(m, rng.sample(range(1 << m), size))


def check_fwht_involution_parseval():
    rng = random.Random(101)
    for _ in range(20):
        m = rng.randint(1, 10)
        a = _random_dense(rng, m)
        t = fwht(a.bits.astype(np.int64))
        back = fwht(t)
        if not np.array_equal(back, a.bits.astype(np.int64) << m):
            _fail("double transform is not 2^m times the identity")
        if int((t.astype(object) ** 2).sum()) != a.size << m:
            _fail("power identity failed")


def check_sumset_path_agreement():
    rng = random.Random(202)
    for _ in range(30):
        m = rng.randint(1, 10)
        x = _random_dense(rng, m)
        y = _random_dense(rng, m)
        via_translate = sumset(x, y, method="translate")
        via_fwht = sumset(x, y, method="fwht")
        if via_translate != via_fwht:
            _fail("translate and transform sumsets disagree")
        if m <= 7 and via_translate != sumset(x, y, method="naive"):
            _fail("naive sumset disagrees")


def check_conv4_equals_4a():
    rng = random.Random(303)
    for _ in range(12):
        m = rng.randint(1, 10)
        a = _random_dense(rng, m)
        conv4_support(a, cross_check=True)  # raises if routes disagree


def check_doubling_coset_law():
    for m in (1, 2, 3):
        n = 1 << m
        for size in range(1, n + 1):
            for combo in combinations(range(n), size):
                a = DenseSet.from_indices(m, combo)
                aa = sumset(a, a)
                if aa.size < a.size:
                    _fail("|A+A| < |A|")
                x0 = combo[0]
                shifted = translate(a, x0)
                is_coset = is_subspace(shifted)
                if (aa.size == a.size) != is_coset:
                    _fail("|A+A| = |A| does not match the coset criterion")


def check_translate_kernel_lanes():
    rng = random.Random(404)
    for _ in range(25):
        m = rng.randint(1, 10)
        a = _random_dense(rng, m)
        shift = rng.randrange(1 << m)
        moved = translate(a, shift)
        if translate(moved, shift) != a:
            _fail("translation is not an involution")
        alt = _kernels_numpy.xor_translate_u8(a.bits, shift)
        if not np.array_equal(alt, moved.bits):
            _fail("kernel lanes disagree on translation")


def check_compress_roundtrip():
    rng = random.Random(505)
    for _ in range(20):
        n = rng.randint(1, 40)
        # rank is below size, so caps the span within the dense limit
        size = rng.randint(1, min(20, 1 << min(n, 20)))
        a = gen_random(n, size, rng.randrange(1 << 30))
        dense, emb = compress(a)
        if decompress(dense, emb) != a:
            _fail("compress/decompress round trip failed")
    for _ in range(15):
        m = rng.randint(1, 10)
        x = _random_dense(rng, m)
        gamma = rng.randrange(1, 1 << m)
        s0, _ = hyperplane_restrict(x, gamma, 0)
        s1, _ = hyperplane_restrict(x, gamma, 1)
        if s0.size + s1.size != x.size:
            _fail("hyperplane sides do not partition")


def check_pure_structure():
    rng = random.Random(606)
    for _ in range(10):
        m = rng.randint(1, 9)
        a = _random_dense(rng, m, min_size=max(1, (1 << m) // 16))
        res = pure_density_subspace(a)
        four = iterated_sumset(a, 4)
        w_dense = DenseSet.from_indices(res.w.ambient_dim, res.w.enumerate_values())
        if not is_subspace(w_dense):
            _fail("structure output is not a subspace")
        if int(four.bits[res.w.enumerate_values()].min()) != 1:
            _fail("structure output leaves the four-fold sumset")
        if res.codim > res.bound_budget:
            _fail("codimension exceeded its budget")


def check_doubling_structure():
    rng = random.Random(707)
    for _ in range(10):
        m = rng.randint(1, 9)
        a = _random_dense(rng, m, min_size=max(1, (1 << m) // 8))
        res = doubling_subspace(a)
        four = iterated_sumset(a, 4)
        if int(four.bits[res.w.enumerate_values()].min()) != 1:
            _fail("doubling-structure output leaves the four-fold sumset")
        if res.codim > res.bound_budget:
            _fail("codimension exceeded its budget")


def check_model_and_pullback():
    rng = random.Random(808)
    for _ in range(8):
        n = rng.randint(2, 36)
        size = rng.randint(1, 20)
        a = gen_random(n, size, rng.randrange(1 << 30))
        model = find_model(a, seed=rng.randrange(1 << 30))
        if not is_freiman_iso_linear(model.columns, a, model.s, spot_checks=200):
            _fail("model failed the isomorphism re-check")
        res = doubling_subspace(model.a_model)
        coset = pullback_coset(model, res.w)
        if coset.size != res.w.size:
            _fail("pullback size mismatch")


def check_cover_postconditions():
    rng = random.Random(909)
    for _ in range(10):
        m = rng.randint(1, 8)
        s = _random_dense(rng, m)
        b = _random_dense(rng, m)
        x = ruzsa_cover(s, b)
        bb = sumset(b, b)
        bits = np.zeros(1 << m, dtype=np.uint8)
        for xi in x.values:
            bits |= translate(bb, xi).bits
        if not bool(np.all(bits[s.indices()] == 1)):
            _fail("cover does not reach all of S")
        a = _random_dense(rng, m)
        report = chang_cover(a, Coset.of(0, Subspace(m, ())))
        cbits = np.zeros(1 << m, dtype=np.uint8)
        cbits[report.c.enumerate_values()] = 1
        if not bool(np.all(cbits[a.indices()] == 1)):
            _fail("grown coset does not contain A")


def check_pipeline_small():
    sub = gen_subspace(3, 6)
    rep = run_pipeline(sub, seed=1)
    if rep.final_ratio != 1:
        _fail("subspace pipeline ratio is not exactly 1")
    ext = gen_extremal(2, 3)
    rep = run_pipeline(ext, seed=1)
    if doubling_constant(rep.model.a_model) != Fraction(13, 6):
        _fail("extremal doubling constant is wrong")
    if rep.min_coset.size != 16:
        _fail("extremal minimal coset size is wrong")
    for i in range(3):
        a = gen_random(9, 40 + i, seed=50 + i)
        rep = run_pipeline(a, seed=i)
        for v in a.values:
            if not rep.final_coset.contains_value(v):
                _fail("pipeline final coset misses input points")


CHECKS = [
    ("fwht-involution-and-power-identity", check_fwht_involution_parseval),
    ("sumset-path-agreement", check_sumset_path_agreement),
    ("conv4-support-equals-iterated-sumset", check_conv4_equals_4a),
    ("doubling-one-iff-coset", check_doubling_coset_law),
    ("translation-kernel-lanes", check_translate_kernel_lanes),
    ("compress-and-restrict-roundtrips", check_compress_roundtrip),
    ("pure-density-structure-certificates", check_pure_structure),
    ("doubling-structure-certificates", check_doubling_structure),
    ("model-certificates-and-pullback", check_model_and_pullback),
    ("cover-postconditions", check_cover_postconditions),
    ("pipeline-end-to-end", check_pipeline_small),
]


def selftest(write=print) -> bool:
    """Run the full battery; one PASS/FAIL line per check, then a summary."""
    kernels.warmup()
    failures = 0
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as e:  # report and continue: the battery must finish
            failures += 1
            write(f"FAIL {name}: {e}")
        else:
            write(f"PASS {name}")
    total = len(CHECKS)
    write(f"{total - failures}/{total} checks passed")
    return failures == 0
