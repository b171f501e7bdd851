import random

import pytest

from f2freiman import (
    Coset,
    DenseSet,
    DimensionMismatchError,
    EmptySetError,
    PointSet,
    Subspace,
    chang_cover,
    doubling_constant,
    iterated_sumset,
    minimal_coset_oracle,
    rref_basis,
    ruzsa_cover,
    sumset,
)

from conftest import coset_union, random_dense


def brute_disjoint(chosen, b_vals):
    translates = [frozenset(x ^ v for v in b_vals) for x in chosen]
    seen = set()
    for t in translates:
        if seen & t:
            return False
        seen |= t
    return True


# ---------------------------------------------------------------------------
# greedy covering
# ---------------------------------------------------------------------------


def test_ruzsa_cover_subspace_collapses_to_first_point():
    s = DenseSet.from_indices(5, range(8))
    x = ruzsa_cover(s, s)
    assert list(x.values) == [0]


def test_ruzsa_cover_singleton_b_returns_s():
    s = DenseSet.from_indices(4, [1, 5, 9])
    x = ruzsa_cover(s, DenseSet.from_indices(4, [0]))
    assert list(x.values) == [1, 5, 9]


def test_ruzsa_cover_two_cosets():
    # S = two cosets of B's subspace: one accepted point per coset
    b = DenseSet.from_indices(4, [0, 1])
    s = DenseSet.from_indices(4, [0, 1, 8, 9])
    x = ruzsa_cover(s, b)
    assert list(x.values) == [0, 8]


def test_ruzsa_cover_random_postconditions():
    rng = random.Random(3)
    for _ in range(40):
        m = rng.randint(1, 10)
        s = random_dense(rng, m)
        b = random_dense(rng, m)
        x = ruzsa_cover(s, b)
        b_vals = [int(v) for v in b.indices()]
        chosen = [int(v) for v in x.values]
        # disjointness, maximality, packing: all via independent set algebra
        assert brute_disjoint(chosen, b_vals)
        reach = {c ^ u ^ v for c in chosen for u in b_vals for v in b_vals}
        assert set(int(v) for v in s.indices()) <= reach
        assert x.size * b.size <= sumset(s, b).size
        # greedy scan order: each chosen point is not reachable from earlier ones
        for i, c in enumerate(chosen):
            early = {e ^ u ^ v for e in chosen[:i] for u in b_vals for v in b_vals}
            assert c not in early


def test_ruzsa_cover_rejects_bad_inputs():
    with pytest.raises(DimensionMismatchError):
        ruzsa_cover(DenseSet.full(2), DenseSet.full(3))
    with pytest.raises(EmptySetError):
        ruzsa_cover(DenseSet.full(2), DenseSet.empty(2))


# ---------------------------------------------------------------------------
# iterated covering
# ---------------------------------------------------------------------------


def check_cover(a: DenseSet, rep) -> None:
    # containment
    for v in a.indices():
        assert rep.c.contains_value(int(v))
    # Q's directions survive
    for row in rep.q.subspace.basis:
        assert rep.c.subspace.contains_value(row)
    # bookkeeping
    assert rep.a_size == a.size
    assert rep.overhead_dim == rep.c.subspace.dim - rep.q.subspace.dim
    assert rep.final_ratio * a.size == rep.c.size
    assert len(rep.round_sizes) <= 2
    assert rep.round_sizes[-1] == 1


def test_chang_cover_subspace_q_equals_a():
    a = DenseSet.from_indices(6, range(8))
    q = Coset.of(0, rref_basis([1, 2, 4], 6))
    rep = chang_cover(a, q)
    assert rep.overhead_dim == 0
    assert rep.c.size == 8
    assert rep.round_sizes == (1,)
    assert rep.final_ratio == 1
    check_cover(a, rep)


def test_chang_cover_single_coset_needs_no_growth():
    # A inside one coset of Q's subspace, Q itself elsewhere in 4A
    a = DenseSet.from_indices(5, [4, 5, 6, 7])
    q = Coset.of(0, rref_basis([1, 2], 5))  # 4A = span{1,2}; Q = that subspace
    rep = chang_cover(a, q)
    assert rep.overhead_dim == 0
    assert rep.round_sizes == (1,)
    assert set(int(v) for v in rep.c.enumerate_values()) == {4, 5, 6, 7}
    check_cover(a, rep)


def test_chang_cover_grows_once_then_collapses():
    # two cosets of Q's subspace force one absorption round
    a = DenseSet.from_indices(5, [0, 1, 8, 9])
    q = Coset.of(0, rref_basis([1], 5))
    rep = chang_cover(a, q)
    assert rep.round_sizes == (2, 1)
    assert rep.overhead_dim == 1
    check_cover(a, rep)


def test_chang_cover_point_q():
    # Q = {0}: the cover must still find a coset containing A
    a = DenseSet.from_indices(4, [3, 5, 6])
    q = Coset.of(0, Subspace(4, ()))
    rep = chang_cover(a, q)
    check_cover(a, rep)
    assert rep.eta.numerator == 1 and rep.eta.denominator == 3


def test_chang_cover_dim_zero_space():
    a = DenseSet.full(0)
    q = Coset.of(0, Subspace(0, ()))
    rep = chang_cover(a, q)
    assert rep.overhead_dim == 0
    assert rep.final_ratio == 1


def test_chang_cover_random_postconditions():
    rng = random.Random(7)
    for _ in range(25):
        m = rng.randint(1, 9)
        a = random_dense(rng, m)
        four = iterated_sumset(a, 4)
        # draw Q inside 4A: a point of 4A plus a few directions within 4A,
        # falling back to a single point when the span escapes 4A
        vals = [int(v) for v in four.indices()]
        rep_val = rng.choice(vals)
        dirs = [rng.choice(vals) ^ rep_val for _ in range(rng.randint(0, 3))]
        sub = rref_basis(dirs, m)
        if not all(rep_val ^ int(v) in four for v in sub.enumerate_values()):
            sub = Subspace(m, ())
        rep = chang_cover(a, Coset.of(rep_val, sub))
        check_cover(a, rep)


def test_chang_cover_union_instances_have_small_overhead():
    # A = union of k cosets of a known V; Q = V sits inside 4A by construction
    rng = random.Random(11)
    for m, codim, k in ((8, 4, 3), (10, 5, 4)):
        rows = []
        while len(rows) < m - codim:
            v = rng.randrange(1, 1 << m)
            if rref_basis(rows + [v], m).dim == len(rows) + 1:
                rows.append(v)
        sub = rref_basis(rows, m)
        reps = rng.sample(range(1 << m), k)
        points = {r ^ int(v) for r in reps for v in sub.enumerate_values()}
        a = DenseSet.from_indices(m, points)
        rep = chang_cover(a, Coset.of(0, sub))
        check_cover(a, rep)
        # one covering point per coset, so absorption adds at most k-1 dims
        assert rep.overhead_dim <= k - 1
        assert rep.c.size <= (1 << sub.dim) << (k - 1)


def test_chang_cover_rejects_q_outside_4a():
    a = DenseSet.from_indices(4, [0, 1])
    q = Coset.of(8, Subspace(4, ()))
    with pytest.raises(ValueError):
        chang_cover(a, q)


def test_chang_cover_rejects_bad_dims():
    with pytest.raises(DimensionMismatchError):
        chang_cover(DenseSet.full(3), Coset.of(0, Subspace(4, ())))
    with pytest.raises(EmptySetError):
        chang_cover(DenseSet.empty(3), Coset.of(0, Subspace(3, ())))


def test_cover_report_json_shape():
    a = DenseSet.from_indices(5, [0, 1, 8, 9])
    rep = chang_cover(a, Coset.of(0, rref_basis([1], 5)))
    d = rep.to_json_dict()
    assert set(d) == {
        "eta", "overhead_dim", "round_sizes", "q_dim", "c_dim",
        "c_rep", "c_basis", "final_ratio",
    }
    assert d["c_rep"].startswith("0x")
    assert "/" in d["eta"] or d["eta"].isdigit()


# ---------------------------------------------------------------------------
# minimal-coset ground truth
# ---------------------------------------------------------------------------


def test_minimal_coset_oracle_examples():
    a = PointSet.from_iterable(4, [0, 1, 2, 3, 4, 8])
    c = minimal_coset_oracle(a)
    assert c.size == 16
    b = PointSet.from_iterable(4, [5, 7])
    c = minimal_coset_oracle(b)
    assert c.size == 2
    assert c.contains_value(5) and c.contains_value(7)


def test_cover_never_beats_the_minimal_coset():
    rng = random.Random(13)
    for _ in range(10):
        m = rng.randint(2, 8)
        a = random_dense(rng, m, min_size=2)
        q = Coset.of(0, Subspace(m, ()))
        vals = [int(v) for v in iterated_sumset(a, 4).indices()]
        if 0 not in vals:
            continue
        rep = chang_cover(a, q)
        minimal = minimal_coset_oracle(
            PointSet.from_iterable(m, (int(v) for v in a.indices()))
        )
        assert rep.c.size >= minimal.size
