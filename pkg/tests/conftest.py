import random

import pytest

from f2freiman import DenseSet, warmup

# one line per acceptance criterion, re-emitted after the run so the
# pass/fail verdicts are visible even under captured stdout
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the jit lane once so timed tests measure steady state
    warmup()


def random_dense(rng: random.Random, m: int, min_size: int = 1) -> DenseSet:
    size = rng.randint(min_size, 1 << m)
    return DenseSet.from_indices(m, rng.sample(range(1 << m), size))


def coset_union(rng: random.Random, m: int, codim: int, k: int, drop: float = 0.0) -> DenseSet:
    """Union of k cosets of a random codim-`codim` subspace, optionally with
    a deterministic fraction of points removed.  Doubling stays small."""
    rows = []
    while len(rows) < m - codim:
        v = rng.randrange(1, 1 << m)
        probe = rows + [v]
        if _rank(probe) == len(probe):
            rows.append(v)
    members = [0]
    for row in rows:
        members.extend([x ^ row for x in members])
    reps = rng.sample(range(1 << m), k)
    points = set()
    for rep in reps:
        points.update(rep ^ x for x in members)
    if drop:
        keep = rng.sample(sorted(points), max(1, int(len(points) * (1 - drop))))
        points = set(keep)
    return DenseSet.from_indices(m, points)


def _rank(vectors) -> int:
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)
