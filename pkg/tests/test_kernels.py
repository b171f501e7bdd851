import random
import subprocess
import sys

import numpy as np
import pytest

from f2freiman import _kernels_numpy as lane_np
from f2freiman.kernels import BACKEND, warmup

try:
    from f2freiman import _kernels_numba as lane_nb
except ImportError:  # pragma: no cover - numba is a hard dependency here
    lane_nb = None


needs_numba = pytest.mark.skipif(lane_nb is None, reason="numba lane unavailable")


def test_backend_is_known():
    assert BACKEND in ("numba", "numpy")
    warmup()  # idempotent and cheap after the session fixture


@needs_numba
def test_fwht_lanes_agree():
    rng = random.Random(3)
    for m in range(0, 13):
        v = np.array(
            [rng.randint(-1000, 1000) for _ in range(1 << m)], dtype=np.int64
        )
        a = lane_np.fwht_i64_inplace(v.copy())
        b = lane_nb.fwht_i64_inplace(v.copy())
        assert np.array_equal(a, b)


@needs_numba
def test_translate_lanes_agree():
    rng = random.Random(5)
    for m in range(1, 12):
        bits = np.array(
            [rng.randint(0, 1) for _ in range(1 << m)], dtype=np.uint8
        )
        for _ in range(5):
            shift = rng.randrange(1 << m)
            a = lane_np.xor_translate_u8(bits.copy(), shift)
            b = lane_nb.xor_translate_u8(bits.copy(), shift)
            assert np.array_equal(a, b)


@needs_numba
def test_sumset_union_lanes_agree():
    rng = random.Random(7)
    for m in range(1, 11):
        bits = np.array(
            [rng.randint(0, 1) for _ in range(1 << m)], dtype=np.uint8
        )
        xs = np.array(
            sorted(rng.sample(range(1 << m), rng.randint(1, min(8, 1 << m)))),
            dtype=np.int64,
        )
        a = lane_np.sumset_union_u8(bits.copy(), xs.copy())
        b = lane_nb.sumset_union_u8(bits.copy(), xs.copy())
        assert np.array_equal(a, b)


def test_translate_kernel_matches_definition():
    rng = random.Random(9)
    for m in range(1, 10):
        bits = np.array([rng.randint(0, 1) for _ in range(1 << m)], dtype=np.uint8)
        shift = rng.randrange(1 << m)
        out = lane_np.xor_translate_u8(bits.copy(), shift)
        expect = np.zeros_like(bits)
        for v in range(1 << m):
            expect[v ^ shift] = bits[v]
        assert np.array_equal(out, expect)


def _run_with_backend(value: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-c", "from f2freiman.kernels import BACKEND; print(BACKEND)"],
        env={"F2FREIMAN_BACKEND": value, "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        timeout=240,
    )


def test_env_flag_forces_numpy_lane():
    proc = _run_with_backend("numpy")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "numpy"


@needs_numba
def test_env_flag_forces_numba_lane():
    proc = _run_with_backend("numba")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "numba"


def test_env_flag_rejects_unknown_value():
    proc = _run_with_backend("cuda")
    assert proc.returncode != 0
    assert "F2FREIMAN_BACKEND" in proc.stderr
