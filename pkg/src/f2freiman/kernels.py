"""Backend selection for the hot kernels.

Two interchangeable lanes compute the same exact integer results:

  * ``numba`` -- @njit block-swap butterflies (default when numba imports)
  * ``numpy`` -- pure vectorized numpy

Set ``F2FREIMAN_BACKEND=numpy`` (or ``numba``) to force a lane.  The
arbitrary-precision Walsh-Hadamard path always runs through the numpy lane
since it operates on object arrays of Python ints.
"""

import os

import numpy as np

from . import _kernels_numpy as _numpy_lane
from .errors import F2Error

__all__ = [
    "BACKEND",
    "fwht_i64_inplace",
    "fwht_obj_inplace",
    "xor_translate_u8",
    "sumset_union_u8",
    "warmup",
]

_requested = os.environ.get("F2FREIMAN_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise F2Error(f"unknown F2FREIMAN_BACKEND value: {_requested!r}")

if _requested == "numpy":
    _lane = _numpy_lane
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _numba_lane

        _lane = _numba_lane
        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        _lane = _numpy_lane
        BACKEND = "numpy"

fwht_i64_inplace = _lane.fwht_i64_inplace
xor_translate_u8 = _lane.xor_translate_u8
sumset_union_u8 = _lane.sumset_union_u8
fwht_obj_inplace = _numpy_lane.fwht_obj_inplace


def warmup() -> None:
    """Force one tiny call through every kernel (triggers JIT compilation)."""
    v = np.array([3, -1, 2, 5], dtype=np.int64)
    fwht_i64_inplace(v.copy())
    bits = np.array([1, 0, 1, 0], dtype=np.uint8)
    xor_translate_u8(bits, 1)
    sumset_union_u8(bits, np.array([0, 2], dtype=np.int64))
