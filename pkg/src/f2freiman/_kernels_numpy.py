"""Pure-numpy lane for the hot array kernels.

All kernels are exact integer computations.  Translation by a point is a
butterfly: one block swap per set bit of the translate, realized as an axis
flip on the (2,)*m view of the bit-vector.  The Walsh-Hadamard transform is
the usual in-place butterfly, vectorized one stage at a time.
"""

import numpy as np

__all__ = [
    "fwht_i64_inplace",
    "fwht_obj_inplace",
    "xor_translate_u8",
    "sumset_union_u8",
]


def _fwht_stages(v: np.ndarray) -> np.ndarray:
    n = v.shape[0]
    h = 1
    while h < n:
        w = v.reshape(-1, 2, h)
        top = w[:, 0, :].copy()
        w[:, 0, :] += w[:, 1, :]
        w[:, 1, :] *= -1
        w[:, 1, :] += top
        h <<= 1
    return v


def fwht_i64_inplace(v: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, in place, int64 arithmetic."""
    return _fwht_stages(v)


def fwht_obj_inplace(v: np.ndarray) -> np.ndarray:
    """Same butterfly on an object array of Python ints (arbitrary precision)."""
    return _fwht_stages(v)


def xor_translate_u8(bits: np.ndarray, a: int) -> np.ndarray:
    """New bit-vector of x -> bits[x ^ a], via per-bit block swaps."""
    n = bits.shape[0]
    if a == 0:
        return bits.copy()
    m = n.bit_length() - 1
    t = bits.reshape((2,) * m)
    axes = tuple(m - 1 - j for j in range(m) if (a >> j) & 1)
    return np.ascontiguousarray(np.flip(t, axes)).reshape(n)


def sumset_union_u8(larger: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """OR of translates of `larger` by each value in `xs`; stops once full."""
    n = larger.shape[0]
    acc = np.zeros(n, dtype=np.uint8)
    for a in xs:
        np.bitwise_or(acc, xor_translate_u8(larger, int(a)), out=acc)
        if int(acc.sum(dtype=np.int64)) == n:
            break
    return acc
