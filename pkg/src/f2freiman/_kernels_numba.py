"""Numba lane for the hot array kernels.

Same contracts as the numpy lane (exact integer results, bit-for-bit equal);
the butterflies are written as explicit block-swap loops which numba compiles
to tight machine code.  Kept single-threaded so outputs are deterministic.
"""

import numpy as np
from numba import njit

__all__ = [
    "fwht_i64_inplace",
    "xor_translate_u8",
    "sumset_union_u8",
]

JIT_OPTIONS = {"cache": True, "nogil": True}


@njit(**JIT_OPTIONS)
def fwht_i64_inplace(v):
    n = v.shape[0]
    h = 1
    while h < n:
        for base in range(0, n, h << 1):
            for i in range(base, base + h):
                x = v[i]
                y = v[i + h]
                v[i] = x + y
                v[i + h] = x - y
        h <<= 1
    return v


@njit(**JIT_OPTIONS)
def xor_translate_u8(bits, a):
    # one sequential write pass; the xor keeps reads inside aligned blocks
    n = bits.shape[0]
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        out[i] = bits[i ^ a]
    return out


@njit(**JIT_OPTIONS)
def sumset_union_u8(larger, xs):
    # translate, or-accumulate, and count fused into one pass per translate
    n = larger.shape[0]
    acc = np.zeros(n, dtype=np.uint8)
    for t in range(xs.shape[0]):
        a = xs[t]
        cnt = 0
        for i in range(n):
            acc[i] |= larger[i ^ a]
            cnt += acc[i]
        if cnt == n:
            break
    return acc
