"""Numpy fallback for the z-stream kernel.

Same contract as the compiled module: blocks of int64 coefficient pairs for
z_0 .. z_{count-1}.  Digit counts are recomputed per block (vectorized over
the ~19 base-4 digit positions) instead of carried incrementally.
"""

import numpy as np

KERNEL_NAME = "numpy"
MAX_COUNT = 4 ** 38 + 1

_WA = np.array([1, 0, -1, -1, 0, 1], dtype=np.int64)
_WB = np.array([0, 1, 1, 0, -1, -1], dtype=np.int64)
_POW3 = np.array([3 ** i for i in range(40)], dtype=np.int64)


def _steps(k0: int, k1: int):
    """Step vectors (1+omega)**u * omega**(-2v) for k in [k0, k1)."""
    ks = np.arange(k0, k1, dtype=np.int64)
    u = np.zeros(ks.shape, dtype=np.int64)
    v = np.zeros(ks.shape, dtype=np.int64)
    ndig = max(1, (int(k1 - 1).bit_length() + 1) // 2)
    for j in range(ndig):
        d = (ks >> (2 * j)) & 3
        u += d == 1
        v += d == 2
    half = u >> 1
    e = (half - 2 * v) % 6
    wa = _WA[e]
    wb = _WB[e]
    odd = (u & 1).astype(bool)
    ta = np.where(odd, wa - wb, wa)
    tb = np.where(odd, wa + 2 * wb, wb)
    p = _POW3[half]
    return p * ta, p * tb


def fill(count, block=65536):
    """Yield (a, b) int64 array pairs covering z_0 .. z_{count-1}."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count > MAX_COUNT:
        raise OverflowError(f"count {count} exceeds the int64-safe bound {MAX_COUNT}")
    if block <= 0:
        raise ValueError("block must be positive")
    za = zb = 0
    done = 0
    while done < count:
        n = int(min(block, count - done))
        sa, sb = _steps(done, done + n)
        a = np.empty(n, dtype=np.int64)
        b = np.empty(n, dtype=np.int64)
        a[0] = za
        b[0] = zb
        if n > 1:
            np.cumsum(sa[:-1], out=sa[:-1])
            np.cumsum(sb[:-1], out=sb[:-1])
            a[1:] = za + sa[:-1]
            b[1:] = zb + sb[:-1]
        za = int(a[-1]) + int(sa[-1])
        zb = int(b[-1]) + int(sb[-1])
        done += n
        yield a, b
