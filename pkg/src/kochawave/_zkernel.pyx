# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled z-stream kernel.

Emits the vertex recurrence z_{k+1} = z_k + (1+omega)**u * omega**(-2*v)
(u, v = counts of base-4 digits 1 and 2 of k) as int64 coefficient blocks.
The digit counters are maintained incrementally, so each vertex costs O(1)
amortized.  int64 overflow is excluded up front by MAX_COUNT: coefficients
of z_k for k <= 4**38 stay below 2 * 3**38 < 2**63.
"""

import numpy as np

KERNEL_NAME = "cython"
MAX_COUNT = 4 ** 38 + 1

cdef long long _WA[6]
cdef long long _WB[6]
cdef long long _POW3[40]

_WA[0], _WA[1], _WA[2], _WA[3], _WA[4], _WA[5] = 1, 0, -1, -1, 0, 1
_WB[0], _WB[1], _WB[2], _WB[3], _WB[4], _WB[5] = 0, 1, 1, 0, -1, -1

cdef int _i
cdef long long _p = 1
for _i in range(40):
    _POW3[_i] = _p
    _p *= 3


cdef void _fill_block(unsigned char[::1] digits, long long[::1] st,
                      long long[::1] va, long long[::1] vb, Py_ssize_t n):
    cdef long long u = st[0], v = st[1], za = st[2], zb = st[3]
    cdef long long p, wa, wb, t
    cdef Py_ssize_t i
    cdef int pos, d, e, half
    for i in range(n):
        va[i] = za
        vb[i] = zb
        # step k -> k+1 uses the digit counts of k ...
        half = <int> (u >> 1)
        e = <int> ((half - 2 * v) % 6)
        if e < 0:
            e += 6
        wa = _WA[e]
        wb = _WB[e]
        if u & 1:
            t = wa - wb
            wb = wa + 2 * wb
            wa = t
        p = _POW3[half]
        za += p * wa
        zb += p * wb
        # ... then the counters move to k+1
        pos = 0
        while digits[pos] == 3:
            digits[pos] = 0
            pos += 1
        d = digits[pos]
        digits[pos] = d + 1
        if d == 0:
            u += 1
        elif d == 1:
            u -= 1
            v += 1
        else:
            v -= 1
    st[0] = u
    st[1] = v
    st[2] = za
    st[3] = zb


def fill(count, block=65536):
    """Yield (a, b) int64 array pairs covering z_0 .. z_{count-1}."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count > MAX_COUNT:
        raise OverflowError(f"count {count} exceeds the int64-safe bound {MAX_COUNT}")
    if block <= 0:
        raise ValueError("block must be positive")
    digits = np.zeros(80, dtype=np.uint8)
    state = np.zeros(4, dtype=np.int64)
    done = 0
    while done < count:
        n = int(min(block, count - done))
        a = np.empty(n, dtype=np.int64)
        b = np.empty(n, dtype=np.int64)
        _fill_block(digits, state, a, b, n)
        done += n
        yield a, b
