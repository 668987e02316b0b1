"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The active backend is chosen once at import time.  Setting the environment
variable ``BELLGA_DISABLE_NUMBA=1`` (or running without numba installed)
selects the numpy path.  Both flavours stay importable under explicit names
(``*_numba`` / ``*_numpy``) so tests and benchmarks can compare them.

Kernels:

* ``counter_signs``  - counter-based +/-1 draws; draw ``i`` depends only on
  ``(seed, i)``.
* ``block_moments``  - shifted first/second moment sums of one sample block.
* ``batch_geometric_product`` - row-wise Cl(3,0) products via an index/sign
  table.
"""
from __future__ import annotations

import os

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def _env_disabled() -> bool:
    return os.environ.get("BELLGA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    if _env_disabled():
        raise ImportError("numba disabled by BELLGA_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


def splitmix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (reference scalar version)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int) -> int:
    return splitmix64(seed)


def sign_from_counter(seed: int, index: int) -> int:
    """Scalar reference: the +/-1 drawn for sample ``index`` of stream ``seed``."""
    z = splitmix64(stream_key(seed) + (index + 1) * GAMMA)
    return -1 if z >> 63 else 1


# ---------------------------------------------------------------- numpy path

def counter_signs_numpy(seed: int, start: int, count: int) -> np.ndarray:
    key = np.uint64(stream_key(seed))
    ctr = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = key + ctr * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        z = z ^ (z >> np.uint64(31))
    bit = (z >> np.uint64(63)).astype(np.int8)
    return (1 - 2 * bit).astype(np.int8)


def block_moments_numpy(values: np.ndarray, shift: np.ndarray) -> np.ndarray:
    d = values - shift
    out = np.empty((2, values.shape[1]))
    out[0] = d.sum(axis=0)
    out[1] = (d * d).sum(axis=0)
    return out


def batch_geometric_product_numpy(x: np.ndarray, y: np.ndarray,
                                  index: np.ndarray, sign: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    for i in range(8):
        for j in range(8):
            out[:, index[i, j]] += sign[i, j] * x[:, i] * y[:, j]
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _counter_signs_nb(key, start, count):
        out = np.empty(count, dtype=np.int8)
        gamma = np.uint64(GAMMA)
        m1 = np.uint64(MIX1)
        m2 = np.uint64(MIX2)
        s30 = np.uint64(30)
        s27 = np.uint64(27)
        s31 = np.uint64(31)
        s63 = np.uint64(63)
        for i in range(count):
            z = key + np.uint64(start + i + 1) * gamma
            z = (z ^ (z >> s30)) * m1
            z = (z ^ (z >> s27)) * m2
            z = z ^ (z >> s31)
            out[i] = np.int8(1) - np.int8(2) * np.int8(z >> s63)
        return out

    @njit(cache=True, nogil=True)
    def _block_moments_nb(values, shift):
        m, k = values.shape
        out = np.zeros((2, k))
        for c in range(k):
            # Neumaier compensated sums
            s1 = 0.0
            c1 = 0.0
            s2 = 0.0
            c2 = 0.0
            for r in range(m):
                d = values[r, c] - shift[c]
                t = s1 + d
                if abs(s1) >= abs(d):
                    c1 += (s1 - t) + d
                else:
                    c1 += (d - t) + s1
                s1 = t
                q = d * d
                t = s2 + q
                if abs(s2) >= abs(q):
                    c2 += (s2 - t) + q
                else:
                    c2 += (q - t) + s2
                s2 = t
            out[0, c] = s1 + c1
            out[1, c] = s2 + c2
        return out

    @njit(cache=True, nogil=True)
    def _batch_gp_nb(x, y, index, sign):
        m = x.shape[0]
        out = np.zeros((m, 8))
        for r in range(m):
            for i in range(8):
                xi = x[r, i]
                if xi == 0.0:
                    continue
                for j in range(8):
                    out[r, index[i, j]] += sign[i, j] * xi * y[r, j]
        return out

    def counter_signs_numba(seed: int, start: int, count: int) -> np.ndarray:
        return _counter_signs_nb(np.uint64(stream_key(seed)), np.int64(start), np.int64(count))

    def block_moments_numba(values: np.ndarray, shift: np.ndarray) -> np.ndarray:
        return _block_moments_nb(np.ascontiguousarray(values, dtype=np.float64),
                                 np.ascontiguousarray(shift, dtype=np.float64))

    def batch_geometric_product_numba(x: np.ndarray, y: np.ndarray,
                                      index: np.ndarray, sign: np.ndarray) -> np.ndarray:
        return _batch_gp_nb(np.ascontiguousarray(x, dtype=np.float64),
                            np.ascontiguousarray(y, dtype=np.float64), index, sign)

    counter_signs = counter_signs_numba
    block_moments = block_moments_numba
    batch_geometric_product = batch_geometric_product_numba
else:
    counter_signs = counter_signs_numpy
    block_moments = block_moments_numpy
    batch_geometric_product = batch_geometric_product_numpy
