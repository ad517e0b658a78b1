"""Hot inner loops: pairwise valuation scans, cell counting, box counting.

Every kernel exists twice, as a numba ``@njit`` loop and as a vectorised
numpy routine. The active variant is picked once at import time from the
``TSNET_BACKEND`` environment variable (``numba`` by default, ``numpy`` to
force the fallback). Both variants are exposed through ``KERNELS`` so tests
and the benchmark can run them side by side.

Coordinates are passed as scaled integers ``X = value * b**m``; all
arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

# floor-log sentinel for a zero argument; any sum containing it stays far
# below every reachable valuation exponent
NEG = -(1 << 40)

_requested = os.environ.get("TSNET_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"TSNET_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numba" if (_requested == "numba" and numba is not None) else "numpy"


# ---------------------------------------------------------------------------
# scalar helpers (plain python, jitted below when numba is present)
# ---------------------------------------------------------------------------

def _digit_sub_scalar(x, y, b, ndig):
    if b == 2:
        return x ^ y
    out = 0
    p = 1
    for _ in range(ndig):
        out += (((x // p) % b - (y // p) % b) % b) * p
        p *= b
    return out


def _flog_scalar(v, b):
    if v <= 0:
        return NEG
    k = 0
    while v >= b:
        v //= b
        k += 1
    return k


# ---------------------------------------------------------------------------
# loop kernels
# ---------------------------------------------------------------------------

def _pair_min_loop(X, b, ndig, idx_ndig, weight_index, k_lo, k_hi):
    N, s = X.shape
    best = 1 << 60
    bk = -1
    bn = -1
    for k in range(k_lo, k_hi):
        for n in range(k + 1, N):
            tot = 0
            zero = False
            for i in range(s):
                dv = _digit_sub(X[n, i], X[k, i], b, ndig)
                if dv == 0:
                    zero = True
                    break
                tot += _flog(dv, b)
            if zero:
                return NEG, k, n
            if weight_index:
                tot += _flog(_digit_sub(n, k, b, idx_ndig), b)
            if tot < best:
                best = tot
                bk = k
                bn = n
    return best, bk, bn


def _cell_counts_loop(X, divisors, strides, ncells):
    N, s = X.shape
    counts = np.zeros(ncells, dtype=np.int64)
    for n in range(N):
        c = 0
        for i in range(s):
            c += (X[n, i] // divisors[i]) * strides[i]
        counts[c] += 1
    return counts


def _box_count_loop(X, G, closed):
    N, s = X.shape
    total = 0
    for n in range(N):
        inside = True
        for i in range(s):
            if closed:
                if X[n, i] > G[i]:
                    inside = False
                    break
            elif X[n, i] >= G[i]:
                inside = False
                break
        if inside:
            total += 1
    return total


def _corner_counts_loop(ranks, sizes):
    # ranks[n, i]: index of point n's coordinate i in axis i's sorted candidates.
    # open count at corner c: #{n : ranks[n,i] < c_i for all i}
    # closed count:          #{n : ranks[n,i] <= c_i for all i}
    N, s = ranks.shape
    total = 1
    for i in range(s):
        total *= sizes[i]
    open_c = np.zeros(total, dtype=np.int64)
    closed_c = np.zeros(total, dtype=np.int64)
    corner = np.zeros(s, dtype=np.int64)
    for flat in range(total):
        rem = flat
        for i in range(s - 1, -1, -1):
            corner[i] = rem % sizes[i]
            rem //= sizes[i]
        co = 0
        cc = 0
        for n in range(N):
            o = True
            c = True
            for i in range(s):
                r = ranks[n, i]
                if r > corner[i]:
                    o = False
                    c = False
                    break
                if r == corner[i]:
                    o = False
            if o:
                co += 1
            if c:
                cc += 1
        open_c[flat] = co
        closed_c[flat] = cc
    return open_c, closed_c


if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)
    _digit_sub = _jit(_digit_sub_scalar)
    _flog = _jit(_flog_scalar)
    _nb_pair_min = _jit(_pair_min_loop)
    _nb_cell_counts = _jit(_cell_counts_loop)
    _nb_box_count = _jit(_box_count_loop)
    _nb_corner_counts = _jit(_corner_counts_loop)
else:  # pragma: no cover
    _digit_sub = _digit_sub_scalar
    _flog = _flog_scalar


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------

def digit_op(x, y, b: int, ndig: int, sign: int = 1):
    """Carry-free digitwise ``x + sign*y (mod b)`` on scaled integer arrays."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if b == 2:
        return x ^ y
    out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    p = 1
    for _ in range(ndig):
        out += (((x // p) % b + sign * ((y // p) % b)) % b) * p
        p *= b
    return out


def floor_log(v, b: int):
    """``floor(log_b v)`` elementwise for integer arrays, ``NEG`` where ``v == 0``."""
    v = np.asarray(v, dtype=np.int64)
    powers = [1]
    while powers[-1] <= np.iinfo(np.int64).max // b:
        powers.append(powers[-1] * b)
    k = np.searchsorted(np.array(powers, dtype=np.int64), v, side="right") - 1
    return np.where(v > 0, k, NEG)


def _np_pair_min(X, b, ndig, idx_ndig, weight_index, k_lo, k_hi):
    N, s = X.shape
    best, bk, bn = 1 << 60, -1, -1
    idx = np.arange(N, dtype=np.int64)
    for k in range(k_lo, k_hi):
        if k + 1 >= N:
            break
        D = digit_op(X[k + 1:], X[k], b, ndig, sign=-1)
        zero = (D == 0).any(axis=1)
        if zero.any():
            return NEG, k, k + 1 + int(np.argmax(zero))
        tot = floor_log(D, b).sum(axis=1)
        if weight_index:
            tot = tot + floor_log(digit_op(idx[k + 1:], k, b, idx_ndig, sign=-1), b)
        j = int(np.argmin(tot))
        if tot[j] < best:
            best, bk, bn = int(tot[j]), k, k + 1 + j
    return best, bk, bn


def _np_cell_counts(X, divisors, strides, ncells):
    cells = ((X // divisors) * strides).sum(axis=1)
    return np.bincount(cells, minlength=ncells).astype(np.int64)


def _np_box_count(X, G, closed):
    inside = (X <= G) if closed else (X < G)
    return int(inside.all(axis=1).sum())


def _np_corner_counts(ranks, sizes):
    N, s = ranks.shape
    open_c = np.ones((N,) + tuple(int(z) for z in sizes), dtype=np.int64)
    closed_c = open_c.copy()
    for i in range(s):
        r = ranks[:, i].reshape([N] + [1] * s)
        gshape = [1] * (s + 1)
        gshape[i + 1] = int(sizes[i])
        g = np.arange(sizes[i], dtype=np.int64).reshape(gshape)
        open_c = open_c * (r < g)
        closed_c = closed_c * (r <= g)
    return open_c.sum(axis=0).ravel(), closed_c.sum(axis=0).ravel()


KERNELS = {
    "numpy": {
        "pair_min": _np_pair_min,
        "cell_counts": _np_cell_counts,
        "box_count": _np_box_count,
        "corner_counts": _np_corner_counts,
    },
}
if numba is not None:
    KERNELS["numba"] = {
        "pair_min": _nb_pair_min,
        "cell_counts": _nb_cell_counts,
        "box_count": _nb_box_count,
        "corner_counts": _nb_corner_counts,
    }


def _kernel(backend, name):
    key = backend or BACKEND
    if key not in KERNELS:
        raise ValueError(f"unknown or unavailable backend {key!r}; have {sorted(KERNELS)}")
    return KERNELS[key][name]


def _as_i64(X):
    return np.ascontiguousarray(X, dtype=np.int64)


def pair_min(X, b, ndig, idx_ndig=1, weight_index=False, k_lo=0, k_hi=None, backend=None):
    """Minimum over ``k < n`` of the summed floor-logs of ``X[n] - X[k]`` (digitwise).

    Returns ``(exponent_sum, k, n)`` for the first minimiser in ``(k, n)``
    lexicographic order; ``exponent_sum == NEG`` signals a zero difference in
    some coordinate. With ``weight_index`` the floor-log of ``n - k``
    (digitwise over ``idx_ndig`` digits) is added to every pair.
    """
    X = _as_i64(X)
    if k_hi is None:
        k_hi = X.shape[0]
    fn = _kernel(backend, "pair_min")
    best, k, n = fn(X, int(b), int(ndig), int(idx_ndig), bool(weight_index), int(k_lo), int(k_hi))
    return int(best), int(k), int(n)


def cell_counts(X, divisors, strides, ncells, backend=None):
    fn = _kernel(backend, "cell_counts")
    return fn(_as_i64(X), _as_i64(divisors), _as_i64(strides), int(ncells))


def box_count(X, G, closed=False, backend=None):
    fn = _kernel(backend, "box_count")
    return int(fn(_as_i64(X), _as_i64(G), bool(closed)))


def corner_counts(ranks, sizes, backend=None):
    fn = _kernel(backend, "corner_counts")
    return fn(_as_i64(ranks), _as_i64(sizes))
