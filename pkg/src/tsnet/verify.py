"""Exhaustive checkers for the net, sequence and admissibility properties.

Each checker returns a small result object that is truthy on success and
carries the first counterexample (canonical enumeration order) on failure.
All comparisons are exact.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from tsnet import _kernels
from tsnet.badic import PreconditionError, digits_needed
from tsnet.generators import GeneratorSystem, PointSet
from tsnet.report import rational


def default_jobs() -> int:
    env = os.environ.get("TSNET_JOBS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class ElementaryInterval:
    """``prod_i [a_i b**-d_i, (a_i + 1) b**-d_i)``."""

    base: int
    d: tuple[int, ...]
    a: tuple[int, ...]

    @property
    def volume(self) -> Fraction:
        return Fraction(1, self.base ** sum(self.d))

    def bounds(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(a, self.base**d), Fraction(a + 1, self.base**d)) for d, a in zip(self.d, self.a)]

    def to_dict(self) -> dict:
        return {"d": list(self.d), "a": list(self.a)}


@dataclass(frozen=True)
class NetCheck:
    ok: bool
    m: int
    u: int
    e: tuple[int, ...]
    shapes_checked: int
    interval: ElementaryInterval | None = None
    count: int | None = None
    expected: int | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"ok": self.ok, "m": self.m, "u": self.u, "e": list(self.e),
               "shapes_checked": self.shapes_checked}
        if self.interval is not None:
            out["counterexample"] = {**self.interval.to_dict(), "count": self.count,
                                     "expected": self.expected}
        return out


def _shapes(e: Sequence[int], budget: int):
    """All ``d`` with ``e_i | d_i`` and ``sum(d) <= budget`` in lexicographic order."""
    ranges = [range(0, budget + 1, ei) for ei in e]
    for d in itertools.product(*ranges):
        if sum(d) <= budget:
            yield d


def is_net(ps: PointSet, u: int, e: Sequence[int], m: int | None = None, backend=None) -> NetCheck:
    """Check that ``ps`` is a ``(u, m, e, s)``-net in base ``ps.base``.

    Every elementary interval with ``e_i | d_i`` and volume at least
    ``b**(u-m)`` must hold exactly ``b**(m - sum d)`` points.
    """
    b = ps.base
    e = tuple(int(x) for x in e)
    if len(e) != ps.dim:
        raise PreconditionError(f"e has {len(e)} entries for a {ps.dim}-dimensional set")
    if m is None:
        m = digits_needed(len(ps), b) if len(ps) > 1 else 0
    if len(ps) != b**m:
        raise PreconditionError(f"a net with m={m} needs {b**m} points, got {len(ps)}")
    if m > ps.m:
        raise PreconditionError(f"points carry only {ps.m} digits, need {m}")
    if not 0 <= u <= m:
        raise PreconditionError(f"u={u} outside [0, {m}]")
    X = ps.coords // b ** (ps.m - m)
    checked = 0
    for d in _shapes(e, m - u):
        checked += 1
        divisors = np.array([b ** (m - di) for di in d], dtype=np.int64)
        radices = [b**di for di in d]
        strides = np.array([int(np.prod(radices[i + 1:], dtype=object)) for i in range(len(d))],
                           dtype=np.int64)
        ncells = int(np.prod(radices, dtype=object))
        counts = _kernels.cell_counts(X, divisors, strides, ncells, backend=backend)
        expected = b ** (m - sum(d))
        bad = np.flatnonzero(counts != expected)
        if bad.size:
            cell = int(bad[0])
            a = tuple(int(cell // int(st)) % r for st, r in zip(strides, radices))
            return NetCheck(False, m, u, e, checked, ElementaryInterval(b, d, a),
                            int(counts[cell]), expected)
    return NetCheck(True, m, u, e, checked)


@dataclass(frozen=True)
class SequenceCheck:
    ok: bool
    u: int
    e: tuple[int, ...]
    m_max: int
    k_max: int
    blocks_checked: int
    failed_m: int | None = None
    failed_k: int | None = None
    failure: NetCheck | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"ok": self.ok, "u": self.u, "e": list(self.e),
               "verified_up_to": {"m_max": self.m_max, "k_max": self.k_max},
               "blocks_checked": self.blocks_checked}
        if self.failure is not None:
            out["failed_block"] = {"m": self.failed_m, "k": self.failed_k, **self.failure.to_dict()}
        return out


def is_sequence_prefix(source: GeneratorSystem | PointSet, u: int, e: Sequence[int],
                       m_max: int, k_max: int, backend=None) -> SequenceCheck:
    """Net property of every block ``[x_n]_m``, ``k b**m <= n < (k+1) b**m``,
    for ``u < m <= m_max`` and ``0 <= k <= k_max``.

    This is a finite window of an unbounded condition; the result records the
    window it covers.
    """
    e = tuple(int(x) for x in e)
    if m_max <= u:
        return SequenceCheck(True, u, e, m_max, k_max, 0)
    if k_max < 0:
        raise PreconditionError("k_max must be >= 0")
    if isinstance(source, GeneratorSystem):
        b = source.b
        needed = (k_max + 1) * b**m_max
        if needed > b**source.m:
            raise PreconditionError(f"need {needed} points, system precision gives {b**source.m}")
        ps = source.generate(0, needed)
    else:
        ps = source
        b = ps.base
        needed = (k_max + 1) * b**m_max
    if len(ps) < needed:
        raise PreconditionError(f"need {needed} points, have {len(ps)}")
    if ps.m < m_max:
        raise PreconditionError(f"points carry {ps.m} digits, need {m_max}")
    checked = 0
    for m in range(u + 1, m_max + 1):
        size = b**m
        for k in range(k_max + 1):
            blk = PointSet(b, ps.m, ps.coords[k * size:(k + 1) * size]).truncate(m)
            res = is_net(blk, u, e, m, backend=backend)
            checked += 1
            if not res:
                return SequenceCheck(False, u, e, m_max, k_max, checked, m, k, res)
    return SequenceCheck(True, u, e, m_max, k_max, checked)


@dataclass(frozen=True)
class AdmissibilityCheck:
    ok: bool
    kind: str
    d: int
    threshold: Fraction
    min_value: Fraction | None
    pair: tuple[int, int] | None
    comparison: str = field(default="")

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "kind": self.kind, "d": self.d, "comparison": self.comparison,
                "threshold": rational(self.threshold),
                "min_value": None if self.min_value is None else rational(self.min_value),
                "argmin_pair": None if self.pair is None else list(self.pair)}


def _split_k(N: int, jobs: int) -> list[tuple[int, int]]:
    # contiguous k-ranges holding roughly equal numbers of (k, n) pairs
    if jobs <= 1 or N < 64:
        return [(0, N)]
    total = N * (N - 1) // 2
    bounds, acc, lo = [], 0, 0
    for k in range(N):
        acc += N - 1 - k
        if acc >= total * (len(bounds) + 1) / jobs and len(bounds) < jobs - 1:
            bounds.append((lo, k + 1))
            lo = k + 1
    bounds.append((lo, N))
    return bounds


def _scan(X: np.ndarray, b: int, ndig: int, idx_ndig: int, weight_index: bool,
          jobs: int, backend) -> tuple[int, int, int]:
    N = X.shape[0]
    ranges = _split_k(N, jobs)
    if len(ranges) == 1:
        return _kernels.pair_min(X, b, ndig, idx_ndig, weight_index, 0, N, backend=backend)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(
            lambda r: _kernels.pair_min(X, b, ndig, idx_ndig, weight_index, r[0], r[1], backend=backend),
            ranges))
    return min(parts)


def _valuation(b: int, exponent: int) -> Fraction:
    return Fraction(b) ** exponent


def is_admissible_net(ps: PointSet, d: int, m: int | None = None, jobs: int | None = None,
                      backend=None) -> AdmissibilityCheck:
    """``min_{k<n} prod_i ||x_n^(i) (-) x_k^(i)||_b > b**(-m-d)`` (strict)."""
    b = ps.base
    if m is None:
        m = digits_needed(len(ps), b) if len(ps) > 1 else 0
    if len(ps) != b**m or m > ps.m:
        raise PreconditionError(f"need {b**m} points carrying >= {m} digits")
    threshold = Fraction(1, b ** (m + d))
    X = ps.coords // b ** (ps.m - m)
    best, k, n = _scan(X, b, m, 1, False, jobs or default_jobs(), backend)
    if k < 0:
        return AdmissibilityCheck(True, "net", d, threshold, None, None, ">")
    if best == _kernels.NEG:
        return AdmissibilityCheck(False, "net", d, threshold, Fraction(0), (k, n), ">")
    value = _valuation(b, best - ps.dim * m)
    return AdmissibilityCheck(value > threshold, "net", d, threshold, value, (k, n), ">")


def is_admissible_sequence_prefix(ps: PointSet, d: int, N: int | None = None,
                                  jobs: int | None = None, backend=None) -> AdmissibilityCheck:
    """``||n (-) k||_b * prod_i ||x_n^(i) (-) x_k^(i)||_b >= b**-d`` for all ``k < n < N``.

    Valuations are taken at the set's full precision.
    """
    b = ps.base
    N = len(ps) if N is None else N
    if N > len(ps):
        raise PreconditionError(f"requested {N} points, have {len(ps)}")
    threshold = Fraction(1, b**d)
    X = ps.coords[:N]
    best, k, n = _scan(X, b, ps.m, digits_needed(N, b), True, jobs or default_jobs(), backend)
    if k < 0:
        return AdmissibilityCheck(True, "sequence", d, threshold, None, None, ">=")
    if best == _kernels.NEG:
        return AdmissibilityCheck(False, "sequence", d, threshold, Fraction(0), (k, n), ">=")
    value = _valuation(b, best - ps.dim * ps.m)
    return AdmissibilityCheck(value >= threshold, "sequence", d, threshold, value, (k, n), ">=")


def lemma2_admissibility_level(e: Sequence[int]) -> int:
    """Admissibility level ``e0 = sum(e)`` of a ``(0, e, s)``-sequence."""
    if any(x < 1 for x in e):
        raise PreconditionError("entries of e must be >= 1")
    return sum(e)
