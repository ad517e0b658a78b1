"""Exact local and star discrepancy.

The local discrepancy of an anchored box ``[0, g_1) x ... x [0, g_s)`` is the
point count minus ``N`` times the volume. The star discrepancy is computed
exactly on the critical grid: on each axis the candidate corner values are
the distinct point coordinates plus 1. Every corner is evaluated twice, once
with the open box (count of ``x < g``) and once as the limit from above
(count of ``x <= g``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from tsnet import _kernels
from tsnet.badic import DigitVector, Point, PreconditionError
from tsnet.generators import PointSet
from tsnet.report import rational

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """The exact enumeration would exceed the configured comparison budget."""


@dataclass(frozen=True)
class Box:
    """Anchored box ``prod_i [0, gamma_i)``; ``full[i]`` marks ``gamma_i = 1``."""

    gamma: tuple[DigitVector, ...]
    full: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        gamma = tuple(self.gamma)
        full = tuple(self.full) if self.full else (False,) * len(gamma)
        if not gamma or len(full) != len(gamma):
            raise PreconditionError("box needs one bound (and one full-flag) per coordinate")
        if len({g.base for g in gamma}) != 1:
            raise PreconditionError("box bounds must share a base")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "full", full)

    @property
    def base(self) -> int:
        return self.gamma[0].base

    @property
    def dim(self) -> int:
        return len(self.gamma)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1) if f else g.value for g, f in zip(self.gamma, self.full))

    @property
    def volume(self) -> Fraction:
        out = Fraction(1)
        for v in self.values:
            out *= v
        return out

    def scaled(self, M: int) -> np.ndarray:
        """Upper bounds as integers over ``b**M``."""
        b = self.base
        out = []
        for g, f in zip(self.gamma, self.full):
            if g.precision > M:
                raise PreconditionError(f"box bound has {g.precision} digits, more than {M}")
            out.append(b**M if f else g.to_int() * b ** (M - g.precision))
        return np.array(out, dtype=np.int64)

    def __str__(self) -> str:
        return ",".join("1" if f else str(g) for g, f in zip(self.gamma, self.full))

    @classmethod
    def parse(cls, text: str, base: int | None = None) -> Box:
        """``"2:11,1"`` -> ``[0, 3/4) x [0, 1)``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        gamma, full = [], []
        for p in parts:
            if p == "1":
                full.append(True)
                gamma.append(None)
            else:
                gamma.append(DigitVector.parse(p))
                full.append(False)
        known = [g.base for g in gamma if g is not None]
        b = base if base is not None else (known[0] if known else None)
        if b is None:
            raise PreconditionError("base required for an all-ones box")
        gamma = [DigitVector(b, ()) if g is None else g for g in gamma]
        return cls(tuple(gamma), tuple(full))

    def to_dict(self) -> dict:
        return {"text": str(self), "values": [rational(v) for v in self.values]}


def _check_dims(ps_dim: int, box: Box) -> None:
    if ps_dim != box.dim:
        raise PreconditionError(f"dimension mismatch: points {ps_dim}, box {box.dim}")


def indicator(x: Point, J: Box) -> int:
    """1 iff every coordinate of ``x`` lies strictly below the box bound."""
    _check_dims(x.dim, J)
    return int(all(c.value < g for c, g in zip(x, J.values)))


def _count(ps: PointSet, J: Box, backend=None) -> int:
    _check_dims(ps.dim, J)
    if J.base != ps.base:
        raise PreconditionError(f"box base {J.base} differs from point base {ps.base}")
    M = max([ps.m] + [g.precision for g in J.gamma])
    X = ps.coords * ps.base ** (M - ps.m)
    return _kernels.box_count(X, J.scaled(M), backend=backend)


def local_discrepancy(ps: PointSet, J: Box, backend=None) -> Fraction:
    """``#{n : x_n in J} - N * Vol(J)``, exact."""
    return _count(ps, J, backend) - len(ps) * J.volume


def star_discrepancy_lower_witness(ps: PointSet, J: Box) -> Fraction:
    """``|local_discrepancy| / N``, a certified lower bound on the star discrepancy."""
    return abs(local_discrepancy(ps, J)) / len(ps)


@dataclass(frozen=True)
class StarDiscrepancy:
    value: Fraction
    corner: tuple[Fraction, ...]
    branch: str
    count: int

    def to_dict(self) -> dict:
        return {"value": rational(self.value), "witness_box": {
            "corner": [rational(c) for c in self.corner], "branch": self.branch,
            "count": self.count}}


def _grid(ps: PointSet) -> tuple[list[np.ndarray], np.ndarray]:
    top = ps.base**ps.m
    cands = [np.append(np.unique(ps.coords[:, i]), top) for i in range(ps.dim)]
    ranks = np.column_stack([np.searchsorted(c, ps.coords[:, i]) for i, c in enumerate(cands)])
    return cands, ranks


def star_discrepancy_exact(ps: PointSet, budget: int = DEFAULT_BUDGET, backend=None) -> StarDiscrepancy:
    """Exact ``sup_g |Delta(J_g)| / N`` over ``0 < g_i <= 1``.

    Ties go to the lexicographically smallest corner; at a corner the open
    branch is preferred over the closed one.
    """
    N, s = ps.coords.shape
    cands, ranks = _grid(ps)
    sizes = [len(c) for c in cands]
    work = int(np.prod(sizes, dtype=object)) * N
    if work > budget:
        raise BudgetExceeded(f"critical grid needs {work} comparisons, budget is {budget}")
    open_c, closed_c = _kernels.corner_counts(ranks, np.array(sizes), backend=backend)
    scale = ps.base ** (ps.m * s)
    # exact integer arithmetic; object dtype whenever int64 could overflow
    dtype = np.int64 if (scale * N * 4).bit_length() < 62 else object
    vol = np.ones(1, dtype=dtype)
    for c in cands:
        vol = np.multiply.outer(vol, c.astype(dtype)).ravel()
    target = vol * N
    d_open = np.abs(open_c.astype(dtype) * scale - target)
    d_closed = np.abs(closed_c.astype(dtype) * scale - target)
    best = max(d_open.max(), d_closed.max())
    flat = int(np.flatnonzero((d_open == best) | (d_closed == best))[0])
    branch = "open" if d_open[flat] == best else "closed"
    idx = np.unravel_index(flat, sizes)
    top = ps.base**ps.m
    corner = tuple(Fraction(int(cands[i][j]), top) for i, j in enumerate(idx))
    count = int(open_c[flat] if branch == "open" else closed_c[flat])
    return StarDiscrepancy(Fraction(int(best), scale * N), corner, branch, count)


def star_discrepancy_naive(points: Sequence[Point]) -> Fraction:
    """Reference value by direct enumeration with ``Fraction`` arithmetic.

    Independent of the kernel path; intended for small sets only.
    """
    N = len(points)
    s = points[0].dim
    vals = [p.values for p in points]
    axes = [sorted({v[i] for v in vals} | {Fraction(1)}) for i in range(s)]
    best = Fraction(0)
    for corner in itertools.product(*axes):
        vol = Fraction(1)
        for c in corner:
            vol *= c
        n_open = sum(1 for v in vals if all(v[i] < corner[i] for i in range(s)))
        n_closed = sum(1 for v in vals if all(v[i] <= corner[i] for i in range(s)))
        best = max(best, abs(n_open - N * vol), abs(n_closed - N * vol))
    return best / N
