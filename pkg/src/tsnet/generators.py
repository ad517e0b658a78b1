"""Digital point generation.

Points are produced from generator matrices over GF(b): the base-b digit
column of the index ``n`` (least significant digit first) is multiplied by
each coordinate's matrix, and the resulting vector is read as the
fraction's digits (most significant first). With the identity matrix this
is the radical inverse.

Internally a :class:`PointSet` stores coordinates as scaled integers
``value * b**m`` in an ``(N, s)`` int64 array, which is what the kernels
operate on; :class:`~tsnet.badic.Point` objects are materialised on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from tsnet import _kernels
from tsnet.badic import DigitVector, Point, PreconditionError
from tsnet.gfpoly import PrimeFieldPoly, is_irreducible, is_prime, laurent_coeffs

INT64_DIGIT_LIMIT = 2**62


def _check_fits(b: int, m: int) -> None:
    if b**m > INT64_DIGIT_LIMIT:
        raise PreconditionError(f"{b}**{m} exceeds the int64 working range")


@dataclass(frozen=True, eq=False)
class PointSet:
    """Ordered points on the ``b**-m`` grid, stored as scaled integers."""

    base: int
    m: int
    coords: np.ndarray
    provenance: str = ""

    def __post_init__(self) -> None:
        _check_fits(self.base, self.m)
        X = np.ascontiguousarray(self.coords, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise PreconditionError(f"coords must be a non-empty (N, s) array, got shape {X.shape}")
        if X.min() < 0 or X.max() >= self.base**self.m:
            raise PreconditionError("coordinates outside [0, b**m)")
        X.setflags(write=False)
        object.__setattr__(self, "coords", X)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def point(self, n: int) -> Point:
        return Point.from_ints(self.coords[n], self.base, self.m)

    def points(self) -> list[Point]:
        return [self.point(n) for n in range(len(self))]

    def truncate(self, m: int) -> PointSet:
        """``[x_n]_m`` for every point."""
        if not 0 <= m <= self.m:
            raise PreconditionError(f"truncation length {m} outside [0, {self.m}]")
        return PointSet(self.base, m, self.coords // self.base ** (self.m - m),
                        f"{self.provenance} | truncate {m}")

    def shift(self, w: Point) -> PointSet:
        """Digital shift ``x_n (+) w`` of every point."""
        if w.dim != self.dim or w.base != self.base or w.precision != self.m:
            raise PreconditionError("shift must match the set's base, precision and dimension")
        W = np.array(w.to_ints(), dtype=np.int64)
        X = _kernels.digit_op(self.coords, W, self.base, self.m)
        return PointSet(self.base, self.m, X, f"{self.provenance} | shift {w}")

    def values(self) -> np.ndarray:
        """Float coordinates, for rendering only."""
        return self.coords / float(self.base**self.m)

    def same_multiset(self, other: PointSet) -> bool:
        if (self.base, self.m, self.coords.shape) != (other.base, other.m, other.coords.shape):
            return False
        a = self.coords[np.lexsort(self.coords.T[::-1])]
        b = other.coords[np.lexsort(other.coords.T[::-1])]
        return bool(np.array_equal(a, b))

    @classmethod
    def from_points(cls, pts: Sequence[Point], provenance: str = "") -> PointSet:
        if not pts:
            raise PreconditionError("empty point list")
        b, m = pts[0].base, pts[0].precision
        for p in pts:
            if p.base != b or p.precision != m or p.dim != pts[0].dim:
                raise PreconditionError("points differ in base, precision or dimension")
        return cls(b, m, np.array([p.to_ints() for p in pts], dtype=np.int64), provenance)


@dataclass(frozen=True, eq=False)
class GeneratorSystem:
    """``s`` generator matrices of size ``m x m`` over GF(b) plus declared parameters.

    ``u``/``e`` and ``t`` are claims; the checkers in :mod:`tsnet.verify`
    confirm them.
    """

    b: int
    m: int
    matrices: np.ndarray
    e: tuple[int, ...]
    u: int = 0
    t: int = 0
    polys: tuple[PrimeFieldPoly, ...] = field(default=())

    def __post_init__(self) -> None:
        if not is_prime(self.b):
            raise PreconditionError(f"base {self.b} is not prime")
        _check_fits(self.b, self.m)
        C = np.ascontiguousarray(self.matrices, dtype=np.int64)
        if C.ndim != 3 or C.shape[1:] != (self.m, self.m):
            raise PreconditionError(f"matrices must have shape (s, {self.m}, {self.m}), got {C.shape}")
        if C.size and (C.min() < 0 or C.max() >= self.b):
            raise PreconditionError("matrix entries outside [0, b)")
        if len(self.e) != C.shape[0] or any(e < 1 for e in self.e):
            raise PreconditionError("e must hold one positive entry per coordinate")
        if not 0 <= self.u <= self.m:
            raise PreconditionError("u must lie in [0, m]")
        C.setflags(write=False)
        object.__setattr__(self, "matrices", C)
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))

    @property
    def s(self) -> int:
        return self.matrices.shape[0]

    @property
    def e0(self) -> int:
        return sum(self.e)

    def describe(self) -> str:
        if self.polys:
            return f"niederreiter b={self.b} polys=({', '.join(p.human() for p in self.polys)}) m={self.m}"
        return f"matrices b={self.b} s={self.s} m={self.m}"

    def generate(self, start: int = 0, count: int | None = None) -> PointSet:
        """Points ``x_start .. x_{start+count-1}`` at full precision ``m``."""
        top = self.b**self.m
        if count is None:
            count = top - start
        if start < 0 or count < 1 or start + count > top:
            raise PreconditionError(f"indices [{start}, {start + count}) not within [0, {top})")
        b, m = self.b, self.m
        weights = b ** np.arange(m - 1, -1, -1, dtype=np.int64)
        X = np.empty((count, self.s), dtype=np.int64)
        chunk = 1 << 16
        for lo in range(0, count, chunk):
            n = np.arange(start + lo, start + min(lo + chunk, count), dtype=np.int64)
            ndigits = np.empty((n.size, m), dtype=np.int64)
            for r in range(m):
                ndigits[:, r] = (n // b**r) % b
            for i, C in enumerate(self.matrices):
                X[lo:lo + n.size, i] = ((ndigits @ C.T) % b) @ weights
        return PointSet(b, m, X, f"{self.describe()} n={start}..{start + count - 1}")


def digital_point(n: int, sys: GeneratorSystem) -> Point:
    """The ``n``-th point of the digital sequence defined by ``sys``."""
    b, m = sys.b, sys.m
    if not 0 <= n < b**m:
        raise PreconditionError(f"index {n} outside [0, {b}**{m})")
    col = [(n // b**r) % b for r in range(m)]
    coords = []
    for C in sys.matrices:
        digits = tuple(int(sum(int(C[j, r]) * col[r] for r in range(m)) % b) for j in range(m))
        coords.append(DigitVector(b, digits))
    return Point(tuple(coords))


def niederreiter_matrix(poly: PrimeFieldPoly, m: int) -> np.ndarray:
    """Generator matrix of one coordinate of the classical Niederreiter sequence.

    Row ``j`` (1-based) with ``j - 1 = q*e + k``, ``0 <= k < e = deg(poly)``,
    holds the first ``m`` expansion coefficients of ``x**(e-k-1) / poly**(q+1)``.
    """
    e = poly.degree
    rows = []
    for j in range(1, m + 1):
        q, k = divmod(j - 1, e)
        num = PrimeFieldPoly(poly.p, (0,) * (e - k - 1) + (1,))
        rows.append(laurent_coeffs(num, poly ** (q + 1), m))
    return np.array(rows, dtype=np.int64).reshape(m, m)


def build_niederreiter(b: int, polys: Sequence[PrimeFieldPoly], m: int) -> GeneratorSystem:
    """Classical Niederreiter system; ``e_i = deg p_i``, ``u = 0``, ``t = e0 - s``."""
    if not is_prime(b):
        raise PreconditionError(f"base {b} is not prime")
    if m < 1:
        raise PreconditionError("precision m must be >= 1")
    polys = tuple(polys)
    if not polys:
        raise PreconditionError("at least one generating polynomial is required")
    for p in polys:
        if p.p != b:
            raise PreconditionError(f"polynomial {p} is not over GF({b})")
        if not p.is_monic or p.degree < 1:
            raise PreconditionError(f"polynomial {p.human()} must be monic of degree >= 1")
        if not is_irreducible(p):
            raise PreconditionError(f"polynomial {p.human()} is reducible over GF({b})")
    if len({p.coeffs for p in polys}) != len(polys):
        raise PreconditionError("generating polynomials must be pairwise distinct")
    e = tuple(p.degree for p in polys)
    mats = np.stack([niederreiter_matrix(p, m) for p in polys])
    return GeneratorSystem(b, m, mats, e=e, u=0, t=sum(e) - len(e), polys=polys)


def block(sys: GeneratorSystem, k: int, m: int) -> PointSet:
    """The truncated points ``[x_n]_m`` for ``k*b**m <= n < (k+1)*b**m``."""
    b = sys.b
    if k < 0 or not 0 <= m <= sys.m or (k + 1) * b**m > b**sys.m:
        raise PreconditionError(f"block k={k}, m={m} not representable at precision {sys.m}")
    return sys.generate(k * b**m, b**m).truncate(m)


def vdc_coordinate(n: int, b: int, m: int) -> DigitVector:
    """Digits of ``n / b**m``."""
    return DigitVector.from_int(n, b, m)


def lift_with_index(ps: PointSet, Q: int, shift: Point, order: str = "index") -> PointSet:
    """Append the index coordinate ``n/b**m`` and apply a digital shift.

    ``order="index"`` gives point ``n`` as ``(x_n (+) w, (n (-) Q)/b**m (+) w_last)``;
    ``order="reindexed"`` gives ``(x_{n (+) Q} (+) w, n/b**m (+) w_last)``. The two
    are the same set, listed in different orders.
    """
    b, m = ps.base, ps.m
    N = b**m
    if len(ps) != N:
        raise PreconditionError(f"lift needs exactly {b}**{m} points, got {len(ps)}")
    if not 0 <= Q < N:
        raise PreconditionError(f"Q={Q} outside [0, {N})")
    if shift.dim != ps.dim + 1 or shift.base != b or shift.precision != m:
        raise PreconditionError("shift must have s+1 coordinates at the set's base and precision")
    n = np.arange(N, dtype=np.int64)
    if order == "index":
        xs = ps.coords
        last = _kernels.digit_op(n, Q, b, m, sign=-1)
    elif order == "reindexed":
        xs = ps.coords[_kernels.digit_op(n, Q, b, m)]
        last = n
    else:
        raise ValueError(f"unknown order {order!r}")
    lifted = PointSet(b, m, np.column_stack([xs, last]), f"{ps.provenance} | lift Q={Q} ({order})")
    return lifted.shift(shift)

