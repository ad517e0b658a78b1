"""Constructive discrepancy lower-bound certificates.

For a d-admissible (t, m, s)-net a specific anchored box ``J_gamma`` and a
digital shift ``w`` are built such that the shifted net provably has
local discrepancy at most a negative, explicitly computable bound. This
module derives the digit schedule, builds ``gamma`` and ``w``, measures the
local discrepancy exactly and compares it with the bound.

Two certificates are provided:

* ``verify_theorem1``: the net itself, shift ``w = [gamma (-) x_0]_m``.
* ``verify_theorem2_for_Q``: a sequence prefix lifted by the index coordinate
  ``n / b**m``, reindexed by ``n (+) Q``; one witness per ``Q``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from tsnet import _kernels
from tsnet.badic import (
    DigitVector,
    Point,
    PreconditionError,
    digital_negate,
    digits_needed,
    digital_sub,
    int_digital_add,
    truncate,
)
from tsnet.discrepancy import Box, local_discrepancy
from tsnet.generators import PointSet, lift_with_index
from tsnet.gfpoly import PrimeFieldPoly
from tsnet.report import rational
from tsnet.verify import default_jobs, is_admissible_net, is_admissible_sequence_prefix

# pairwise admissibility scans are run automatically up to this many points
AUTO_ADMISSIBILITY_LIMIT = 2**12


class WitnessParamError(ValueError):
    """Parameters outside the domain of the witness construction."""


class EpsilonRangeError(WitnessParamError):
    pass


class TailTooShortError(WitnessParamError):
    """The last coordinate's free prefix length would drop below 1."""


class HypothesisBoundError(WitnessParamError):
    """``m`` is below the lower bound the construction requires."""


class ThresholdError(WitnessParamError):
    """``m`` is below the theorem's stated threshold."""


class ConstructionError(RuntimeError):
    """A property the construction guarantees did not hold: an implementation bug."""


@dataclass(frozen=True)
class WitnessParams:
    s_dot: int
    d: int
    t: int
    d0: int
    e_hat: int
    epsilon: Fraction
    m: int
    m_dot: int
    m_ddot: tuple[int, ...]
    m_dot_i: tuple[int, ...]
    B_sets: tuple[frozenset[int], ...]
    B: int
    m_bound: Fraction
    m_bound_ok: bool

    def to_dict(self) -> dict:
        return {
            "s_dot": self.s_dot, "d": self.d, "t": self.t, "d0": self.d0, "e_hat": self.e_hat,
            "epsilon": rational(self.epsilon), "m": self.m, "m_dot": self.m_dot,
            "m_ddot": list(self.m_ddot), "m_dot_i": list(self.m_dot_i),
            "B_sets": [sorted(s) for s in self.B_sets], "B": self.B,
            "m_bound": rational(self.m_bound), "m_bound_ok": self.m_bound_ok,
        }


def derive_params(s_dot: int, d: int, t: int, m: int, e_hat: int, epsilon: Fraction | int,
                  B_sets: Sequence[Iterable[int]] | None = None, strict: bool = True) -> WitnessParams:
    """Digit schedule of the witness box.

    ``m_dot = floor(m*eps)``; the first ``s_dot-1`` coordinates get
    ``d0*e_hat*m_dot`` digits starting at offset 0, the last one gets the
    remaining ``m - (s_dot-1)*m_dot_1 - t`` offset digits plus ``m_dot_1``.
    With ``strict=False`` a violated lower bound on ``m`` is only flagged.
    """
    if s_dot < 2:
        raise WitnessParamError(f"s_dot must be >= 2, got {s_dot}")
    if d < 1 or t < 0 or e_hat < 1 or m < 1:
        raise WitnessParamError(f"need d >= 1, t >= 0, e_hat >= 1, m >= 1 (got {d}, {t}, {e_hat}, {m})")
    epsilon = Fraction(epsilon)
    d0 = d + t
    eps_max = Fraction(1, 2 * d0 * e_hat * (s_dot - 1))
    if not 0 < epsilon <= eps_max:
        raise EpsilonRangeError(f"epsilon={epsilon} outside (0, {eps_max}]")
    m_dot = math.floor(m * epsilon)
    m_dot_1 = d0 * e_hat * m_dot
    tail = m - (s_dot - 1) * m_dot_1 - t
    if tail < 1:
        raise TailTooShortError(f"m - (s_dot-1)*m_dot_1 - t = {tail} < 1")
    if B_sets is None:
        B_sets = [()] * s_dot
    sets = tuple(frozenset(int(j) for j in bs) for bs in B_sets)
    if len(sets) != s_dot or any(j < 0 or j >= m_dot for bs in sets for j in bs):
        raise WitnessParamError(f"need {s_dot} excluded-index sets within [0, {m_dot})")
    B = sum(len(bs) for bs in sets)
    m_bound = 4 / epsilon * (s_dot - 1) * (1 + s_dot * B) + 2 * t
    ok = m >= m_bound
    if strict and not ok:
        raise HypothesisBoundError(f"m={m} below required {m_bound}")
    m_ddot = (0,) * (s_dot - 1) + (tail,)
    m_dot_i = (m_dot_1,) * (s_dot - 1) + (tail + m_dot_1,)
    return WitnessParams(s_dot, d, t, d0, e_hat, epsilon, m, m_dot, m_ddot, m_dot_i,
                         sets, B, m_bound, ok)


def theorem1_epsilon(s: int, d0: int) -> Fraction:
    if s < 2 or d0 < 1:
        raise WitnessParamError(f"need s >= 2 and d0 >= 1 (got {s}, {d0})")
    return Fraction(1, 2 * (s - 1) * d0)


def theorem2_epsilon(s: int, d0: int) -> Fraction:
    if s < 1 or d0 < 1:
        raise WitnessParamError(f"need s >= 1 and d0 >= 1 (got {s}, {d0})")
    return Fraction(1, 2 * s * d0)


def gamma_digits(p: WitnessParams, base: int = 2) -> Box:
    """The witness box.

    In every non-excluded block the digit pattern repeats ``d0-1`` zeros
    followed by a one, starting after the coordinate's offset ``m_ddot_i``.
    Digits before the offset and inside excluded blocks are zero.
    """
    gamma = []
    for i in range(p.s_dot):
        digits = [0] * p.m_dot_i[i]
        for jh in range(p.m_dot):
            if jh in p.B_sets[i]:
                continue
            for jb in range(p.e_hat):
                pos = p.m_ddot[i] + p.d0 * (jh * p.e_hat + jb) + p.d0
                digits[pos - 1] = 1
        gamma.append(DigitVector(base, tuple(digits)))
    return Box(tuple(gamma))


def k_constant(d: int, t: int, s: int) -> int:
    return 4 * (d + t) * (s - 1) ** 2


def theorem1_bound(d: int, t: int, s: int, m: int, b: int) -> tuple[int, Fraction]:
    """``(K, b**-d * K**-(s-1) * m**(s-1))``; requires ``m >= 9 (d+t) (s-1)**2``."""
    if s < 2:
        raise WitnessParamError("the net certificate needs s >= 2")
    threshold = 9 * (d + t) * (s - 1) ** 2
    if m < threshold:
        raise ThresholdError(f"m={m} below threshold {threshold}")
    K = k_constant(d, t, s)
    return K, Fraction(1, b**d) * Fraction(1, K ** (s - 1)) * m ** (s - 1)


def theorem2_bound(d: int, t: int, s: int, m: int, b: int) -> tuple[int, Fraction]:
    """``(K, b**-d * K**-s * m**s)`` with ``K = K_{d,t,s+1}``; requires ``m >= 9 (d+t) s**2``."""
    if s < 1:
        raise WitnessParamError("the sequence certificate needs s >= 1")
    threshold = 9 * (d + t) * s**2
    if m < threshold:
        raise ThresholdError(f"m={m} below threshold {threshold}")
    K = k_constant(d, t, s + 1)
    return K, Fraction(1, b**d) * Fraction(1, K**s) * m**s


def lemma1_bound(p: WitnessParams, b: int) -> Fraction:
    """Upper bound on the witness box's local discrepancy (negative when ``B == 0``)."""
    main = Fraction(1, b**p.d) * (p.e_hat * p.epsilon / (2 * (p.s_dot - 1))) ** (p.s_dot - 1) \
        * p.m ** (p.s_dot - 1)
    slack = Fraction(b ** (p.t + p.s_dot) * p.d0 * p.e_hat * p.B) * Fraction(p.m) ** (p.s_dot - 2)
    return -main + slack


def theorem1_shift(x0: Point, gamma: Box, m: int) -> Point:
    """``w = [gamma (-) x_0]_m``, so that ``x_0 (+) w`` starts with the digits of ``gamma``."""
    if x0.dim != gamma.dim or x0.base != gamma.base:
        raise PreconditionError("point and box differ in dimension or base")
    if x0.precision < m:
        raise PreconditionError(f"point has {x0.precision} digits, need {m}")
    coords = []
    for x, g in zip(x0, gamma.gamma):
        coords.append(digital_sub(g.padded(m), truncate(x, m)))
    return Point(tuple(coords))


def theorem3_params(polys: Sequence[PrimeFieldPoly]) -> tuple[int, int]:
    """``(d, t) = (e0, e0 - s)`` with ``e0`` the total degree."""
    if not polys:
        raise WitnessParamError("at least one polynomial required")
    e0 = sum(p.degree for p in polys)
    return e0, e0 - len(polys)


def _check_prefix(ps: PointSet, gamma: Box, p: WitnessParams, n0: int) -> None:
    x = ps.point(n0)
    for i, g in enumerate(gamma.gamma):
        if truncate(x[i], p.m_dot_i[i]) != g:
            raise ConstructionError(
                f"shifted point {n0} does not start with gamma in coordinate {i}: {x[i]} vs {g}")


@dataclass
class WitnessReport:
    theorem: int
    base: int
    m: int
    d: int
    t: int
    params: WitnessParams
    gamma: Box
    shift: Point
    n0: int
    delta: Fraction
    lemma_bound: Fraction
    K: int
    theorem_bound: Fraction
    Q: int | None = None
    admissibility: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.delta <= self.lemma_bound and self.admissibility.get("ok", True) is not False

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem, "base": self.base, "m": self.m, "d": self.d, "t": self.t,
            "params": self.params.to_dict(), "gamma": [str(g) for g in self.gamma.gamma],
            "shift": [str(c) for c in self.shift], "n0": self.n0,
            "delta": rational(self.delta), "lemma_bound": rational(self.lemma_bound),
            "K": self.K, "theorem_bound": rational(self.theorem_bound),
            "certified_lower_bound": rational(abs(self.delta)),
            "admissibility": self.admissibility, "passed": self.passed,
        }
        if self.Q is not None:
            out["Q"] = self.Q
        return out


def _net_from(ps: PointSet, m: int | None) -> tuple[PointSet, int]:
    b = ps.base
    if m is None:
        m = digits_needed(len(ps), b)
        if b**m != len(ps):
            raise PreconditionError(f"{len(ps)} points is not a power of {b}; pass m explicitly")
    N = b**m
    if len(ps) < N or ps.m < m:
        raise PreconditionError(f"need {N} points with >= {m} digits, have {len(ps)} with {ps.m}")
    net = PointSet(b, ps.m, ps.coords[:N], ps.provenance).truncate(m)
    return net, m


def verify_theorem1(net: PointSet, d: int, t: int, m: int | None = None,
                    check_admissibility: bool | None = None) -> WitnessReport:
    """Build and evaluate the witness ``(w, J_gamma)`` for a d-admissible (t, m, s)-net."""
    net, m = _net_from(net, m)
    b, s = net.base, net.dim
    K, tb = theorem1_bound(d, t, s, m, b)
    params = derive_params(s, d, t, m, 1, theorem1_epsilon(s, d + t))
    gamma = gamma_digits(params, b)
    w = theorem1_shift(net.point(0), gamma, m)
    shifted = net.shift(w)
    _check_prefix(shifted, gamma, params, 0)
    delta = local_discrepancy(shifted, gamma)
    adm = {"checked": False}
    if check_admissibility or (check_admissibility is None and len(net) <= AUTO_ADMISSIBILITY_LIMIT):
        res = is_admissible_net(net, d)
        adm = {"checked": True, **res.to_dict()}
    return WitnessReport(1, b, m, d, t, params, gamma, w, 0, delta, lemma1_bound(params, b), K, tb,
                         admissibility=adm)


class Theorem2Witness:
    """Per-``Q`` witnesses for a sequence prefix of length ``b**m``.

    The parameters and box depend only on ``(s, d, t, m)``; ``Q`` selects the
    reindexing ``n -> n (+) Q`` and with it the shift.
    """

    def __init__(self, seq: PointSet, d: int, t: int, m: int | None = None,
                 check_admissibility: bool | None = None):
        self.seq_full = seq
        self.net, self.m = _net_from(seq, m)
        self.b, self.s = self.net.base, self.net.dim
        self.d, self.t = d, t
        self.K, self.theorem_bound = theorem2_bound(d, t, self.s, self.m, self.b)
        self.params = derive_params(self.s + 1, d, t, self.m, 1, theorem2_epsilon(self.s, d + t))
        self.gamma = gamma_digits(self.params, self.b)
        self.lemma_bound = lemma1_bound(self.params, self.b)
        self.G = self.gamma.scaled(self.m)
        self.admissibility = {"checked": False}
        N = self.b**self.m
        if check_admissibility or (check_admissibility is None and N <= AUTO_ADMISSIBILITY_LIMIT):
            seq_res = is_admissible_sequence_prefix(seq, d, N)
            zero = Point(tuple(DigitVector.zeros(self.b, self.m) for _ in range(self.s + 1)))
            lifted = lift_with_index(self.net, 0, zero)
            lift_res = is_admissible_net(lifted, d)
            self.admissibility = {"checked": True, "ok": bool(seq_res),
                                  "sequence": seq_res.to_dict(), "lifted_net": lift_res.to_dict()}

    def n0(self, Q: int) -> int:
        return int_digital_add(Q, int(self.G[-1]), self.b, self.m)

    def shift(self, Q: int) -> Point:
        b, m = self.b, self.m
        x = self.net.point(self.n0(Q))
        head = [digital_sub(g.padded(m), xc) for g, xc in zip(self.gamma.gamma[:-1], x)]
        last = digital_negate(DigitVector.from_int(Q, b, m))
        return Point(tuple(head) + (last,))

    def for_Q(self, Q: int) -> WitnessReport:
        w = self.shift(Q)
        lifted = lift_with_index(self.net, 0, w)
        n0 = self.n0(Q)
        _check_prefix(lifted, self.gamma, self.params, n0)
        delta = local_discrepancy(lifted, self.gamma)
        return WitnessReport(2, self.b, self.m, self.d, self.t, self.params, self.gamma, w, n0,
                             delta, self.lemma_bound, self.K, self.theorem_bound, Q=Q,
                             admissibility=self.admissibility)

    def _deltas(self, Qs: Sequence[int]) -> list[tuple[int, Fraction]]:
        b, m = self.b, self.m
        N = b**m
        X = self.net.coords
        n = np.arange(N, dtype=np.int64)
        vol_N = N * self.gamma.volume
        G = self.G
        out = []
        for Q in Qs:
            n0 = self.n0(Q)
            W = _kernels.digit_op(G[:-1], X[n0], b, m, sign=-1)
            cols = _kernels.digit_op(X, W, b, m)
            last = _kernels.digit_op(n, Q, b, m, sign=-1)
            Y = np.column_stack([cols, last])
            for i in range(self.s + 1):
                if Y[n0, i] // b ** (m - self.params.m_dot_i[i]) != G[i] // b ** (m - self.params.m_dot_i[i]):
                    raise ConstructionError(f"Q={Q}: shifted point {n0} does not start with gamma")
            out.append((Q, _kernels.box_count(Y, G) - vol_N))
        return out

    def scan(self, Qs: Iterable[int] | None = None, jobs: int | None = None) -> Theorem2Scan:
        """Local discrepancy of the witness for every ``Q`` (default: all of ``[0, b**m)``)."""
        Qs = list(range(self.b**self.m)) if Qs is None else list(Qs)
        jobs = jobs or default_jobs()
        if jobs > 1 and len(Qs) > jobs:
            chunks = [Qs[i::jobs] for i in range(jobs)]
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(self._deltas, chunks))
            results = sorted(r for part in parts for r in part)
        else:
            results = self._deltas(Qs)
        return Theorem2Scan(self, results)


@dataclass
class Theorem2Scan:
    witness: Theorem2Witness
    results: list[tuple[int, Fraction]]

    @property
    def failures(self) -> list[int]:
        bound = self.witness.lemma_bound
        return [Q for Q, dl in self.results if dl > bound]

    @property
    def worst(self) -> tuple[int, Fraction]:
        return max(self.results, key=lambda r: (r[1], -r[0]))

    @property
    def passed(self) -> bool:
        return not self.failures and self.witness.admissibility.get("ok", True) is not False

    def to_dict(self, per_q: bool = True) -> dict:
        w = self.witness
        worst_q, worst_delta = self.worst
        out = {
            "theorem": 2, "base": w.b, "m": w.m, "d": w.d, "t": w.t, "s": w.s,
            "params": w.params.to_dict(), "gamma": [str(g) for g in w.gamma.gamma],
            "lemma_bound": rational(w.lemma_bound), "K": w.K,
            "theorem_bound": rational(w.theorem_bound), "Q_count": len(self.results),
            "worst": {"Q": worst_q, "delta": rational(worst_delta)},
            "failing_Q_count": len(self.failures), "admissibility": w.admissibility,
            "passed": self.passed,
        }
        if per_q:
            out["per_Q"] = [{"Q": Q, "delta": rational(dl)} for Q, dl in self.results]
        return out


def verify_theorem2_for_Q(seq: PointSet, Q: int, d: int, t: int, m: int | None = None,
                          check_admissibility: bool | None = None) -> WitnessReport:
    """Witness for one reindexing ``Q`` of a d-admissible (t, s)-sequence prefix."""
    return Theorem2Witness(seq, d, t, m, check_admissibility).for_Q(Q)

