"""Polynomials over a prime field GF(p).

Coefficients are stored lowest degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple. Only what the Niederreiter
builder needs is provided: ring arithmetic, trial-division irreducibility,
and the coefficients of a rational function expanded in powers of ``1/x``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeFieldPoly:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        c = [int(a) % self.p for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: PrimeFieldPoly) -> PrimeFieldPoly:
        return poly_mul(self, other)

    def __add__(self, other: PrimeFieldPoly) -> PrimeFieldPoly:
        _same_field(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PrimeFieldPoly(self.p, tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: PrimeFieldPoly) -> PrimeFieldPoly:
        return self + PrimeFieldPoly(other.p, tuple(-c for c in other.coeffs))

    def __pow__(self, k: int) -> PrimeFieldPoly:
        out = PrimeFieldPoly(self.p, (1,))
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        return f"{self.p}:[{','.join(str(c) for c in self.coeffs)}]"

    def human(self) -> str:
        """Human form, highest degree first, e.g. ``x^2+x+1``."""
        if self.is_zero:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(c) if (c != 1 or k == 0) else ""
            terms.append(coef + mono)
        return "+".join(terms)


def _same_field(a: PrimeFieldPoly, b: PrimeFieldPoly) -> None:
    if a.p != b.p:
        raise ValueError(f"moduli differ: {a.p} != {b.p}")


def poly_mul(a: PrimeFieldPoly, b: PrimeFieldPoly) -> PrimeFieldPoly:
    _same_field(a, b)
    if a.is_zero or b.is_zero:
        return PrimeFieldPoly(a.p, ())
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return PrimeFieldPoly(a.p, tuple(out))


def poly_divmod(a: PrimeFieldPoly, b: PrimeFieldPoly) -> tuple[PrimeFieldPoly, PrimeFieldPoly]:
    _same_field(a, b)
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    p = a.p
    inv = pow(b.coeffs[-1], p - 2, p)
    rem = list(a.coeffs)
    db = b.degree
    quot = [0] * max(len(rem) - db, 0)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * inv % p
        if c:
            quot[k - db] = c
            for i, bc in enumerate(b.coeffs):
                rem[k - db + i] = (rem[k - db + i] - c * bc) % p
    return PrimeFieldPoly(p, tuple(quot)), PrimeFieldPoly(p, tuple(rem[:db]))


def monic_polys(p: int, degree: int):
    """All monic polynomials of exactly ``degree`` over GF(p)."""
    for low in itertools.product(range(p), repeat=degree):
        yield PrimeFieldPoly(p, low + (1,))


def is_irreducible(f: PrimeFieldPoly) -> bool:
    """Trial division by every monic polynomial of degree ``1 .. deg(f)//2``."""
    if f.degree < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    for k in range(1, f.degree // 2 + 1):
        for g in monic_polys(f.p, k):
            if poly_divmod(f, g)[1].is_zero:
                return False
    return True


def laurent_coeffs(numerator: PrimeFieldPoly, denominator: PrimeFieldPoly, count: int) -> list[int]:
    """Coefficients ``a_1 .. a_count`` of ``x**-1 .. x**-count`` in ``num/den``.

    The expansion is taken in powers of ``1/x``; terms of non-negative degree
    (the polynomial part) are ignored.

    >>> laurent_coeffs(PrimeFieldPoly(2, (1,)), PrimeFieldPoly(2, (1, 1)), 4)
    [1, 1, 1, 1]
    """
    _same_field(numerator, denominator)
    if denominator.is_zero:
        raise ZeroDivisionError("zero denominator")
    if count <= 0 or numerator.is_zero:
        return [0] * max(count, 0)
    # num * x**count = q * den + r, and a_k is the coefficient of x**(count-k) in q
    shifted = PrimeFieldPoly(numerator.p, (0,) * count + numerator.coeffs)
    q, _ = poly_divmod(shifted, denominator)
    return [q.coeffs[count - k] if count - k < len(q.coeffs) else 0 for k in range(1, count + 1)]


_TERM = re.compile(r"^(\d*)(?:\*?(x)(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> PrimeFieldPoly:
    """Parse ``x^2+x+1``, ``2x+1``, ``[1,1,1]`` or ``p:[1,1,1]`` (lowest degree first)."""
    text = text.strip().replace(" ", "")
    if ":" in text:
        head, _, text = text.partition(":")
        if int(head) != p:
            raise ValueError(f"polynomial modulus {head} does not match base {p}")
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"malformed coefficient list {text!r}")
        body = text[1:-1]
        coeffs = tuple(int(c) for c in body.split(",")) if body else ()
        return PrimeFieldPoly(p, coeffs)
    coeffs: dict[int, int] = {}
    for term in text.split("+"):
        m = _TERM.match(term)
        if not term or m is None or (not m.group(1) and not m.group(2)):
            raise ValueError(f"cannot parse polynomial term {term!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        k = 0 if not m.group(2) else (int(m.group(3)) if m.group(3) else 1)
        coeffs[k] = coeffs.get(k, 0) + c
    deg = max(coeffs)
    return PrimeFieldPoly(p, tuple(coeffs.get(k, 0) for k in range(deg + 1)))


def split_poly_list(text: str) -> list[str]:
    """Split a comma-separated polynomial list, leaving bracketed lists intact."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t for t in (s.strip() for s in out) if t]
