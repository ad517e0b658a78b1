"""Exact base-b digit arithmetic on fixed-precision fractions.

A :class:`DigitVector` holds the first ``m`` base-``b`` digits of a number in
``[0, 1)``, most significant first. The digital shift is carry-free
digitwise addition mod ``b``; together with truncation and the two b-adic
valuations it is everything the net checkers and the witness builder need.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


def _check_base(b: int) -> None:
    if not isinstance(b, int) or b < 2:
        raise PreconditionError(f"base must be an integer >= 2, got {b!r}")


@dataclass(frozen=True)
class DigitVector:
    """Fraction ``sum_j digits[j-1] * base**-j`` with a fixed number of digits."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.base)
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        for d in self.digits:
            if not 0 <= d < self.base:
                raise PreconditionError(f"digit {d} outside [0, {self.base})")

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def value(self) -> Fraction:
        return Fraction(self.to_int(), self.base**self.precision)

    def to_int(self) -> int:
        """The integer ``value * base**precision``."""
        n = 0
        for d in self.digits:
            n = n * self.base + d
        return n

    @classmethod
    def from_int(cls, n: int, base: int, m: int) -> DigitVector:
        """Digit vector of ``n / base**m`` for ``0 <= n < base**m``."""
        _check_base(base)
        if m < 0 or not 0 <= n < base**m:
            raise PreconditionError(f"{n} is not in [0, {base}**{m})")
        digits = []
        for _ in range(m):
            n, r = divmod(n, base)
            digits.append(r)
        return cls(base, tuple(reversed(digits)))

    @classmethod
    def zeros(cls, base: int, m: int) -> DigitVector:
        return cls(base, (0,) * m)

    @classmethod
    def from_fraction(cls, x: Fraction, base: int, m: int) -> DigitVector:
        """Exact digits of ``x``; raises if ``x`` is not on the ``base**-m`` grid."""
        x = Fraction(x)
        scaled = x * base**m
        if scaled.denominator != 1 or not 0 <= x < 1:
            raise PreconditionError(f"{x} is not a {m}-digit base-{base} fraction in [0,1)")
        return cls.from_int(int(scaled), base, m)

    def padded(self, m: int) -> DigitVector:
        """Append zero digits up to precision ``m`` (value unchanged)."""
        if m < self.precision:
            raise PreconditionError(f"cannot pad precision {self.precision} down to {m}")
        return DigitVector(self.base, self.digits + (0,) * (m - self.precision))

    def __str__(self) -> str:
        return f"{self.base}:" + "".join(_DIGIT_CHARS[d] for d in self.digits)

    @classmethod
    def parse(cls, text: str) -> DigitVector:
        """Inverse of ``str``: ``"2:0101"`` -> base 2, digits (0, 1, 0, 1)."""
        head, sep, body = text.strip().partition(":")
        if not sep:
            raise PreconditionError(f"malformed digit vector {text!r}; expected 'b:digits'")
        try:
            base = int(head)
        except ValueError:
            raise PreconditionError(f"malformed base in {text!r}") from None
        if not 2 <= base <= len(_DIGIT_CHARS):
            raise PreconditionError(f"text form supports bases 2..36, got {base}")
        digits = []
        for ch in body.lower():
            d = _DIGIT_CHARS.find(ch)
            if d < 0 or d >= base:
                raise PreconditionError(f"invalid digit {ch!r} for base {base} in {text!r}")
            digits.append(d)
        return cls(base, tuple(digits))


@dataclass(frozen=True)
class Point:
    """An ``s``-tuple of digit vectors sharing base and precision."""

    coords: tuple[DigitVector, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise PreconditionError("a point needs at least one coordinate")
        b, m = coords[0].base, coords[0].precision
        if any(c.base != b or c.precision != m for c in coords):
            raise PreconditionError("point coordinates must share base and precision")

    @property
    def base(self) -> int:
        return self.coords[0].base

    @property
    def precision(self) -> int:
        return self.coords[0].precision

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(c.value for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> DigitVector:
        return self.coords[i]

    @classmethod
    def from_ints(cls, ints: Iterable[int], base: int, m: int) -> Point:
        return cls(tuple(DigitVector.from_int(int(n), base, m) for n in ints))

    def to_ints(self) -> tuple[int, ...]:
        return tuple(c.to_int() for c in self.coords)

    def __str__(self) -> str:
        return "\t".join(str(c) for c in self.coords)


def _check_pair(x: DigitVector, y: DigitVector) -> None:
    if x.base != y.base or x.precision != y.precision:
        raise PreconditionError(
            f"operands differ: base {x.base}/{y.base}, precision {x.precision}/{y.precision}"
        )


def truncate(x: DigitVector, m: int) -> DigitVector:
    """``[x]_m``: keep the first ``m`` digits."""
    if not 0 <= m <= x.precision:
        raise PreconditionError(f"truncation length {m} outside [0, {x.precision}]")
    return DigitVector(x.base, x.digits[:m])


def digital_add(x: DigitVector, y: DigitVector) -> DigitVector:
    _check_pair(x, y)
    b = x.base
    return DigitVector(b, tuple((p + q) % b for p, q in zip(x.digits, y.digits)))


def digital_negate(x: DigitVector) -> DigitVector:
    b = x.base
    return DigitVector(b, tuple((b - d) % b for d in x.digits))


def digital_sub(x: DigitVector, y: DigitVector) -> DigitVector:
    _check_pair(x, y)
    return digital_add(x, digital_negate(y))


def point_add(x: Point, y: Point) -> Point:
    if x.dim != y.dim:
        raise PreconditionError(f"dimension mismatch {x.dim} != {y.dim}")
    return Point(tuple(digital_add(p, q) for p, q in zip(x, y)))


def point_sub(x: Point, y: Point) -> Point:
    if x.dim != y.dim:
        raise PreconditionError(f"dimension mismatch {x.dim} != {y.dim}")
    return Point(tuple(digital_sub(p, q) for p, q in zip(x, y)))


def point_truncate(x: Point, m: int) -> Point:
    return Point(tuple(truncate(c, m) for c in x))


def int_digits(n: int, b: int, m: int) -> list[int]:
    """Base-``b`` digits of ``n``, least significant first, exactly ``m`` of them."""
    out = []
    for _ in range(m):
        n, r = divmod(n, b)
        out.append(r)
    return out


def int_digital_op(n1: int, n2: int, b: int, m: int, sign: int = 1) -> int:
    _check_base(b)
    top = b**m
    for n in (n1, n2):
        if not 0 <= n < top:
            raise PreconditionError(f"operand {n} outside [0, {b}**{m})")
    out = 0
    p = 1
    for _ in range(m):
        out += (((n1 // p) % b + sign * ((n2 // p) % b)) % b) * p
        p *= b
    return out


def int_digital_add(n1: int, n2: int, b: int, m: int) -> int:
    """``n1 (+) n2``: carry-free digitwise addition of ``m``-digit integers."""
    return int_digital_op(n1, n2, b, m, 1)


def int_digital_sub(n1: int, n2: int, b: int, m: int) -> int:
    return int_digital_op(n1, n2, b, m, -1)


def valuation_fraction(x: DigitVector) -> Fraction:
    """``b**-(k+1)`` where ``k`` counts leading zero digits; 0 for the zero vector."""
    for k, d in enumerate(x.digits):
        if d:
            return Fraction(1, x.base ** (k + 1))
    return Fraction(0)


def valuation_point(x: Point) -> Fraction:
    """Product of the coordinate valuations."""
    out = Fraction(1)
    for c in x:
        out *= valuation_fraction(c)
    return out


def valuation_int(n: int, b: int) -> int:
    """Largest power ``b**k <= n``; 0 for ``n == 0``."""
    _check_base(b)
    if n < 0:
        raise PreconditionError(f"valuation of negative integer {n}")
    if n == 0:
        return 0
    p = 1
    while p * b <= n:
        p *= b
    return p


def digits_needed(n: int, b: int) -> int:
    """Number of base-``b`` digits required to write every integer below ``n``."""
    k, p = 1, b
    while p < n:
        p *= b
        k += 1
    return k


def common_base_precision(vectors: Sequence[DigitVector]) -> tuple[int, int]:
    if not vectors:
        raise PreconditionError("empty collection")
    b, m = vectors[0].base, vectors[0].precision
    for v in vectors:
        if v.base != b or v.precision != m:
            raise PreconditionError("mixed base/precision")
    return b, m
