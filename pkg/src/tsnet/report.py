"""JSON helpers shared by the checkers and the CLI."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any


def rational(x: Fraction | int) -> dict[str, str]:
    """Lossless ``{"num": ..., "den": ...}`` form of an exact rational."""
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def parse_rational(obj: dict[str, str]) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
