from __future__ import annotations

import functools

from tsnet.generators import build_niederreiter
from tsnet.gfpoly import parse_poly


@functools.lru_cache(maxsize=None)
def niederreiter(b: int, polys: str, m: int):
    """Cached Niederreiter system from a comma-separated polynomial list."""
    return build_niederreiter(b, [parse_poly(p, b) for p in polys.split(",")], m)
