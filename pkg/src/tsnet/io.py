"""Point-set files.

``digits`` (lossless, the certification format)::

    base=2 m=4 s=2
    2:0000<TAB>2:0000
    2:1000<TAB>2:1000

``json`` is lossless as well (digit strings); ``csv`` holds decimal values
for plotting and is refused on input.
"""

from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

import numpy as np

from tsnet.badic import DigitVector, PreconditionError
from tsnet.generators import PointSet

FORMATS = ("digits", "csv", "json")
_HEADER = re.compile(r"^base=(\d+)\s+m=(\d+)\s+s=(\d+)$")


class PointFileError(ValueError):
    pass


def format_points(ps: PointSet, fmt: str) -> str:
    if fmt == "digits":
        lines = [f"base={ps.base} m={ps.m} s={ps.dim}"]
        lines += [str(ps.point(n)) for n in range(len(ps))]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"x{i + 1}" for i in range(ps.dim)])
        for n, row in enumerate(ps.values()):
            w.writerow([n] + [repr(float(v)) for v in row])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({
            "base": ps.base, "m": ps.m, "s": ps.dim, "provenance": ps.provenance,
            "points": [[str(c) for c in ps.point(n)] for n in range(len(ps))],
        }, indent=1) + "\n"
    raise PointFileError(f"unknown format {fmt!r}; choose from {FORMATS}")


def emit_points(ps: PointSet, fmt: str, path: str | Path | None = None) -> str:
    text = format_points(ps, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text


def _from_rows(rows: list[list[str]], base: int, m: int, s: int, provenance: str) -> PointSet:
    if not rows:
        raise PointFileError("point file holds no points")
    X = np.empty((len(rows), s), dtype=np.int64)
    for n, row in enumerate(rows):
        if len(row) != s:
            raise PointFileError(f"point {n} has {len(row)} coordinates, expected {s}")
        for i, text in enumerate(row):
            v = DigitVector.parse(text)
            if v.base != base or v.precision != m:
                raise PointFileError(f"point {n} coordinate {i} ({text}) does not match base={base} m={m}")
            X[n, i] = v.to_int()
    return PointSet(base, m, X, provenance)


def parse_points(text: str, source: str = "<text>") -> PointSet:
    stripped = text.strip()
    if not stripped:
        raise PointFileError(f"{source}: empty point file")
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
            return _from_rows(obj["points"], int(obj["base"]), int(obj["m"]), int(obj["s"]),
                              obj.get("provenance", source))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise PointFileError(f"{source}: malformed JSON point file ({exc})") from None
    lines = stripped.splitlines()
    head = _HEADER.match(lines[0].strip())
    if head is None:
        raise PointFileError(
            f"{source}: not a digits-format file (decimal CSV is lossy and not accepted as input)")
    base, m, s = (int(g) for g in head.groups())
    rows = [ln.split("\t") for ln in lines[1:] if ln.strip()]
    try:
        return _from_rows([[c.strip() for c in r] for r in rows], base, m, s, source)
    except PreconditionError as exc:
        raise PointFileError(f"{source}: {exc}") from None


def load_points(path: str | Path) -> PointSet:
    return parse_points(Path(path).read_text(), str(path))
