from __future__ import annotations

import numpy as np
import pytest

from helpers import niederreiter
from tsnet.generators import PointSet
from tsnet.io import PointFileError, emit_points, format_points, load_points, parse_points


@pytest.mark.parametrize("b,polys,m", [(2, "x,x+1", 5), (3, "x,x+1,x+2", 3), (5, "x", 2)])
@pytest.mark.parametrize("fmt", ["digits", "json"])
def test_lossless_round_trip(tmp_path, b, polys, m, fmt):
    ps = niederreiter(b, polys, m).generate()
    path = tmp_path / f"pts.{fmt}"
    emit_points(ps, fmt, path)
    back = load_points(path)
    assert (back.base, back.m) == (ps.base, ps.m)
    assert np.array_equal(back.coords, ps.coords)


def test_digits_layout():
    ps = PointSet(2, 4, np.array([[0, 0], [8, 8]]))
    assert format_points(ps, "digits") == "base=2 m=4 s=2\n2:0000\t2:0000\n2:1000\t2:1000\n"


def test_csv_is_written_but_refused_on_input(tmp_path):
    ps = PointSet(2, 2, np.array([[1], [3]]))
    text = format_points(ps, "csv")
    assert text.splitlines()[0] == "n,x1"
    assert text.splitlines()[2] == "1,0.75"
    with pytest.raises(PointFileError, match="lossy"):
        parse_points(text)


@pytest.mark.parametrize("text", ["", "   \n\n"])
def test_empty_file(text):
    with pytest.raises(PointFileError, match="empty"):
        parse_points(text)


def test_header_only():
    with pytest.raises(PointFileError, match="no points"):
        parse_points("base=2 m=2 s=1\n")


@pytest.mark.parametrize("body", [
    "base=2 m=2 s=1\n2:010\n",        # precision mismatch
    "base=2 m=2 s=1\n3:01\n",         # base mismatch
    "base=2 m=2 s=2\n2:01\n",         # too few coordinates
    "base=2 m=2 s=1\n2:0a\n",         # bad digit
    '{"base": 2, "points": []}',      # missing keys
])
def test_malformed(body):
    with pytest.raises(PointFileError):
        parse_points(body)


def test_unknown_format():
    with pytest.raises(PointFileError):
        format_points(PointSet(2, 1, np.array([[1]])), "xml")
