from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsnet.badic import (
    DigitVector,
    PreconditionError,
    digital_add,
    digital_negate,
    digital_sub,
    int_digital_add,
    int_digital_sub,
    truncate,
    valuation_fraction,
    valuation_int,
)


def dv(b, *digits):
    return DigitVector(b, digits)


def all_vectors(b, m):
    return [DigitVector(b, d) for d in itertools.product(range(b), repeat=m)]


@st.composite
def vectors(draw, n=1, bases=(2, 3, 5, 7)):
    b = draw(st.sampled_from(bases))
    m = draw(st.integers(0, 24))
    digit_lists = st.lists(st.integers(0, b - 1), min_size=m, max_size=m)
    out = [DigitVector(b, tuple(draw(digit_lists))) for _ in range(n)]
    return out if n > 1 else out[0]


class TestTruncate:
    def test_prefix(self):
        assert truncate(dv(2, 1, 0, 1, 1), 2) == dv(2, 1, 0)

    def test_full_length_is_identity(self):
        x = dv(3, 2, 1, 0, 2)
        assert truncate(x, 4) == x

    def test_empty_prefix(self):
        y = truncate(dv(3, 2, 1, 0), 0)
        assert y.digits == () and y.value == 0

    @pytest.mark.parametrize("m", [-1, 5])
    def test_out_of_range(self, m):
        with pytest.raises(PreconditionError):
            truncate(dv(2, 1, 0, 1, 1), m)

    @given(vectors())
    def test_value_is_partial_sum(self, x):
        for m in range(x.precision + 1):
            expected = sum(Fraction(d, x.base ** (j + 1)) for j, d in enumerate(x.digits[:m]))
            assert truncate(x, m).value == expected


class TestDigitalShift:
    def test_examples(self):
        assert digital_add(dv(2, 1), dv(2, 1)) == dv(2, 0)
        assert digital_add(dv(3, 1, 2), dv(3, 2, 2)) == dv(3, 0, 1)
        assert digital_negate(dv(3, 1, 2)) == dv(3, 2, 1)

    def test_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            digital_add(dv(2, 1), dv(3, 1))
        with pytest.raises(PreconditionError):
            digital_sub(dv(2, 1), dv(2, 1, 0))

    @pytest.mark.parametrize("m", range(5))
    def test_base2_negation_is_identity(self, m):
        for x in all_vectors(2, m):
            assert digital_negate(x) == x
            for y in all_vectors(2, m):
                assert digital_sub(x, y) == digital_add(x, y)

    @pytest.mark.parametrize("b,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)])
    def test_group_laws_exhaustive(self, b, m):
        vs = all_vectors(b, m)
        zero = DigitVector.zeros(b, m)
        for x in vs:
            assert digital_add(x, zero) == x
            assert digital_add(x, digital_negate(x)) == zero
            for y in vs:
                xy = digital_add(x, y)
                assert xy == digital_add(y, x)
                assert digital_sub(xy, y) == x
                for z in vs:
                    assert digital_add(xy, z) == digital_add(x, digital_add(y, z))

    @pytest.mark.parametrize("b,m", [(2, 4), (3, 4), (5, 4)])
    def test_inverse_and_commutativity_exhaustive_m4(self, b, m):
        vs = all_vectors(b, m)
        zero = DigitVector.zeros(b, m)
        for x in vs:
            assert digital_add(x, digital_negate(x)) == zero
        step = max(1, len(vs) // 40)
        for x in vs[::step]:
            for y in vs:
                assert digital_add(x, y) == digital_add(y, x)
                assert digital_sub(digital_add(x, y), y) == x

    @given(vectors(n=3))
    def test_group_laws_random(self, xyz):
        x, y, z = xyz
        if not (x.precision == y.precision == z.precision and x.base == y.base == z.base):
            y = DigitVector(x.base, tuple((d + 1) % x.base for d in x.digits))
            z = digital_negate(y)
        assert digital_add(digital_add(x, y), z) == digital_add(x, digital_add(y, z))
        assert digital_sub(digital_add(x, y), y) == x

    @given(vectors(n=2))
    def test_truncation_homomorphism(self, xy):
        x, y = xy
        if x.base != y.base or x.precision != y.precision:
            y = DigitVector(x.base, tuple(reversed(x.digits)))
        for m in range(x.precision + 1):
            assert truncate(digital_add(x, y), m) == digital_add(truncate(x, m), truncate(y, m))

    @pytest.mark.parametrize("b", [2, 3])
    def test_truncation_homomorphism_exhaustive(self, b):
        vs = all_vectors(b, 4 if b == 2 else 3)
        for x in vs:
            for y in vs:
                for m in range(x.precision + 1):
                    assert truncate(digital_add(x, y), m) == digital_add(truncate(x, m), truncate(y, m))


class TestIntegerShift:
    def test_examples(self):
        assert int_digital_add(5, 3, 2, 4) == 6
        assert int_digital_add(5, 4, 3, 2) == 6
        assert int_digital_add(11, 0, 3, 3) == 11

    def test_out_of_range(self):
        with pytest.raises(PreconditionError):
            int_digital_add(16, 0, 2, 4)
        with pytest.raises(PreconditionError):
            int_digital_add(-1, 0, 2, 4)

    @pytest.mark.slow
    @pytest.mark.parametrize("b", [2, 3])
    @pytest.mark.parametrize("m", range(1, 7))
    def test_agrees_with_fraction_shift_exhaustive(self, b, m):
        vecs = [DigitVector.from_int(n, b, m) for n in range(b**m)]
        for n1, v1 in enumerate(vecs):
            for n2, v2 in enumerate(vecs):
                assert int_digital_add(n1, n2, b, m) == digital_add(v1, v2).to_int()
                assert int_digital_sub(n1, n2, b, m) == digital_sub(v1, v2).to_int()


class TestValuations:
    def test_fraction_examples(self):
        assert valuation_fraction(dv(2, 0, 0, 1, 0)) == Fraction(1, 8)
        assert valuation_fraction(dv(2, 1, 0, 0)) == Fraction(1, 2)
        assert valuation_fraction(dv(2, 0, 0, 0, 0)) == 0
        assert valuation_fraction(dv(3, 0, 2)) == Fraction(1, 9)

    def test_int_examples(self):
        assert valuation_int(5, 2) == 4
        assert valuation_int(1, 2) == 1
        assert valuation_int(9, 3) == 9
        assert valuation_int(8, 3) == 3
        assert valuation_int(0, 2) == 0
        with pytest.raises(PreconditionError):
            valuation_int(-3, 2)

    @given(vectors(n=2))
    def test_shared_prefix_iff_small_valuation(self, xy):
        x, y = xy
        if x.base != y.base or x.precision != y.precision:
            y = x
        diff = valuation_fraction(digital_sub(x, y))
        for k in range(x.precision + 1):
            shared = x.digits[:k] == y.digits[:k]
            assert shared == (diff < Fraction(1, x.base**k))

    @given(st.sampled_from([2, 3, 5]), st.integers(1, 10**9))
    def test_int_valuation_bracket(self, b, n):
        v = valuation_int(n, b)
        assert v <= n < v * b


class TestText:
    def test_round_trip(self):
        x = dv(2, 0, 1, 0, 1)
        assert str(x) == "2:0101"
        assert DigitVector.parse("2:0101") == x
        assert DigitVector.parse("3:") == DigitVector(3, ())

    @pytest.mark.parametrize("bad", ["0101", "2:0121", "x:01", "1:0"])
    def test_malformed(self, bad):
        with pytest.raises(PreconditionError):
            DigitVector.parse(bad)

    def test_from_fraction(self):
        assert DigitVector.from_fraction(Fraction(7, 9), 3, 2).digits == (2, 1)
        with pytest.raises(PreconditionError):
            DigitVector.from_fraction(Fraction(1, 3), 2, 5)

    def test_invalid_digit(self):
        with pytest.raises(PreconditionError):
            DigitVector(2, (0, 2))
