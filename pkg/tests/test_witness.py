from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import niederreiter
from tsnet.badic import DigitVector, Point, PreconditionError, digital_add, truncate
from tsnet.discrepancy import local_discrepancy, star_discrepancy_exact
from tsnet.generators import lift_with_index
from tsnet.gfpoly import parse_poly
from tsnet.witness import (
    EpsilonRangeError,
    HypothesisBoundError,
    TailTooShortError,
    Theorem2Witness,
    ThresholdError,
    WitnessParamError,
    derive_params,
    gamma_digits,
    k_constant,
    lemma1_bound,
    theorem1_bound,
    theorem1_epsilon,
    theorem1_shift,
    theorem2_bound,
    theorem2_epsilon,
    theorem3_params,
    verify_theorem1,
    verify_theorem2_for_Q,
)


def ones(v: DigitVector) -> list[int]:
    return [j + 1 for j, c in enumerate(v.digits) if c == 1]


class TestDeriveParams:
    def test_net_schedule(self):
        p = derive_params(2, 2, 0, 18, 1, Fraction(1, 4))
        assert (p.d0, p.m_dot, p.m_ddot, p.m_dot_i) == (2, 4, (0, 10), (8, 18))
        assert p.B == 0 and p.m_bound_ok

    def test_sequence_schedule(self):
        p = derive_params(2, 1, 0, 12, 1, Fraction(1, 2))
        assert (p.d0, p.m_dot, p.m_ddot, p.m_dot_i) == (1, 6, (0, 6), (6, 12))

    def test_epsilon_range(self):
        with pytest.raises(EpsilonRangeError):
            derive_params(2, 1, 0, 12, 1, 1)
        with pytest.raises(EpsilonRangeError):
            derive_params(2, 1, 0, 12, 1, 0)

    def test_tail_too_short(self):
        with pytest.raises(TailTooShortError):
            derive_params(2, 1, 1, 1, 1, Fraction(1, 4), strict=False)

    def test_hypothesis_bound(self):
        with pytest.raises(HypothesisBoundError):
            derive_params(2, 2, 0, 12, 1, Fraction(1, 4), B_sets=[{0}, ()])
        p = derive_params(2, 2, 0, 12, 1, Fraction(1, 4), B_sets=[{0}, ()], strict=False)
        assert not p.m_bound_ok and p.m_bound == 4 * 4 * 1 * (1 + 2)

    def test_errors_are_distinct(self):
        for exc in (EpsilonRangeError, TailTooShortError, HypothesisBoundError):
            assert issubclass(exc, WitnessParamError)
        assert len({EpsilonRangeError, TailTooShortError, HypothesisBoundError}) == 3

    def test_bad_excluded_sets(self):
        with pytest.raises(WitnessParamError):
            derive_params(2, 2, 0, 18, 1, Fraction(1, 4), B_sets=[{4}, ()], strict=False)
        with pytest.raises(WitnessParamError):
            derive_params(1, 2, 0, 18, 1, Fraction(1, 4))


@pytest.mark.parametrize("fn,s,d0,eps", [
    (theorem1_epsilon, 2, 2, Fraction(1, 4)),
    (theorem2_epsilon, 1, 1, Fraction(1, 2)),
    (theorem1_epsilon, 3, 1, Fraction(1, 4)),
])
def test_canonical_epsilon(fn, s, d0, eps):
    assert fn(s, d0) == eps


def test_epsilon_domain():
    with pytest.raises(WitnessParamError):
        theorem1_epsilon(1, 1)
    with pytest.raises(WitnessParamError):
        theorem2_epsilon(0, 1)


class TestGamma:
    def test_net_box(self):
        g = gamma_digits(derive_params(2, 2, 0, 18, 1, Fraction(1, 4)))
        assert str(g.gamma[0]) == "2:01010101"
        assert ones(g.gamma[1]) == [12, 14, 16, 18] and g.gamma[1].precision == 18

    def test_all_ones(self):
        g = gamma_digits(derive_params(2, 1, 0, 12, 1, Fraction(1, 2)))
        assert str(g.gamma[0]) == "2:111111"

    def test_excluded_blocks_are_zero(self):
        p = derive_params(2, 2, 0, 18, 1, Fraction(1, 4), B_sets=[{1, 3}, ()], strict=False)
        assert ones(gamma_digits(p).gamma[0]) == [2, 6]

    @given(st.data())
    def test_invariants(self, data):
        s_dot = data.draw(st.integers(2, 4))
        d = data.draw(st.integers(1, 3))
        t = data.draw(st.integers(0, 2))
        e_hat = data.draw(st.integers(1, 2))
        d0 = d + t
        eps_max = Fraction(1, 2 * d0 * e_hat * (s_dot - 1))
        eps = eps_max / data.draw(st.integers(1, 3))
        m = data.draw(st.integers(int(1 / eps) + t + 2, int(1 / eps) * 3 + t + 2))
        try:
            p = derive_params(s_dot, d, t, m, e_hat, eps, strict=False)
        except TailTooShortError:
            return
        sets = [frozenset(j for j in range(p.m_dot) if data.draw(st.booleans())) for _ in range(s_dot)]
        p = derive_params(s_dot, d, t, m, e_hat, eps, B_sets=sets, strict=False)
        b = data.draw(st.sampled_from([2, 3]))
        box = gamma_digits(p, b)
        for i, g in enumerate(box.gamma):
            assert g.precision == p.m_dot_i[i]
            assert sum(g.digits) == e_hat * (p.m_dot - len(sets[i]))
            assert all((j - p.m_ddot[i]) % d0 == 0 for j in ones(g))
            assert all(j > p.m_ddot[i] for j in ones(g))
            if p.m_dot > len(sets[i]):
                assert 0 < g.value < 1

    @pytest.mark.parametrize("b", [2, 3])
    @pytest.mark.parametrize("m", range(1, 5))
    def test_invariants_exhaustive_small(self, b, m):
        for s_dot in (2, 3):
            for d in (1, 2):
                for t in (0, 1):
                    eps = Fraction(1, 2 * (d + t) * (s_dot - 1))
                    try:
                        p = derive_params(s_dot, d, t, m, 1, eps, strict=False)
                    except TailTooShortError:
                        continue
                    for i, g in enumerate(gamma_digits(p, b).gamma):
                        assert len(g.digits) == p.m_dot_i[i]
                        assert sum(g.digits) == p.m_dot


class TestShift:
    def test_origin(self):
        g = gamma_digits(derive_params(2, 2, 0, 18, 1, Fraction(1, 4)))
        w = theorem1_shift(Point.from_ints([0, 0], 2, 18), g, 18)
        assert [c for c in w] == [gc.padded(18) for gc in g.gamma]

    def test_prefix_property(self):
        p = derive_params(2, 2, 0, 18, 1, Fraction(1, 4))
        g = gamma_digits(p)
        rng = np.random.default_rng(0)
        for _ in range(20):
            x0 = Point.from_ints(rng.integers(0, 2**18, 2), 2, 18)
            w = theorem1_shift(x0, g, 18)
            for i, (xc, wc) in enumerate(zip(x0, w)):
                assert truncate(digital_add(xc, wc), p.m_dot_i[i]) == g.gamma[i]
                assert wc == digital_add(g.gamma[i].padded(18), xc)

    def test_base3(self):
        p = derive_params(2, 1, 0, 8, 1, Fraction(1, 2))
        g = gamma_digits(p, 3)
        x0 = Point.from_ints([100, 2000], 3, 8)
        w = theorem1_shift(x0, g, 8)
        for i, (xc, wc) in enumerate(zip(x0, w)):
            assert truncate(digital_add(xc, wc), p.m_dot_i[i]) == g.gamma[i]

    def test_mismatch(self):
        g = gamma_digits(derive_params(2, 2, 0, 18, 1, Fraction(1, 4)))
        with pytest.raises(PreconditionError):
            theorem1_shift(Point.from_ints([0], 2, 18), g, 18)
        with pytest.raises(PreconditionError):
            theorem1_shift(Point.from_ints([0, 0], 2, 10), g, 18)


class TestBounds:
    def test_k(self):
        assert k_constant(2, 0, 2) == 8 and k_constant(1, 0, 2) == 4

    def test_net_bound(self):
        assert theorem1_bound(2, 0, 2, 18, 2) == (8, Fraction(9, 16))
        assert theorem1_bound(1, 0, 2, 16, 2) == (4, 2)
        with pytest.raises(ThresholdError):
            theorem1_bound(2, 0, 2, 17, 2)

    def test_sequence_bound(self):
        assert theorem2_bound(1, 0, 1, 12, 2) == (4, Fraction(3, 2))
        with pytest.raises(ThresholdError):
            theorem2_bound(1, 0, 1, 8, 2)

    def test_box_bound(self):
        assert lemma1_bound(derive_params(2, 2, 0, 18, 1, Fraction(1, 4)), 2) == Fraction(-9, 16)
        assert lemma1_bound(derive_params(2, 1, 0, 12, 1, Fraction(1, 2)), 2) == Fraction(-3, 2)

    def test_box_bound_linear_in_B(self):
        base = derive_params(3, 1, 1, 200, 1, Fraction(1, 8), strict=False)
        zero = lemma1_bound(base, 2)
        for B_sets in ([{0}, (), ()], [{0, 1}, {2}, ()], [{0}, {1}, {2, 3}]):
            p = derive_params(3, 1, 1, 200, 1, Fraction(1, 8), B_sets=B_sets, strict=False)
            assert lemma1_bound(p, 2) - zero == 2 ** (1 + 3) * 2 * 1 * p.B * 200

    @pytest.mark.parametrize("d,t,s,b", [(1, 0, 2, 2), (2, 0, 2, 2), (2, 1, 3, 3)])
    def test_box_bound_matches_net_bound(self, d, t, s, b):
        m = 9 * (d + t) * (s - 1) ** 2
        p = derive_params(s, d, t, m, 1, theorem1_epsilon(s, d + t), strict=False)
        assert -lemma1_bound(p, b) == theorem1_bound(d, t, s, m, b)[1]


@pytest.mark.parametrize("polys,expected", [("x", (1, 0)), ("x,x+1", (2, 0)), ("x^2+x+1", (2, 1))])
def test_params_from_polynomials(polys, expected):
    assert theorem3_params([parse_poly(p, 2) for p in polys.split(",")]) == expected


class TestNetWitness:
    def test_m18(self):
        net = niederreiter(2, "x,x+1", 18).generate()
        rep = verify_theorem1(net, 2, 0)
        assert rep.passed
        assert rep.delta <= Fraction(-9, 16) == rep.lemma_bound
        assert abs(rep.delta) >= rep.theorem_bound
        shifted = net.shift(rep.shift)
        for i, g in enumerate(rep.gamma.gamma):
            assert truncate(shifted.point(0)[i], rep.params.m_dot_i[i]) == g

    def test_shift_composition(self):
        net = niederreiter(2, "x,x+1", 18).generate()
        rep = verify_theorem1(net, 2, 0)
        shifted = net.shift(rep.shift)
        again = verify_theorem1(shifted, 2, 0)
        assert all(c.to_int() == 0 for c in again.shift)
        assert again.delta == rep.delta
        assert local_discrepancy(shifted, rep.gamma) == rep.delta

    def test_below_threshold(self):
        with pytest.raises(ThresholdError):
            verify_theorem1(niederreiter(2, "x,x+1", 17).generate(), 2, 0)

    def test_not_a_power(self):
        with pytest.raises(PreconditionError):
            verify_theorem1(niederreiter(2, "x,x+1", 18).generate(0, 1000), 2, 0)

    @pytest.mark.slow
    @pytest.mark.parametrize("m", range(18, 23))
    def test_monotone_sanity(self, m):
        rep = verify_theorem1(niederreiter(2, "x,x+1", m).generate(), 2, 0)
        assert rep.passed and abs(rep.delta) >= theorem1_bound(2, 0, 2, m, 2)[1]

    def test_report_round_trips(self):
        rep = verify_theorem1(niederreiter(2, "x,x+1", 18).generate(), 2, 0)
        d = rep.to_dict()
        assert d["delta"] == {"num": str(rep.delta.numerator), "den": str(rep.delta.denominator)}
        assert d["passed"] and d["gamma"][0] == "2:01010101"


@pytest.mark.parametrize("m", [6, 8])
def test_local_discrepancy_below_exact_star(m):
    """|Delta|/N never exceeds the exact star discrepancy of the shifted net."""
    net = niederreiter(2, "x,x+1", m).generate()
    p = derive_params(2, 2, 0, m, 1, Fraction(1, 4), strict=False)
    g = gamma_digits(p)
    shifted = net.shift(theorem1_shift(net.point(0), g, m))
    delta = local_discrepancy(shifted, g)
    assert abs(delta) / len(net) <= star_discrepancy_exact(shifted).value


class TestSequenceWitness:
    def test_fast_scan_matches_per_q_reports(self):
        seq = niederreiter(2, "x", 12).generate()
        W = Theorem2Witness(seq, 1, 0)
        Qs = [0, 1, 5, 100, 2047, 4095]
        scan = W.scan(Qs)
        for Q, delta in scan.results:
            rep = W.for_Q(Q)
            assert rep.delta == delta
            # same set built the other way: Q as reindexing, index coordinate unshifted
            w = Point(tuple(rep.shift)[:-1] + (DigitVector.zeros(2, 12),))
            for order in ("index", "reindexed"):
                lifted = lift_with_index(W.net, Q, w, order=order)
                assert local_discrepancy(lifted, W.gamma) == delta

    def test_parallel_scan_is_deterministic(self):
        W = Theorem2Witness(niederreiter(2, "x", 12).generate(), 1, 0)
        Qs = list(range(0, 4096, 37))
        assert W.scan(Qs, jobs=1).results == W.scan(Qs, jobs=4).results

    def test_n0_and_shift(self):
        W = Theorem2Witness(niederreiter(2, "x", 12).generate(), 1, 0, check_admissibility=False)
        # gamma for the index coordinate has all twelve digits 0..0111111 -> 63
        assert W.G[-1] == 63 and W.n0(0) == 63 and W.n0(63) == 0
        assert W.shift(5)[-1].to_int() == 5

    def test_admissibility_recorded(self):
        W = Theorem2Witness(niederreiter(2, "x", 12).generate(), 1, 0)
        adm = W.admissibility
        assert adm["checked"] and adm["ok"]
        assert adm["lifted_net"]["min_value"] == {"num": "1", "den": str(2**13)}

    @pytest.mark.slow
    def test_d2_sampled(self):
        seq = niederreiter(2, "x", 18).generate()
        W = Theorem2Witness(seq, 2, 0)
        rng = np.random.default_rng(1)
        scan = W.scan([int(q) for q in rng.integers(0, 2**18, 24)])
        assert W.lemma_bound == Fraction(-9, 16)
        assert scan.failures == [] and all(dl <= Fraction(-9, 16) for _, dl in scan.results)

    def test_for_q_wrapper(self):
        seq = niederreiter(2, "x", 12).generate()
        rep = verify_theorem2_for_Q(seq, 7, 1, 0, check_admissibility=False)
        assert rep.Q == 7 and rep.lemma_bound == Fraction(-3, 2)
        assert rep.to_dict()["Q"] == 7

    def test_below_threshold(self):
        with pytest.raises(ThresholdError):
            Theorem2Witness(niederreiter(2, "x", 8).generate(), 1, 0)
