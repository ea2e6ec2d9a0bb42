from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from periodic_macdonald import boson
from periodic_macdonald.core import DivergenceError, conjugate, enumerate_partitions, qpoch
from periodic_macdonald.symfunc import evaluate, macdonald_P

SMALL = enumerate_partitions(5)


def _conj_at(lam, j):
    c = conjugate(lam)
    return c[j - 1] if j <= len(c) else 0


def hl_one_letter(lam, mu, a, t, dual):
    """psi / phi coefficients times a^{|lam/mu|}, read off the conjugate strip."""
    if not lam.contains(mu):
        return Fraction(0)
    width = lam[0] if len(lam) else 0
    theta = [_conj_at(lam, j) - _conj_at(mu, j) for j in range(1, width + 2)]
    if any(x not in (0, 1) for x in theta):
        return Fraction(0)
    coeff = Fraction(1)
    for j in range(1, width + 1):
        if dual and theta[j - 1] == 1 and theta[j] == 0:
            coeff *= 1 - t ** lam.multiplicity(j)
        if not dual and theta[j - 1] == 0 and theta[j] == 1:
            coeff *= 1 - t ** mu.multiplicity(j)
    return coeff * a ** (lam.size - mu.size)


@pytest.mark.parametrize("dual,right_out,gain", [(False, 0, 0), (False, 1, 1), (True, 1, 0), (True, 0, 1)])
def test_row_is_one_letter_hall_littlewood(dual, right_out, gain):
    a, t = Fraction(2, 7), Fraction(1, 3)
    for lam in SMALL:
        for mu in SMALL:
            want = hl_one_letter(lam, mu, a, t, dual) if len(lam) == len(mu) + gain else 0
            assert boson.hl_row(lam, mu, a, t, right_out, dual) == want, (lam, mu)


def test_vertex_weight_table():
    a, t = Fraction(1, 2), Fraction(1, 3)
    assert boson.vertex_weight(boson.BLACK, 2, 1, 0, a, t) == 1 - t**3
    assert boson.vertex_weight(boson.RED, 0, 0, 0, a, t) == a
    with pytest.raises(Exception):
        boson.vertex_weight(boson.BLACK, 0, 0, 1, a, t)


def test_semi_infinite_tail():
    row = boson.BosonRow(boson.BLACK, Fraction(1, 2), 0, (), (), 1, 1)
    assert boson.row_pf(row) == 0
    with pytest.raises(DivergenceError):
        boson.row_pf(boson.BosonRow(boson.BLACK, 2, 0, (), (), 1, 1))


rationals = st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=12)
occ = st.lists(st.integers(0, 3), max_size=3)


@settings(max_examples=40, deadline=None)
@given(rationals, rationals, st.fractions(min_value=0, max_value=Fraction(9, 10), max_denominator=12),
       occ, occ, st.integers(0, 1), st.integers(0, 1))
def test_yang_baxter_exchange(a, b, t, bottom, top, j1, j2):
    assert boson.yb_exchange_residual(a, b, t, bottom, top, j1, j2) == 0


@settings(max_examples=40, deadline=None)
@given(rationals, rationals, st.fractions(min_value=0, max_value=Fraction(9, 10), max_denominator=12),
       occ, occ, st.integers(0, 1), st.sampled_from([boson.BLACK, boson.RED]))
def test_u_shift(a, u, t, bottom, top, j, kind):
    assert boson.u_shift_residual(a, u, t, bottom, top, j, kind) == 0


class _SwappedLaw:
    """Stochastic vertex with the two branching probabilities exchanged."""

    def __init__(self, a, b, t):
        self.p = (1 - a * b) / (1 - t * a * b)
        self.t = t

    def weight(self, bi, li, to, ro):
        if bi + li != to + ro:
            return Fraction(0)
        if bi == li:
            return Fraction(1)
        if bi:
            return self.p if to else 1 - self.p
        return self.t * self.p if ro else 1 - self.t * self.p


def test_exchange_detects_the_wrong_vertex_law():
    a, b, t = Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)
    assert boson.yb_exchange_residual(a, b, t, (1,), (0, 1), 0, 1) == 0
    assert boson.yb_exchange_residual(a, b, t, (1,), (0, 1), 0, 1, cross=_SwappedLaw(a, b, t)) == Fraction(-663, 2900)


def test_rectangular_partition_function_small():
    x = [Fraction(1, 2), Fraction(1, 3)]
    q, t = Fraction(1, 5), Fraction(1, 3)
    pf = boson.rect_macdonald_pf(1, 1, x, q, t, 10)
    target = qpoch(t, t, 1) / qpoch(q, q, 1) * evaluate(macdonald_P((1,), q, t), x)
    assert abs(pf.value - target) <= pf.tail
