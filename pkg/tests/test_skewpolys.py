from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from conftest import det, hl_symmetrised
from periodic_macdonald.core import b_factor, enumerate_partitions
from periodic_macdonald.skewpolys import (
    HL_P, HL_Q, QW_P, QW_Q, SCHUR, complement_residual, skew_multi, skew_one,
)
from periodic_macdonald.symfunc import evaluate, macdonald_P


def h(k, xs):
    if k < 0:
        return Fraction(0)
    total = Fraction(0)
    for combo in combinations_with_replacement(xs, k):
        term = Fraction(1)
        for x in combo:
            term *= x
        total += term
    return total


def jacobi_trudi(lam, mu, xs):
    n = len(lam)
    mu = list(mu) + [0] * (n - len(mu))
    return det([[h(lam[i] - mu[j] - i + j, xs) for j in range(n)] for i in range(n)]) if n else Fraction(1)


PAIRS = [(lam, mu) for lam in enumerate_partitions(5) for mu in enumerate_partitions(lam.size)
         if lam.contains(mu)]


@pytest.mark.parametrize("lam,mu", PAIRS, ids=lambda p: str(p))
def test_skew_schur_jacobi_trudi(lam, mu, letters):
    assert skew_multi(SCHUR, lam, mu, letters) == jacobi_trudi(lam, mu, letters)


@pytest.mark.parametrize("lam", [p for p in enumerate_partitions(4) if p.size], ids=str)
def test_hall_littlewood_branching_against_symmetrisation(lam, letters):
    t = Fraction(2, 9)
    assert skew_multi(HL_P, lam, (), letters, t) == hl_symmetrised(lam, letters, t)
    assert skew_multi(HL_Q, lam, (), letters, t) == b_factor(lam, 0, t) * hl_symmetrised(lam, letters, t)


@pytest.mark.parametrize("lam", [p for p in enumerate_partitions(4) if p.size], ids=str)
def test_q_whittaker_branching_against_macdonald(lam, letters):
    q = Fraction(3, 7)
    assert skew_multi(QW_P, lam, (), letters, q) == evaluate(macdonald_P(lam, q, 0), letters)
    assert skew_multi(QW_Q, lam, (), letters, q) == b_factor(lam, q, 0) * evaluate(macdonald_P(lam, q, 0), letters)


def test_one_letter_vanishes_off_strips():
    assert skew_one(HL_P, (2, 2), (1,), Fraction(1, 2), Fraction(1, 3)) == 0
    assert skew_one(SCHUR, (3, 1), (1,), Fraction(1, 2)) == Fraction(1, 8)


def test_complement_residual_zero():
    q = Fraction(1, 3)
    xs = [Fraction(1, 2), Fraction(1, 3)]
    for n in range(1, 4):
        for lam in enumerate_partitions(6, n):
            for mu in enumerate_partitions(lam.size, n):
                if lam.contains(mu):
                    assert complement_residual(lam, mu, n, xs, q) == 0
