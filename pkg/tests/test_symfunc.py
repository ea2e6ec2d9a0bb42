from fractions import Fraction

import pytest

from conftest import hl_symmetrised, schur_bialternant
from periodic_macdonald.core import enumerate_partitions
from periodic_macdonald.symfunc import (
    DegreeCapError,
    evaluate,
    hall_littlewood_P,
    inner_product,
    integral_J,
    macdonald_P,
    macdonald_Q,
    power_sums,
    schur,
)

SHAPES = [p for p in enumerate_partitions(4) if p.size]


@pytest.mark.parametrize("lam", SHAPES, ids=str)
def test_schur_matches_bialternant(lam, letters):
    assert evaluate(schur(lam), letters) == schur_bialternant(lam, letters)


@pytest.mark.parametrize("lam", SHAPES, ids=str)
def test_hall_littlewood_matches_symmetrisation(lam, letters):
    t = Fraction(1, 3)
    assert evaluate(hall_littlewood_P(lam, t), letters) == hl_symmetrised(lam, letters, t)


@pytest.mark.parametrize("lam", SHAPES, ids=str)
def test_macdonald_specialisations(lam, letters):
    q = Fraction(2, 5)
    # q = t collapses to Schur, q = 0 to Hall-Littlewood
    assert evaluate(macdonald_P(lam, q, q), letters) == schur_bialternant(lam, letters)
    assert evaluate(macdonald_P(lam, 0, q), letters) == hl_symmetrised(lam, letters, q)


def test_macdonald_orthogonality():
    q, t = Fraction(1, 3), Fraction(1, 5)
    shapes = [p for p in enumerate_partitions(4) if p.size == 4]
    for lam in shapes:
        for mu in shapes:
            val = inner_product(macdonald_P(lam, q, t), macdonald_Q(mu, q, t), q, t)
            assert val == (1 if lam == mu else 0)


def test_integral_form_single_row():
    # J_(1) = (1 - t) P_(1) = (1 - t) p_1
    q, t = Fraction(1, 3), Fraction(1, 5)
    xs = [Fraction(1, 2), Fraction(1, 7)]
    assert evaluate(integral_J((1,), q, t), xs) == (1 - t) * sum(xs)


def test_power_sums():
    assert power_sums([Fraction(1, 2), 2], 3) == [2, Fraction(5, 2), Fraction(17, 4), Fraction(65, 8)]


def test_degree_cap():
    with pytest.raises(DegreeCapError):
        macdonald_P((3, 2), Fraction(1, 2), Fraction(1, 3), degree_cap=4)
