from fractions import Fraction

import pytest

from periodic_macdonald.core import DomainError
from periodic_macdonald.measures import (
    MeasureSpec, TruncationSpec, chain_table, phi_norm, phl_joint, pqw_shifted_cdf, sample,
)

HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


def test_phi_reduces_to_cauchy_product():
    assert phi_norm(MeasureSpec((HALF,), (THIRD,))) == 1 / (1 - HALF * THIRD)


def test_spec_validation():
    with pytest.raises(DomainError):
        MeasureSpec((HALF,), (THIRD,), q=1)
    with pytest.raises(DomainError):
        MeasureSpec((2,), (1,)).check_convergent()
    with pytest.raises(ValueError):
        TruncationSpec(K=-1)


def test_one_letter_schur_measure():
    # with t = u = 0 the measure is supported on one-row shapes and
    # the row is non-empty with probability ab
    joint = phl_joint(MeasureSpec((HALF,), (THIRD,)), TruncationSpec(K=30))
    assert abs(float(joint.get(0, (1,), (0,))) - 1 / 6) < 1e-20
    assert abs(float(joint.total() + joint.tail) - 1) < 1e-20


def test_joint_table_csv():
    spec = MeasureSpec((THIRD, Fraction(1, 4)), (Fraction(1, 5),), t=Fraction(1, 4), u=THIRD)
    joint = phl_joint(spec, TruncationSpec(K=8))
    text = joint.to_csv()
    assert text.splitlines()[0] == "base_length,up_marks,down_marks,probability"
    assert len(text.splitlines()) == len(joint.table) + 1
    assert 0 < joint.tail < Fraction(1, 100)


def test_shifted_cdf_increases_to_one():
    spec = MeasureSpec((THIRD,), (Fraction(1, 4),), q=Fraction(1, 5), u=Fraction(1, 6))
    vals = [pqw_shifted_cdf(n, spec, TruncationSpec(K=10)).value for n in range(6)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert 0.999 < float(vals[-1]) < 1


def test_sampling_is_seeded():
    spec = MeasureSpec((THIRD, Fraction(1, 4)), (Fraction(1, 5),), t=Fraction(1, 4), u=THIRD)
    trunc = TruncationSpec(K=6)
    rows = chain_table(spec, trunc)
    a = sample(spec, trunc, seed=3, size=20, rows=rows)
    b = sample(spec, trunc, seed=3, size=20, rows=rows)
    assert [s.observables for s in a] == [s.observables for s in b]
    assert all(s.approximate for s in a)
    for s in a:
        assert len(s.lambdas) == spec.M + 1 and len(s.mus) == spec.N + 1
