from fractions import Fraction

from hypothesis import given, settings, strategies as st

from periodic_macdonald.core import Partition
from periodic_macdonald.symfunc import evaluate, integral_J
from periodic_macdonald.wfunc import ims_lhs_w, qw_rhs_sum, qw_rhs_w, w_eval, w_symmetry_residual

small = st.fractions(min_value=Fraction(1, 9), max_value=Fraction(8, 9), max_denominator=9)
shapes = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(lambda xs: Partition(sorted(xs, reverse=True)))


def test_degree_one():
    # W_(1) = (p_1(x) + p_1(y)) (1 - t) / (1 - t)
    assert w_eval((1,), Fraction(1, 3), Fraction(1, 4), [Fraction(1, 2)], [Fraction(1, 5)]) == Fraction(7, 10)


def test_specialisation_recovers_integral_form():
    x = [Fraction(1, 2), Fraction(1, 3)]
    q, t = Fraction(1, 5), Fraction(2, 7)
    assert w_eval((2, 1), q, t, x, [-t * v for v in x]) == evaluate(integral_J((2, 1), q, t), x)


@settings(max_examples=25, deadline=None)
@given(shapes, small, small, small, small)
def test_symmetry(lam, q, t, x, y):
    assert w_symmetry_residual(lam, q, t, [x], [y]) == 0


def test_two_sides_agree_exactly():
    a, b, q = (Fraction(1, 3), Fraction(1, 4)), (Fraction(1, 5), Fraction(1, 6)), Fraction(1, 4)
    for n in range(3):
        assert ims_lhs_w(n, 2, a, b, q) == qw_rhs_w(n, 2, a, b, q) == qw_rhs_sum(n, a, b, q)
