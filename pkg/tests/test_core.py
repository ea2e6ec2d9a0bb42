from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from periodic_macdonald.core import (
    DomainError,
    Partition,
    conjugate,
    enumerate_partitions,
    format_rational,
    horizontal_strips_above,
    horizontal_strips_below,
    is_horizontal_strip,
    partitions_of,
    q_binomial,
    q_geometric,
    qpoch,
)

partitions = st.lists(st.integers(1, 6), max_size=6).map(lambda xs: Partition(sorted(xs, reverse=True)))


def test_partition_counts():
    # number of partitions of 0..10
    assert [len(partitions_of(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_enumeration_order_and_bounds():
    assert [p.to_list() for p in partitions_of(3)] == [[3], [2, 1], [1, 1, 1]]
    assert all(len(p) <= 2 and (not p or p[0] <= 3) for p in enumerate_partitions(8, 3, 2))


def test_trailing_zeros_stripped():
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))


@given(partitions)
def test_conjugate_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).size == lam.size


def _strip_by_definition(lam, mu):
    lam, mu = list(lam), list(mu)
    if len(mu) > len(lam):
        return False
    mu = mu + [0] * (len(lam) - len(mu))
    nxt = lam[1:] + [0]
    return all(l >= m >= n for l, m, n in zip(lam, mu, nxt))


@given(partitions, partitions)
def test_horizontal_strip_matches_interlacing(lam, mu):
    assert is_horizontal_strip(lam, mu) == _strip_by_definition(lam, mu)


def test_strip_generators_agree_with_predicate():
    lam = Partition((4, 2, 1))
    below = set(horizontal_strips_below(lam))
    brute = {mu for mu in enumerate_partitions(lam.size) if _strip_by_definition(lam, mu)}
    assert below == brute
    above = set(horizontal_strips_above((2, 1), 6, 3))
    brute = {nu for nu in enumerate_partitions(6, 3) if _strip_by_definition(nu, (2, 1))}
    assert above == brute


def test_finite_qpoch_is_a_product():
    z, q = Fraction(2, 5), Fraction(1, 3)
    expected = (1 - z) * (1 - z * q) * (1 - z * q * q)
    assert qpoch(z, q, 3) == expected
    assert qpoch(z, q, 0) == 1


def test_infinite_qpoch_against_pentagonal_numbers():
    q = Fraction(1, 3)
    euler = sum((-1) ** k * float(q) ** (k * (3 * k - 1) // 2) for k in range(-30, 31))
    assert abs(float(qpoch(q, q)) - euler) < 1e-15


def test_q_binomial_pascal_recursion():
    q = Fraction(2, 7)
    for n in range(1, 7):
        for k in range(1, n):
            assert q_binomial(n, k, q) == q_binomial(n - 1, k - 1, q) + q**k * q_binomial(n - 1, k, q)


def test_q_geometric_sums_to_one():
    g = q_geometric(Fraction(1, 4))
    assert abs(float(sum(g.pmf(n) for n in range(60))) - 1) < 1e-15
    assert g.cdf(3) == sum(g.pmf(n) for n in range(4))
    with pytest.raises(DomainError):
        q_geometric(1)


def test_format_rational():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(5)) == "5"
