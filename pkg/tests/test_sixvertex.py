from fractions import Fraction

import numpy as np
import pytest

from periodic_macdonald import sixvertex as sv
from periodic_macdonald.core import DomainError

A = (Fraction(1, 3), Fraction(1, 4))
B = (Fraction(1, 5), Fraction(1, 6))
T = Fraction(1, 4)


def test_vertex_law_is_stochastic():
    law = sv.vertex_probs(Fraction(1, 2), Fraction(1, 3), T)
    for bi in (0, 1):
        for li in (0, 1):
            total = sum(law.weight(bi, li, to, ro) for to in (0, 1) for ro in (0, 1))
            assert total == 1
    assert law.weight(1, 0, 1, 0) == T * law.p
    assert law.weight(0, 1, 0, 1) == law.p


def test_vertex_law_domain():
    with pytest.raises(DomainError):
        sv.vertex_probs(2, Fraction(1, 2), T)


@pytest.mark.parametrize("a,b,t", [(Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)),
                                   (Fraction(7, 9), Fraction(1, 8), Fraction(3, 5)),
                                   (Fraction(1, 3), Fraction(1, 5), Fraction(1, 4))])
def test_bernoulli_product_law_is_preserved(a, b, t):
    assert sv.bernoulli_check(a, b, t) == 0


def test_words_round_trip():
    for w in range(16):
        assert sv.word_of(sv.bits_of(w, 4)) == w


def test_domain_transfer_rows_sum_to_one():
    tr = sv.domain_transfer(2, 2, Fraction(1, 3), A, B, T)
    assert set(tr.row_sums().values()) == {1}
    mat = tr.matrix()
    assert np.allclose(mat.sum(axis=1), 1.0)


def test_arrow_count_conserved():
    tr = sv.domain_transfer(2, 2, 1, A, B, T)
    for (beta, ell), dist in tr.table.items():
        for (top, right), pr in dist.items():
            if pr:
                assert bin(beta).count("1") + bin(ell).count("1") == bin(top).count("1") + bin(right).count("1")


def test_quasi_joint_mass():
    j = sv.quasi_joint(8, 10, 2, 2, A, B, T, Fraction(1, 3))
    assert abs(float(j.total()) - 1) < 1e-12


def test_monte_carlo_is_reproducible_and_batch_independent():
    args = (6, 3000, 11, 2, 2, A, B, T, Fraction(1, 3))
    c1 = sv.mc_sample(*args)
    c2 = sv.mc_sample(*args, block=700)
    assert c1 == c2
    assert sum(c1.values()) == 3000
    assert sv.mc_sample(6, 3000, 12, 2, 2, A, B, T, Fraction(1, 3)) != c1


def test_exact_stationary_law_is_conditioned_product():
    pi = sv.stationary(2, 2, A, B, T)
    assert sum(pi.values()) == 1
    assert pi == {k: v for k, v in sv.bernoulli_stationary(2, 2, A, B).items() if k in pi}


def test_total_variation_decreases_towards_u_one():
    study = sv.stationarity_study(2, 2, A, B, T, [0.9, 0.99], 40)
    assert study[1][1] < study[0][1]


def test_zero_rapidity_passes_horizontal_arrows_straight():
    tr = sv.domain_transfer(2, 2, 0, A, B, T)
    for ell in range(4):
        assert tr.table[(0, ell)] == {(0, ell): 1}


def test_u_zero_reduces_to_one_rectangle():
    joint = sv.quasi_joint(5, 10, 2, 2, A, B, T, 0)
    single = sv.domain_transfer(2, 2, 1, A, B, T).table[(0, 3)]
    assert {(sv.word_of(s1), sv.word_of(s2)): p for (w, s1, s2), p in joint.table.items()} == single
    assert all(w == 0 for (w, _, _) in joint.table)
    counts = sv.mc_sample(5, 500, 1, 2, 2, A, B, T, 0)
    assert all(w == 0 for (w, _, _) in counts)


def test_arrow_conservation_along_the_chain():
    joint = sv.quasi_joint(6, 10, 2, 2, A, B, T, Fraction(1, 3))
    assert all(sum(s1) + sum(s2) == 2 for (_, s1, s2) in joint.table)


def test_geometric_shift():
    joint = sv.quasi_joint(6, 10, 2, 2, A, B, T, Fraction(1, 3))
    assert sv.shift_by_geometric(joint, 0).table == joint.table
    shifted = sv.shift_by_geometric(joint, Fraction(1, 3))
    assert abs(float(shifted.total() + shifted.tail - joint.total() - joint.tail)) < 1e-12


def _max_change(x, y):
    return max(float(abs(x.table.get(k, 0) - y.table.get(k, 0))) for k in set(x.table) | set(y.table))


def test_stabilisation_in_L():
    u = Fraction(1, 3)
    js = {L: sv.quasi_joint(L, 10, 2, 2, A, B, T, u) for L in (12, 16, 20, 24)}
    changes = [_max_change(js[L], js[L + 4]) for L in (12, 16, 20)]
    # four more copies shrink the change by about u^4 = 1/81
    for c0, c1 in zip(changes, changes[1:]):
        assert 1 / 120 < c1 / c0 < 1 / 60
    assert changes[-1] < 1e-9


@pytest.mark.xfail(strict=True, reason="at L = 12 the L -> L+4 change is about 3.5e-7; see the decisions ledger")
def test_stabilisation_at_twelve_copies():
    u = Fraction(1, 3)
    assert _max_change(sv.quasi_joint(12, 10, 2, 2, A, B, T, u), sv.quasi_joint(16, 10, 2, 2, A, B, T, u)) < 1e-9


def test_stationary_vector_is_invariant():
    states, mat = sv.periodic_step_matrix(2, 2, A, B, T)
    pi = sv.stationary(2, 2, A, B, T)
    vec = [pi[(sv.bits_of(s & 3, 2), sv.bits_of(s >> 2, 2))] for s in states]
    image = [sum(vec[i] * mat[i][j] for i in range(len(vec))) for j in range(len(vec))]
    assert image == vec
