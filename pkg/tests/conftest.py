"""Independent oracles shared by the test modules.

Nothing here imports the package's polynomial machinery: Schur polynomials
come from the bialternant formula and Hall-Littlewood P from the explicit
symmetrisation over S_n.
"""

from fractions import Fraction
from itertools import permutations

import pytest


def det(rows):
    """Exact determinant by fraction-preserving elimination."""
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return sign * out


def schur_bialternant(lam, xs):
    n = len(xs)
    lam = list(lam) + [0] * (n - len(lam))
    if len(lam) > n:
        return Fraction(0)
    num = det([[x ** (lam[j] + n - 1 - j) for j in range(n)] for x in xs])
    den = det([[x ** (n - 1 - j) for j in range(n)] for x in xs])
    return num / den


def hl_symmetrised(lam, xs, t):
    """P_lam(x_1..x_n; t) by (1/v_lam) sum_w w(x^lam prod_{i<j} (x_i - t x_j)/(x_i - x_j))."""
    n = len(xs)
    if len(lam) > n:
        return Fraction(0)
    lam = list(lam) + [0] * (n - len(lam))
    t = Fraction(t)

    def v(m):
        out = Fraction(1)
        for j in range(1, m + 1):
            out *= (1 - t**j) / (1 - t)
        return out

    vl = Fraction(1)
    for part in set(lam):
        vl *= v(lam.count(part))
    total = Fraction(0)
    for perm in permutations(range(n)):
        y = [xs[p] for p in perm]
        term = Fraction(1)
        for i in range(n):
            term *= y[i] ** lam[i]
        for i in range(n):
            for j in range(i + 1, n):
                term *= (y[i] - t * y[j]) / (y[i] - y[j])
        total += term
    return total / vl


@pytest.fixture
def letters():
    return [Fraction(1, 2), Fraction(1, 3), Fraction(2, 7)]
