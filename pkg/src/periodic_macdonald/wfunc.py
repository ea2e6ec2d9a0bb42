"""Two-alphabet polynomials W_lam(x; q, t; y).

W_lam is the image of the integral form J_lam(x; q, t) under the
homomorphism ``p_k -> (p_k(x) - (-1)^k p_k(y)) / (1 - t^k)``.  Everything is
evaluated through the power-sum expansion, never through a lattice, so the
vertex-model statements about W are tested rather than assumed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import DegenerateParameterError, Truncated, as_partition, conjugate, enumerate_partitions, frac, qpoch
from .measures import MeasureSpec, TruncationSpec, periodic_schur_cdf
from .skewpolys import QW_P, QW_Q, skew_multi
from .symfunc import DEFAULT_DEGREE_CAP, integral_J, power_sums, substitute_power_sums


def _alphabet(xs: Sequence) -> list:
    return [frac(x) for x in xs]


def w_eval(lam, q, t, x: Sequence, y: Sequence, degree_cap: int = DEFAULT_DEGREE_CAP) -> Fraction:
    """W_lam(x; q, t; y) at numeric alphabets (an empty alphabet is the zero alphabet)."""
    lam = as_partition(lam)
    q, t = frac(q), frac(t)
    d = lam.size
    for k in range(1, d + 1):
        if t**k == 1:
            raise DegenerateParameterError(f"1 - t^{k} vanishes")
    px = power_sums(_alphabet(x), d)
    py = power_sums(_alphabet(y), d)
    images = [None] + [(px[k] - (-1) ** k * py[k]) / (1 - t**k) for k in range(1, d + 1)]
    return substitute_power_sums(integral_J(lam, q, t, degree_cap), images) if d else Fraction(1)


def w_symmetry_residual(lam, q, t, x: Sequence, y: Sequence) -> Fraction:
    """W_lam(x;q,t;y) - W_{lam'}(y;t,q;x); zero when the symmetry holds."""
    lam = as_partition(lam)
    return w_eval(lam, q, t, x, y) - w_eval(conjugate(lam), t, q, y, x)


def _prod_pow(xs: Sequence, n: int) -> Fraction:
    out = Fraction(1)
    for v in xs:
        out *= frac(v) ** n
    return out


def ims_lhs_w(n: int, M: int, a: Sequence, b: Sequence, q) -> Fraction:
    """prod a_i^n W_{n^M}(a^{-1}, b; q, 0; 0)."""
    a = _alphabet(a)
    if len(a) != M:
        raise ValueError("alphabet a must have length M")
    letters = [1 / v for v in a] + _alphabet(b)
    return _prod_pow(a, n) * w_eval((n,) * M, q, 0, letters, ())


def ims_lhs_schur(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()) -> Truncated:
    """(q;q)_n sum_{lam_1 <= n, mu ⊆ lam} q^|mu| s_{lam/mu}(a) s_{lam/mu}(b)."""
    raw = periodic_schur_cdf(n, spec, trunc)
    f = qpoch(spec.q, spec.q, n)
    return Truncated(raw.value * f, raw.tail, None if raw.delta is None else raw.delta * f,
                     raw.converged, raw.cap)


def qw_rhs_w(n: int, M: int, a: Sequence, b: Sequence, q) -> Fraction:
    """prod a_i^n W_{M^n}(0; 0, q; a^{-1}, b)."""
    a = _alphabet(a)
    if len(a) != M:
        raise ValueError("alphabet a must have length M")
    letters = [1 / v for v in a] + _alphabet(b)
    if n == 0:
        return Fraction(1)
    return _prod_pow(a, n) * w_eval((M,) * n, 0, q, (), letters)


def qw_rhs_sum(n: int, a: Sequence, b: Sequence, q) -> Fraction:
    """sum_{mu_1 <= n} (q;q)_n / (q;q)_{n - mu_1} P_mu(a;q,0) Q_mu(b;q,0) (a finite sum)."""
    a, b, q = _alphabet(a), _alphabet(b), frac(q)
    qn = qpoch(q, q, n)
    total = Fraction(0)
    for mu in enumerate_partitions(n * min(len(a), len(b)), n, min(len(a), len(b))):
        pa = skew_multi(QW_P, mu, (), a, q)
        if pa:
            total += qn / qpoch(q, q, n - mu[0]) * pa * skew_multi(QW_Q, mu, (), b, q)
    return total
