"""Fast evaluators for skew Hall-Littlewood, q-Whittaker and Schur polynomials.

Only the three axes ``(0, t)``, ``(q, 0)`` and ``q = t`` are supported.  A
single letter contributes ``psi * a^{|lam|-|mu|}`` (or ``phi * ...`` for the
dual family) when ``lam/mu`` is a horizontal strip and zero otherwise;
several letters are handled through the branching rule.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .core import (
    DegenerateParameterError,
    Partition,
    ShapeError,
    as_partition,
    b_factor,
    conjugate,
    frac,
    horizontal_strips_below,
    is_horizontal_strip,
    qpoch,
)

HL_P, HL_Q, QW_P, QW_Q, SCHUR = "HL_P", "HL_Q", "QW_P", "QW_Q", "SCHUR"
FAMILIES = (HL_P, HL_Q, QW_P, QW_Q, SCHUR)


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _hl_psi(lam: Partition, mu: Partition, t: Fraction) -> Fraction:
    # product over j with theta'_j = 0 and theta'_{j+1} = 1 of (1 - t^{m_j(mu)})
    lc, mc = conjugate(lam), conjugate(mu)
    val = Fraction(1)
    for j in range(1, lam[0] + 1):
        if lc[j - 1] - mc[j - 1] == 0 and lc[j] - mc[j] == 1:
            val *= 1 - t ** mu.multiplicity(j)
    return val


def _hl_phi(lam: Partition, mu: Partition, t: Fraction) -> Fraction:
    # product over i with theta'_i = 1 and theta'_{i+1} = 0 of (1 - t^{m_i(lam)})
    lc, mc = conjugate(lam), conjugate(mu)
    val = Fraction(1)
    for i in range(1, lam[0] + 1):
        if lc[i - 1] - mc[i - 1] == 1 and lc[i] - mc[i] == 0:
            val *= 1 - t ** lam.multiplicity(i)
    return val


def _qw_psi(lam: Partition, mu: Partition, q: Fraction) -> Fraction:
    # prod_{i <= l(mu)} (q;q)_{lam_i - lam_{i+1}} / ((q;q)_{lam_i - mu_i} (q;q)_{mu_i - lam_{i+1}})
    val = Fraction(1)
    for i in range(len(mu)):
        val *= qpoch(q, q, lam[i] - lam[i + 1])
        val /= qpoch(q, q, lam[i] - mu[i]) * qpoch(q, q, mu[i] - lam[i + 1])
    return val


def dual_ratio(family: str, lam, mu, param) -> Fraction:
    """b_lam / b_mu on the family's axis, so that Q_{lam/mu} = ratio * P_{lam/mu}."""
    lam, mu = as_partition(lam), as_partition(mu)
    param = frac(param) if param is not None else None
    if family in (HL_P, HL_Q, "HL"):
        num, den = b_factor(lam, 0, param), b_factor(mu, 0, param)
    elif family in (QW_P, QW_Q, "QW"):
        num, den = b_factor(lam, param, 0), b_factor(mu, param, 0)
    elif family == SCHUR:
        return Fraction(1)
    else:
        raise ValueError(f"unknown family {family!r}")
    if den == 0:
        raise DegenerateParameterError(f"b_mu vanishes for mu={mu}")
    return num / den


def skew_one(family: str, lam, mu, a, param=None) -> Fraction:
    """One-letter skew polynomial of the given family at letter ``a``."""
    _check_family(family)
    lam, mu = as_partition(lam), as_partition(mu)
    if not is_horizontal_strip(lam, mu):
        return Fraction(0)
    a = frac(a)
    coeff = _coeff_one(family, lam, mu, None if param is None else frac(param))
    return coeff * a ** (lam.size - mu.size)


@lru_cache(maxsize=200_000)
def _coeff_one(family: str, lam: Partition, mu: Partition, param) -> Fraction:
    if family == SCHUR:
        return Fraction(1)
    if param is None:
        raise ValueError(f"family {family} needs a parameter")
    if family == HL_P:
        return _hl_psi(lam, mu, param)
    if family == HL_Q:
        return _hl_phi(lam, mu, param)
    if family == QW_P:
        return _qw_psi(lam, mu, param)
    return _qw_psi(lam, mu, param) * dual_ratio(QW_Q, lam, mu, param)


def skew_multi(family: str, lam, mu, alphabet: Sequence, param=None) -> Fraction:
    """Skew polynomial in a finite alphabet, summed over interlacing chains."""
    _check_family(family)
    lam, mu = as_partition(lam), as_partition(mu)
    xs = tuple(frac(x) for x in alphabet)
    p = None if param is None else frac(param)
    if not lam.contains(mu):
        return Fraction(0)
    if len(lam) > len(mu) + len(xs):
        return Fraction(0)
    return _multi(family, lam, mu, xs, p)


@lru_cache(maxsize=500_000)
def _multi(family: str, lam: Partition, mu: Partition, xs: tuple, param) -> Fraction:
    if not xs:
        return Fraction(1) if lam == mu else Fraction(0)
    if len(xs) == 1:
        return skew_one(family, lam, mu, xs[0], param)
    if len(lam) > len(mu) + len(xs):
        return Fraction(0)
    a, rest = xs[-1], xs[:-1]
    total = Fraction(0)
    # P_{lam/mu}(rest, a) = sum_nu P_{lam/nu}(a) P_{nu/mu}(rest)
    for nu in horizontal_strips_below(lam, mu):
        first = skew_one(family, lam, nu, a, param)
        if first:
            total += first * _multi(family, nu, mu, rest, param)
    return total


def pad_rect(mu, n: int, N: int) -> Partition:
    """(n^N, mu): mu with N parts equal to n prepended."""
    mu = as_partition(mu)
    if mu[0] > n:
        raise ShapeError(f"mu_1 = {mu[0]} exceeds n = {n}")
    return Partition((n,) * N + mu.parts)


def complement_residual(lam, mu, n: int, alphabet: Sequence, q) -> Fraction:
    """Exact residual of q-Whittaker complementation for one pair mu ⊆ lam:

    (q;q)_{n-mu_1}/(q;q)_{n-lam_1} Q_{lam/mu}(x;q,0) - P_{(n^N,mu)/lam}(x^{-1};q,0) prod x_i^n,

    with N the alphabet length.
    """
    lam, mu = as_partition(lam), as_partition(mu)
    q = frac(q)
    xs = [frac(x) for x in alphabet]
    if lam[0] > n:
        raise ShapeError(f"lam_1 = {lam[0]} exceeds n = {n}")
    lhs = qpoch(q, q, n - mu[0]) / qpoch(q, q, n - lam[0]) * skew_multi(QW_Q, lam, mu, xs, q)
    rhs = skew_multi(QW_P, pad_rect(mu, n, len(xs)), lam, [1 / x for x in xs], q)
    for x in xs:
        rhs *= x**n
    return lhs - rhs


def clear_caches() -> None:
    _coeff_one.cache_clear()
    _multi.cache_clear()
