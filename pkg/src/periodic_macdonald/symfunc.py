"""Truncated ring of symmetric functions with exact Macdonald bases.

Elements are stored in either the monomial (``"m"``) or power-sum (``"p"``)
basis with :class:`~fractions.Fraction` coefficients.  Parameters ``(q, t)``
are always numeric rationals; there is no symbolic layer.

Macdonald polynomials are produced by Gram--Schmidt along a linear extension
of dominance order, which by the usual uniqueness argument reproduces
``P_lambda(x; q, t)`` exactly.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence

from .core import (
    DegenerateParameterError,
    DivergenceError,
    Partition,
    as_partition,
    b_factor,
    c_factor,
    format_rational,
    frac,
    partitions_of,
    qpoch,
)

DEFAULT_DEGREE_CAP = 12


class DegreeCapError(ValueError):
    """An operation would produce terms above the ring's degree cap."""


# ---------------------------------------------------------------------------
# Change of basis
# ---------------------------------------------------------------------------


def _count_assignments(lam: tuple, mu: tuple) -> int:
    """Number of maps f from the parts of lam to the slots of mu with
    sum_{f(i)=j} lam_i = mu_j -- the coefficient of m_mu in p_lam."""

    @lru_cache(maxsize=None)
    def rec(i: int, remaining: tuple) -> int:
        if i == len(lam):
            return 1 if not any(remaining) else 0
        total = 0
        for j, r in enumerate(remaining):
            if r >= lam[i]:
                nxt = remaining[:j] + (r - lam[i],) + remaining[j + 1 :]
                total += rec(i + 1, nxt)
        return total

    return rec(0, mu)


@lru_cache(maxsize=None)
def _p_in_m(d: int) -> dict:
    """{lam: {mu: coeff}} with p_lam = sum_mu coeff m_mu, all |lam| = d."""
    parts = partitions_of(d)
    return {
        lam: {mu: c for mu in parts if (c := _count_assignments(lam.parts, mu.parts))}
        for lam in parts
    }


@lru_cache(maxsize=None)
def _m_in_p(d: int) -> dict:
    """{lam: {mu: coeff}} with m_lam = sum_mu coeff p_mu, by back substitution.

    p_lam is supported on m_mu with mu dominating lam, so processing the
    partitions from the top of reverse-lex order makes the system triangular.
    """
    parts = partitions_of(d)
    pm = _p_in_m(d)
    out: dict = {}
    for lam in parts:
        row = pm[lam]
        vec: Dict[Partition, Fraction] = {lam: Fraction(1)}
        for mu, c in row.items():
            if mu == lam:
                continue
            for nu, v in out[mu].items():
                vec[nu] = vec.get(nu, Fraction(0)) - c * v
        diag = row[lam]
        out[lam] = {k: v / diag for k, v in vec.items() if v}
    return out


def z_lambda(lam) -> int:
    lam = as_partition(lam)
    out = 1
    for i, m in lam.multiplicities().items():
        out *= math.factorial(m) * i**m
    return out


# ---------------------------------------------------------------------------
# The ring element
# ---------------------------------------------------------------------------


class SymFunc:
    """A symmetric function truncated at ``degree_cap``.

    Parameters
    ----------
    coeffs : mapping from partitions (or part sequences) to rationals
    basis : ``"p"`` or ``"m"``
    degree_cap : maximal degree kept

    Products that would exceed the cap raise :class:`DegreeCapError` unless
    ``allow_truncation=True`` is passed, in which case the result carries
    ``truncated=True``.
    """

    __slots__ = ("coeffs", "basis", "degree_cap", "truncated")

    def __init__(self, coeffs=None, basis: str = "p", degree_cap: int = DEFAULT_DEGREE_CAP,
                 truncated: bool = False):
        if basis not in ("p", "m"):
            raise ValueError(f"unknown basis {basis!r}")
        clean: Dict[Partition, Fraction] = {}
        for k, v in (coeffs or {}).items():
            k = as_partition(k)
            if k.size > degree_cap:
                raise DegreeCapError(f"term {k} exceeds degree cap {degree_cap}")
            v = frac(v)
            if v:
                clean[k] = clean.get(k, Fraction(0)) + v
        self.coeffs = {k: v for k, v in clean.items() if v}
        self.basis = basis
        self.degree_cap = degree_cap
        self.truncated = truncated

    # -- constructors -------------------------------------------------------
    @classmethod
    def p(cls, lam, degree_cap: int = DEFAULT_DEGREE_CAP) -> "SymFunc":
        return cls({as_partition(lam): 1}, "p", degree_cap)

    @classmethod
    def m(cls, lam, degree_cap: int = DEFAULT_DEGREE_CAP) -> "SymFunc":
        return cls({as_partition(lam): 1}, "m", degree_cap)

    @classmethod
    def one(cls, degree_cap: int = DEFAULT_DEGREE_CAP) -> "SymFunc":
        return cls({Partition(): 1}, "p", degree_cap)

    @classmethod
    def zero(cls, degree_cap: int = DEFAULT_DEGREE_CAP) -> "SymFunc":
        return cls({}, "p", degree_cap)

    # -- conversions --------------------------------------------------------
    def to_p(self) -> "SymFunc":
        if self.basis == "p":
            return self
        out: Dict[Partition, Fraction] = {}
        for lam, c in self.coeffs.items():
            for mu, v in _m_in_p(lam.size)[lam].items():
                out[mu] = out.get(mu, Fraction(0)) + c * v
        return SymFunc(out, "p", self.degree_cap, self.truncated)

    def to_m(self) -> "SymFunc":
        if self.basis == "m":
            return self
        out: Dict[Partition, Fraction] = {}
        for lam, c in self.coeffs.items():
            for mu, v in _p_in_m(lam.size)[lam].items():
                out[mu] = out.get(mu, Fraction(0)) + c * v
        return SymFunc(out, "m", self.degree_cap, self.truncated)

    def in_basis(self, basis: str) -> "SymFunc":
        return self.to_p() if basis == "p" else self.to_m()

    # -- arithmetic ---------------------------------------------------------
    def _aligned(self, other: "SymFunc"):
        return self, other.in_basis(self.basis)

    def __add__(self, other: "SymFunc") -> "SymFunc":
        a, b = self._aligned(other)
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SymFunc(out, a.basis, min(a.degree_cap, b.degree_cap), a.truncated or b.truncated)

    def __neg__(self) -> "SymFunc":
        return SymFunc({k: -v for k, v in self.coeffs.items()}, self.basis, self.degree_cap,
                       self.truncated)

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + (-other)

    def scale(self, c) -> "SymFunc":
        c = frac(c)
        return SymFunc({k: c * v for k, v in self.coeffs.items()}, self.basis, self.degree_cap,
                       self.truncated)

    def __mul__(self, other):
        if isinstance(other, SymFunc):
            return self.multiply(other)
        return self.scale(other)

    __rmul__ = scale

    def multiply(self, other: "SymFunc", allow_truncation: bool = False) -> "SymFunc":
        cap = min(self.degree_cap, other.degree_cap)
        a, b = self.to_p(), other.to_p()
        out: Dict[Partition, Fraction] = {}
        truncated = a.truncated or b.truncated
        for k1, v1 in a.coeffs.items():
            for k2, v2 in b.coeffs.items():
                if k1.size + k2.size > cap:
                    if not allow_truncation:
                        raise DegreeCapError(f"product degree {k1.size + k2.size} exceeds cap {cap}")
                    truncated = True
                    continue
                key = Partition(sorted(k1.parts + k2.parts, reverse=True))
                out[key] = out.get(key, Fraction(0)) + v1 * v2
        res = SymFunc(out, "p", cap, truncated)
        return res.in_basis(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymFunc):
            return NotImplemented
        return (self - other).coeffs == {}

    def __hash__(self):
        return hash(frozenset(self.to_p().coeffs.items()))

    def coefficient(self, lam) -> Fraction:
        return self.coeffs.get(as_partition(lam), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_part(self, d: int) -> "SymFunc":
        return SymFunc({k: v for k, v in self.coeffs.items() if k.size == d}, self.basis,
                       self.degree_cap, self.truncated)

    def __repr__(self) -> str:
        terms = " + ".join(f"({format_rational(v)}){self.basis}{k}" for k, v in
                           sorted(self.coeffs.items(), key=lambda kv: (kv[0].size, kv[0].parts)))
        return f"SymFunc[{terms or '0'}]"

    def to_json(self) -> str:
        terms = [{"partition": k.to_list(), "coeff": format_rational(v)}
                 for k, v in sorted(self.coeffs.items(), key=lambda kv: (kv[0].size, kv[0].parts))]
        return json.dumps({"basis": self.basis, "terms": terms})

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, alphabet: Sequence) -> Fraction:
        return evaluate(self, alphabet)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _check_t(lam: Partition, t: Fraction):
    for part in lam.parts:
        if 1 - t**part == 0:
            raise DegenerateParameterError(f"1 - t^{part} vanishes at t={t}")


def pairing_weight(lam, q, t) -> Fraction:
    """<p_lam, p_lam>_{q,t} = z_lam prod (1 - q^lam_i) / (1 - t^lam_i)."""
    lam = as_partition(lam)
    q, t = frac(q), frac(t)
    _check_t(lam, t)
    w = Fraction(z_lambda(lam))
    for part in lam.parts:
        w *= (1 - q**part) / (1 - t**part)
    return w


def inner_product(f: SymFunc, g: SymFunc, q, t) -> Fraction:
    """The Macdonald (q,t) scalar product."""
    q, t = frac(q), frac(t)
    a, b = f.to_p(), g.to_p()
    if len(b.coeffs) < len(a.coeffs):
        a, b = b, a
    total = Fraction(0)
    for lam, c in a.coeffs.items():
        d = b.coeffs.get(lam)
        if d:
            total += c * d * pairing_weight(lam, q, t)
    return total


def _dict_inner(a: dict, b: dict, weights: dict) -> Fraction:
    if len(b) < len(a):
        a, b = b, a
    s = Fraction(0)
    for k, v in a.items():
        w = b.get(k)
        if w:
            s += v * w * weights[k]
    return s


@lru_cache(maxsize=256)
def _macdonald_degree(d: int, q: Fraction, t: Fraction) -> dict:
    """All P_lambda with |lambda| = d as p-basis dicts."""
    parts = partitions_of(d)
    weights = {lam: pairing_weight(lam, q, t) for lam in parts}
    mp = _m_in_p(d)
    done: list = []  # (lam, vec, norm)
    out = {}
    for lam in reversed(parts):  # 1^d first: a linear extension of dominance
        vec = dict(mp[lam])
        for mu, pv, norm in done:
            c = _dict_inner(mp[lam], pv, weights) / norm
            if c:
                for k, v in pv.items():
                    vec[k] = vec.get(k, Fraction(0)) - c * v
        vec = {k: v for k, v in vec.items() if v}
        norm = _dict_inner(vec, vec, weights)
        if norm == 0:
            raise DegenerateParameterError(
                f"Gram-Schmidt pivot vanishes for {lam} at q={q}, t={t}")
        done.append((lam, vec, norm))
        out[lam] = vec
    return out


def macdonald_P(lam, q, t, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """Monic Macdonald polynomial P_lam(x; q, t) in the p-basis."""
    lam = as_partition(lam)
    if lam.size > degree_cap:
        raise DegreeCapError(f"|{lam}| exceeds degree cap {degree_cap}")
    q, t = frac(q), frac(t)
    if lam.size == 0:
        return SymFunc.one(degree_cap)
    return SymFunc(_macdonald_degree(lam.size, q, t)[lam], "p", degree_cap)


def macdonald_Q(lam, q, t, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    return macdonald_P(lam, q, t, degree_cap).scale(b_factor(lam, q, t))


def integral_J(lam, q, t, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """Integral form J_lam = c_lam P_lam with c_lam = prod (1 - q^a t^(l+1))."""
    return macdonald_P(lam, q, t, degree_cap).scale(c_factor(lam, q, t))


def schur(lam, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """s_lam, i.e. P_lam at q = t."""
    return macdonald_P(lam, 0, 0, degree_cap)


def hall_littlewood_P(lam, t, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    return macdonald_P(lam, 0, t, degree_cap)


def q_whittaker_P(lam, q, degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    return macdonald_P(lam, q, 0, degree_cap)


def skew_via_inner(lam, mu, q, t, family: str = "P", degree_cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """Skew P_{lam/mu} (or Q_{lam/mu}) from <P_{lam/mu}, Q_nu> = <P_lam, Q_mu Q_nu>."""
    lam, mu = as_partition(lam), as_partition(mu)
    q, t = frac(q), frac(t)
    if family not in ("P", "Q"):
        raise ValueError("family must be 'P' or 'Q'")
    if not lam.contains(mu):
        return SymFunc.zero(degree_cap)
    d = lam.size - mu.size
    if family == "P":
        big, small, dual = macdonald_P, macdonald_Q, macdonald_P
    else:
        big, small, dual = macdonald_Q, macdonald_P, macdonald_Q
    top = big(lam, q, t, degree_cap)
    low = small(mu, q, t, degree_cap)
    out = SymFunc.zero(degree_cap)
    for nu in partitions_of(d):
        c = inner_product(top, low.multiply(small(nu, q, t, degree_cap)), q, t)
        if c:
            out = out + dual(nu, q, t, degree_cap).scale(c)
    return out


def omega(f: SymFunc, q, t) -> SymFunc:
    """omega_{q,t}(p_lam) = (-1)^{|lam|-l(lam)} prod (1-q^lam_i)/(1-t^lam_i) p_lam."""
    q, t = frac(q), frac(t)
    g = f.to_p()
    out = {}
    for lam, c in g.coeffs.items():
        _check_t(lam, t)
        w = Fraction((-1) ** (lam.size - lam.length))
        for part in lam.parts:
            w *= (1 - q**part) / (1 - t**part)
        out[lam] = c * w
    return SymFunc(out, "p", f.degree_cap, f.truncated)


def power_sums(alphabet: Sequence, kmax: int) -> list:
    """[p_0, p_1, ..., p_kmax] of a numeric alphabet (works for any field)."""
    xs = list(alphabet)
    out = [len(xs)]
    pw = list(xs)
    for _ in range(kmax):
        out.append(sum(pw) if pw else 0)
        pw = [a * b for a, b in zip(pw, xs)]
    return out


def evaluate(f: SymFunc, alphabet: Sequence):
    """Value of ``f`` at a finite alphabet (p_k -> sum_i x_i^k)."""
    g = f.to_p()
    if not g.coeffs:
        return Fraction(0)
    xs = [frac(x) if isinstance(x, (int, str)) else x for x in alphabet]
    kmax = max((lam[0] for lam in g.coeffs if lam.length), default=0)
    ps = power_sums(xs, kmax)
    total = Fraction(0)
    for lam, c in g.coeffs.items():
        term = c
        for part in lam.parts:
            term *= ps[part]
        total += term
    return total


def substitute_power_sums(f: SymFunc, images: Sequence):
    """Apply the ring homomorphism p_k -> images[k] (images[0] unused)."""
    g = f.to_p()
    total = 0
    for lam, c in g.coeffs.items():
        term = c
        for part in lam.parts:
            term = term * images[part]
        total = total + term
    return total


def cauchy_kernel(x: Sequence, y: Sequence, q, t, depth: Optional[int] = None) -> Fraction:
    """Pi(x, y; q, t) = prod_{i,j} (t x_i y_j; q)_inf / (x_i y_j; q)_inf."""
    q, t = frac(q), frac(t)
    val = Fraction(1)
    for xi in x:
        for yj in y:
            z = frac(xi) * frac(yj)
            if abs(z) >= 1:
                raise DivergenceError(f"|x_i y_j| = {z} >= 1")
            val *= qpoch(t * z, q, None, depth) / qpoch(z, q, None, depth)
    return val


def cauchy_partial_sum(x: Sequence, y: Sequence, q, t, max_size: int) -> Fraction:
    """sum_{|lam| <= max_size} P_lam(x) Q_lam(y), the truncated Cauchy sum."""
    total = Fraction(0)
    for d in range(max_size + 1):
        for lam in partitions_of(d):
            if lam.length > min(len(x), len(y)):
                continue
            total += evaluate(macdonald_P(lam, q, t), x) * evaluate(macdonald_Q(lam, q, t), y)
    return total
