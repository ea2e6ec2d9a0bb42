"""Partitions, q-Pochhammer symbols and the exact scalar layer.

All scalars are :class:`fractions.Fraction`.  Infinite products are truncated
with an a-priori bound on the logarithm of the omitted tail, which is kept
below ``2**-100`` unless an explicit depth is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

Scalar = Fraction
Number = Union[int, Fraction]

#: log-magnitude budget for the dropped tail of an infinite product
TAIL_EPS = 2.0 ** -100


class DegenerateParameterError(ZeroDivisionError):
    """A denominator vanished at the requested parameter point."""


class DivergenceError(ValueError):
    """An infinite product or series does not converge at these parameters."""


class ShapeError(ValueError):
    """A partition or lattice boundary has the wrong shape."""


class DomainError(ValueError):
    """A parameter lies outside the allowed domain."""


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`.

    Floats are rejected so that exact code paths never silently round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    """Canonical ``p/q`` text (``/1`` omitted)."""
    x = frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class Partition:
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``.
    """

    parts: tuple

    def __init__(self, parts: Sequence[int] = ()):
        p = tuple(int(x) for x in parts)
        while p and p[-1] == 0:
            p = p[:-1]
        if any(x < 0 for x in p):
            raise ShapeError(f"negative part in {p}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ShapeError(f"parts not weakly decreasing: {p}")
        object.__setattr__(self, "parts", p)

    # -- basic statistics -------------------------------------------------
    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        """Zero-based part access; indices past the end give 0."""
        if i < 0:
            raise IndexError(i)
        return self.parts[i] if i < len(self.parts) else 0

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def multiplicity(self, i: int) -> int:
        """m_i, the number of parts equal to ``i`` (``i >= 1``)."""
        return self.parts.count(i)

    def multiplicities(self) -> dict:
        out: dict = {}
        for x in self.parts:
            out[x] = out.get(x, 0) + 1
        return out

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def arm(self, i: int, j: int) -> int:
        """Arm length of the cell in row ``i``, column ``j`` (zero-based)."""
        return self.parts[i] - j - 1

    def leg(self, i: int, j: int) -> int:
        """Leg length of the cell in row ``i``, column ``j`` (zero-based)."""
        return conjugate(self)[j] - i - 1

    def cells(self) -> Iterator[tuple]:
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j

    def contains(self, other: "Partition") -> bool:
        """True if the diagram of ``other`` fits inside this one."""
        if len(other) > len(self):
            return False
        return all(self[i] >= other[i] for i in range(len(other)))

    def dominates(self, other: "Partition") -> bool:
        """Dominance order on partitions of the same size."""
        if self.size != other.size:
            return False
        s = o = 0
        for i in range(max(len(self), len(other))):
            s += self[i]
            o += other[i]
            if s < o:
                return False
        return True

    def to_list(self) -> list:
        return list(self.parts)


EMPTY = Partition(())


def as_partition(x) -> Partition:
    if isinstance(x, Partition):
        return x
    return Partition(tuple(x))


@lru_cache(maxsize=None)
def _conj(parts: tuple) -> tuple:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > j) for j in range(parts[0]))


def conjugate(lam) -> Partition:
    """Reflect the Young diagram in its main diagonal."""
    lam = as_partition(lam)
    return Partition(_conj(lam.parts))


def b_factor(lam, q, t) -> Fraction:
    """b_lambda(q, t) = prod over cells of (1 - q^a t^(l+1)) / (1 - q^(a+1) t^l)."""
    lam = as_partition(lam)
    q, t = frac(q), frac(t)
    conj = _conj(lam.parts)
    val = Fraction(1)
    for i, row in enumerate(lam.parts):
        for j in range(row):
            a = row - j - 1
            leg = conj[j] - i - 1
            den = 1 - q ** (a + 1) * t**leg
            if den == 0:
                raise DegenerateParameterError(f"b_factor denominator vanishes at cell {(i, j)}")
            val *= (1 - q**a * t ** (leg + 1)) / den
    return val


def c_factor(lam, q, t) -> Fraction:
    """Integral-form normaliser c_lambda(q,t) = prod (1 - q^a t^(l+1)), so J = c P."""
    lam = as_partition(lam)
    q, t = frac(q), frac(t)
    conj = _conj(lam.parts)
    val = Fraction(1)
    for i, row in enumerate(lam.parts):
        for j in range(row):
            val *= 1 - q ** (row - j - 1) * t ** (conj[j] - i)
    return val


def enumerate_partitions(
    max_size: int, max_part: Optional[int] = None, max_length: Optional[int] = None
) -> list:
    """All partitions with ``|lam| <= max_size`` and the optional bounds.

    Ordered by size, then reverse-lexicographically within a size, e.g.
    ``(3), (2,1), (1,1,1)``.
    """
    if max_size < 0:
        raise ValueError("max_size must be non-negative")
    out = []
    for n in range(max_size + 1):
        out.extend(partitions_of(n, max_part, max_length))
    return out


def partitions_of(n: int, max_part: Optional[int] = None, max_length: Optional[int] = None) -> list:
    """Partitions of exactly ``n`` in reverse-lexicographic order."""
    return [Partition(p) for p in _partitions_of(n, n if max_part is None else max_part,
                                                   n if max_length is None else max_length)]


@lru_cache(maxsize=None)
def _partitions_of(n: int, max_part: int, max_length: int) -> tuple:
    if n == 0:
        return ((),)
    if max_length == 0 or max_part == 0:
        return ()
    res = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first, max_length - 1):
            res.append((first,) + rest)
    return tuple(res)


def is_horizontal_strip(lam, mu) -> bool:
    """lam/mu is a horizontal strip: mu ⊆ lam and lam_{i+1} <= mu_i."""
    lam, mu = as_partition(lam), as_partition(mu)
    if len(mu) > len(lam) or len(lam) > len(mu) + 1:
        return False
    for i in range(len(lam)):
        if not (lam[i + 1] <= mu[i] <= lam[i]):
            return False
    return True


def horizontal_strips_below(lam, floor=None) -> list:
    """All nu with lam/nu a horizontal strip (and nu ⊇ floor, if given)."""
    lam = as_partition(lam)
    floor = EMPTY if floor is None else as_partition(floor)
    ranges = []
    for i in range(len(lam)):
        lo = max(lam[i + 1], floor[i])
        hi = lam[i]
        if lo > hi:
            return []
        ranges.append(range(lo, hi + 1))
    out = []

    def rec(i, acc):
        if i == len(ranges):
            out.append(Partition(acc))
            return
        for v in ranges[i]:
            rec(i + 1, acc + (v,))

    rec(0, ())
    return out


# ---------------------------------------------------------------------------
# q-Pochhammer symbols
# ---------------------------------------------------------------------------


def _single_depth(z: float, q: float, eps: float = TAIL_EPS) -> int:
    """Smallest K with |log prod_{k>=K}(1 - q^k z)| provably below eps."""
    if z == 0 or q == 0:
        return 1
    K = 1
    while True:
        x = z * q**K
        if x < 0.5:
            bound = x / ((1 - q) * (1 - x))
            if bound < eps:
                return K
        K += 1


def qpoch_tail_bound(z, q, depth: int) -> float:
    """Bound on |log| of the factors of (z;q)_inf omitted after ``depth`` terms."""
    az, aq = abs(float(z)), abs(float(q))
    x = az * aq**depth
    if x >= 1:
        return math.inf
    return x / ((1 - aq) * (1 - x))


def _product_of_linear(terms) -> Fraction:
    """prod (1 - c) over Fractions c, with a single final reduction."""
    num, den = 1, 1
    for c in terms:
        num *= c.denominator - c.numerator
        den *= c.denominator
    return Fraction(num, den)


def qpoch(z, q, n=None, depth: Optional[int] = None) -> Fraction:
    """(z; q)_n.  ``n=None`` (or ``math.inf``) gives the truncated infinite product."""
    z, q = frac(z), frac(q)
    if n is not None and n != math.inf:
        n = int(n)
        if n < 0:
            raise ValueError("negative n")
        return _qpoch_finite(z, q, n)
    if abs(q) >= 1:
        raise DivergenceError(f"(z;q)_inf needs |q| < 1, got q={q}")
    if depth is None:
        depth = _single_depth(abs(float(z)), abs(float(q)))
    return _qpoch_finite(z, q, depth)


@lru_cache(maxsize=4096)
def _qpoch_finite(z: Fraction, q: Fraction, n: int) -> Fraction:
    if z == 0:
        return Fraction(1)
    return _product_of_linear(z * q**k for k in range(n))


def qpoch_double(z, q, u, depth: Optional[int] = None) -> Fraction:
    """(z; q, u)_inf = prod_{k,l >= 0} (1 - q^k u^l z), truncated.

    With ``depth`` given, the product runs over the square ``k, l < depth``.
    Otherwise each row ``l`` is cut adaptively and rows are dropped once
    ``|z| u^l`` is negligible, keeping the total tail below ``2**-100``.
    """
    z, q, u = frac(z), frac(q), frac(u)
    if abs(q) >= 1 or abs(u) >= 1:
        raise DivergenceError(f"(z;q,u)_inf needs |q|,|u| < 1, got q={q}, u={u}")
    if z == 0:
        return Fraction(1)
    if depth is not None:
        return _product_of_linear(z * q**k * u**l for k in range(depth) for l in range(depth))
    return _qpoch_double_auto(z, q, u)


def _double_plan(az: float, aq: float, au: float, eps: float = TAIL_EPS) -> list:
    """Row lengths K_l for the adaptive double product."""
    if au == 0:
        return [_single_depth(az, aq, eps)]
    # rows with l >= L are dropped wholesale; each kept row gets eps / (2 L)
    L = 1
    while True:
        x = az * au**L
        if x < 0.5 and x / ((1 - aq) * (1 - au) * (1 - x)) < eps / 2:
            break
        L += 1
    return [_single_depth(az * au**l, aq, eps / (2 * L)) for l in range(L)]


@lru_cache(maxsize=1024)
def _qpoch_double_auto(z: Fraction, q: Fraction, u: Fraction) -> Fraction:
    plan = _double_plan(abs(float(z)), abs(float(q)), abs(float(u)))
    return _product_of_linear(z * u**l * q**k for l, K in enumerate(plan) for k in range(K))


def q_binomial(n: int, k: int, q) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    q = frac(q)
    return qpoch(q, q, n) / (qpoch(q, q, k) * qpoch(q, q, n - k))


class QGeometric:
    """The q-geometric law P(chi = n) = q^n (q;q)_inf / (q;q)_n on n >= 0."""

    def __init__(self, q):
        q = frac(q)
        if not (0 <= q < 1):
            raise DomainError(f"q-geometric parameter must lie in [0,1), got {q}")
        self.q = q
        self._inf = qpoch(q, q)

    def pmf(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        return self.q**n * self._inf / qpoch(self.q, self.q, n)

    def cdf(self, k: int) -> Fraction:
        """P(chi <= k) = (q;q)_inf / (q;q)_k."""
        if k < 0:
            return Fraction(0)
        return self._inf / qpoch(self.q, self.q, k)

    def sample(self, rng) -> int:
        """Inverse-CDF draw using a ``numpy.random.Generator``-like ``rng``."""
        x = rng.random()
        n = 0
        while float(self.cdf(n)) < x:
            n += 1
        return n


def q_geometric(q) -> QGeometric:
    return QGeometric(q)


@dataclass(frozen=True)
class Truncated:
    """A truncated sum together with what is known about the dropped part.

    ``tail`` is a bound (or, where noted, an estimate) on the magnitude of the
    omitted terms; ``delta`` is the change contributed by the last increment
    of the truncation parameter.
    """

    value: Fraction
    tail: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    converged: bool = True
    cap: Optional[int] = None

    def __float__(self) -> float:
        return float(self.value)


def horizontal_strips_above(mu, max_size: int, max_part: Optional[int] = None) -> list:
    """All lam with lam/mu a horizontal strip, ``|lam| <= max_size`` and ``lam_1 <= max_part``."""
    mu = as_partition(mu)
    budget = max_size - mu.size
    if budget < 0:
        return []
    top = mu[0] + budget if max_part is None else min(max_part, mu[0] + budget)
    out = []

    def rec(i, acc, left):
        # row i (0-based) may grow from mu[i] up to the previous row of mu
        if i > len(mu):
            out.append(Partition(acc))
            return
        hi = top if i == 0 else mu[i - 1]
        for v in range(mu[i], min(hi, mu[i] + left) + 1):
            rec(i + 1, acc + (v,), left - (v - mu[i]))

    rec(0, (), budget)
    return out
