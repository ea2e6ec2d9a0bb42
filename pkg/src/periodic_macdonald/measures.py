"""Periodic q-Whittaker / Hall-Littlewood / Schur measures by truncated enumeration.

All sums are exact rationals over partitions with a size cap ``K``.  Every
truncated quantity comes back as a :class:`~periodic_macdonald.core.Truncated`
carrying the change between caps ``K-2`` and ``K`` and a convergence flag.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DomainError,
    Partition,
    Truncated,
    enumerate_partitions,
    format_rational,
    frac,
    horizontal_strips_above,
    qpoch,
    qpoch_double,
)
from .skewpolys import HL_P, HL_Q, QW_P, QW_Q, SCHUR, pad_rect, skew_multi, skew_one

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class MeasureSpec:
    """Alphabets ``a`` (length M), ``b`` (length N) and the scalars q, t, u."""

    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]
    q: Fraction = Fraction(0)
    t: Fraction = Fraction(0)
    u: Fraction = Fraction(0)

    def __init__(self, a: Sequence = (), b: Sequence = (), q=0, t=0, u=0):
        object.__setattr__(self, "a", tuple(frac(x) for x in a))
        object.__setattr__(self, "b", tuple(frac(x) for x in b))
        object.__setattr__(self, "q", frac(q))
        object.__setattr__(self, "t", frac(t))
        object.__setattr__(self, "u", frac(u))
        for name in ("q", "t", "u"):
            v = getattr(self, name)
            if not (0 <= v < 1):
                raise DomainError(f"{name} must lie in [0,1), got {v}")
        for x in self.a + self.b:
            if x < 0:
                raise DomainError(f"alphabet entries must be non-negative, got {x}")

    @property
    def M(self) -> int:
        return len(self.a)

    @property
    def N(self) -> int:
        return len(self.b)

    def replace(self, **kw) -> "MeasureSpec":
        d = dict(a=self.a, b=self.b, q=self.q, t=self.t, u=self.u)
        d.update(kw)
        return MeasureSpec(**d)

    def check_convergent(self) -> None:
        for x in self.a:
            for y in self.b:
                if x * y >= 1:
                    raise DomainError(f"need a_i b_j < 1, got {x} * {y}")


@dataclass(frozen=True)
class TruncationSpec:
    K: int = 12
    winding_cap: int = 10
    tol: float = 1e-10

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be non-negative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


def phi_norm(spec: MeasureSpec, q=None, t=None, u=None) -> Fraction:
    """Phi(a,b;q,t,u) = 1/(u;u)_inf prod_{i,j} (t a_i b_j; q,u)_inf / (a_i b_j; q,u)_inf.

    The keyword arguments override the corresponding scalars of ``spec``.
    """
    spec.check_convergent()
    q = spec.q if q is None else frac(q)
    t = spec.t if t is None else frac(t)
    u = spec.u if u is None else frac(u)
    val = 1 / qpoch(u, u)
    for x in spec.a:
        for y in spec.b:
            val *= qpoch_double(t * x * y, q, u) / qpoch_double(x * y, q, u)
    return val


def _by_size(terms: Iterable[Tuple[int, Fraction]], K: int, tol: float) -> Truncated:
    """Sum ``(size, value)`` pairs capped at K, reporting the K-2 -> K change."""
    total = Fraction(0)
    last = Fraction(0)
    for size, val in terms:
        if size <= K:
            total += val
            if size > K - 2:
                last += val
    return Truncated(total, tail=None, delta=abs(last), converged=float(abs(last)) < tol, cap=K)


def _scaled(tr: Truncated, factor: Fraction) -> Truncated:
    return Truncated(tr.value * factor, tr.tail, None if tr.delta is None else tr.delta * abs(factor),
                     tr.converged, tr.cap)


def _pair_terms(spec: "MeasureSpec", fam_p: str, fam_q: str, param, K: int,
                max_part: Optional[int] = None, max_length: Optional[int] = None):
    """Yield (lam, mu, P_{lam/mu}(a) * Q_{lam/mu}(b)) over mu ⊆ lam with |lam| <= K.

    lam is grown from mu one letter at a time, so only non-vanishing chains
    are visited.
    """
    for mu in enumerate_partitions(K, max_part, max_length):
        ups = _grow(mu, spec.a, fam_p, param, K, complement=False, max_part=max_part)
        downs: Dict[Partition, Fraction] = {}
        for (lam, _, _), w in _grow(mu, spec.b, fam_q, param, K, complement=False,
                                    max_part=max_part).items():
            downs[lam] = downs.get(lam, Fraction(0)) + w
        pa: Dict[Partition, Fraction] = {}
        for (lam, _, _), w in ups.items():
            pa[lam] = pa.get(lam, Fraction(0)) + w
        for lam in sorted(pa, key=lambda p: (p.size, p.parts)):
            if lam in downs and (max_length is None or len(lam) <= max_length):
                yield lam, mu, pa[lam] * downs[lam]


# ---------------------------------------------------------------------------
# q-Whittaker side
# ---------------------------------------------------------------------------


def pqw_shifted_cdf(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()) -> Truncated:
    """P(lam_1 + chi <= n) for lam ~ periodic q-Whittaker measure and chi q-geometric."""
    if n < 0:
        return Truncated(Fraction(0))
    q, u = spec.q, spec.u
    qinf = qpoch(q, q)

    def terms():
        for lam, mu, w in _pair_terms(spec, QW_P, QW_Q, q, trunc.K, max_part=n):
            yield lam.size, qinf / qpoch(q, q, n - lam[0]) * u ** mu.size * w

    raw = _by_size(terms(), trunc.K, trunc.tol)
    return _scaled(raw, 1 / phi_norm(spec, q=q, t=0, u=u))


def z_sum(n: int, N: int, q, u, x: Sequence, trunc: TruncationSpec = TruncationSpec()) -> Truncated:
    """Z_{n,N}(q,u;x) = sum_{mu_1 <= n} u^|mu| / (q;q)_{n-mu_1} P_{(n^N,mu)/mu}(x;q,0).

    Alphabet entries larger than one are allowed (only polynomials are evaluated).
    """
    q, u = frac(q), frac(u)
    xs = tuple(frac(v) for v in x)

    def terms():
        for mu in enumerate_partitions(trunc.K, n):
            w = u ** mu.size / qpoch(q, q, n - mu[0])
            if w:
                yield mu.size, w * skew_multi(QW_P, pad_rect(mu, n, N), mu, xs, q)

    return _by_size(terms(), trunc.K, trunc.tol)


def periodic_schur_cdf(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec(),
                       normalize: bool = False) -> Truncated:
    """sum_{lam_1 <= n, mu ⊆ lam} q^|mu| s_{lam/mu}(a) s_{lam/mu}(b).

    With ``normalize`` the sum is divided by the periodic Schur partition
    function 1/(q;q)_inf prod 1/(a_i b_j; q)_inf, giving P(lam_1 <= n).
    """
    if n < 0:
        return Truncated(Fraction(0))
    q = spec.q

    def terms():
        for lam, mu, w in _pair_terms(spec, SCHUR, SCHUR, None, trunc.K, max_part=n):
            yield lam.size, q ** mu.size * w

    raw = _by_size(terms(), trunc.K, trunc.tol)
    if normalize:
        raw = _scaled(raw, 1 / phi_norm(spec, q=q, t=q, u=q))
    return raw


def ims_rhs(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec(),
            normalize: bool = False) -> Truncated:
    """sum_{mu_1 + k <= n} q^k / (q;q)_k P_mu(a;q,0) Q_mu(b;q,0)."""
    if n < 0:
        return Truncated(Fraction(0))
    q = spec.q
    geo = [q**k / qpoch(q, q, k) for k in range(n + 1)]

    def terms():
        for mu in enumerate_partitions(trunc.K, n, min(spec.M, spec.N)):
            pa = skew_multi(QW_P, mu, (), spec.a, q)
            if pa:
                yield mu.size, sum(geo[: n - mu[0] + 1]) * pa * skew_multi(QW_Q, mu, (), spec.b, q)

    raw = _by_size(terms(), trunc.K, trunc.tol)
    if normalize:
        raw = _scaled(raw, 1 / phi_norm(spec, q=q, t=q, u=q))
    return raw


# ---------------------------------------------------------------------------
# Hall-Littlewood side
# ---------------------------------------------------------------------------


def _grow(start: Partition, letters: Sequence[Fraction], family: str, t: Fraction, K: int,
          complement: bool, keep_path: bool = False, max_part: Optional[int] = None) -> dict:
    """Propagate single-letter skew steps upward from ``start``.

    Returns ``{(top, marks[, path]): weight}`` where mark ``i`` records
    whether the length increased at step ``i`` (or did not, with ``complement``).
    """
    states = {(start, (), (start,) if keep_path else ()): Fraction(1)}
    for x in letters:
        nxt: dict = {}
        for (lam, marks, path), w in states.items():
            for nu in horizontal_strips_above(lam, K, max_part):
                c = skew_one(family, nu, lam, x, t)
                if not c:
                    continue
                grew = int(len(nu) > len(lam))
                key = (nu, marks + ((1 - grew) if complement else grew,),
                       path + (nu,) if keep_path else ())
                nxt[key] = nxt.get(key, 0) + w * c
        states = nxt
    return states


@dataclass
class JointTable:
    """Truncated joint law keyed by (base_length, up_marks, down_marks)."""

    table: Dict[Tuple[int, Bits, Bits], Fraction]
    tail: Fraction
    cap: int

    def total(self) -> Fraction:
        return sum(self.table.values(), Fraction(0))

    def get(self, n: int, s1: Sequence[int], s2: Sequence[int]) -> Fraction:
        return self.table.get((n, tuple(s1), tuple(s2)), Fraction(0))

    def length_marginal(self) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for (n, _, _), p in self.table.items():
            out[n] = out.get(n, Fraction(0)) + p
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["base_length", "up_marks", "down_marks", "probability"])
        for (n, s1, s2), p in sorted(self.table.items()):
            w.writerow([n, "".join(map(str, s1)), "".join(map(str, s2)), format_rational(p)])
        return buf.getvalue()


def _phl_chains(spec: MeasureSpec, K: int, keep_path: bool):
    """Yield (lam0, a-state key, b-state key, unnormalised weight)."""
    t, u = spec.t, spec.u
    for lam0 in enumerate_partitions(K):
        w0 = u ** lam0.size
        if not w0:
            continue
        ups = _grow(lam0, spec.a, HL_P, t, K, complement=False, keep_path=keep_path)
        downs = _grow(lam0, spec.b, HL_Q, t, K, complement=True, keep_path=keep_path)
        by_top: Dict[Partition, list] = {}
        for key, w in downs.items():
            by_top.setdefault(key[0], []).append((key, w))
        for ka, wa in ups.items():
            for kb, wb in by_top.get(ka[0], ()):
                yield lam0, ka, kb, w0 * wa * wb


def phl_joint(spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()) -> JointTable:
    """Joint law of (l(lam^(0)), [lam], [mu]^c) under the periodic Hall-Littlewood process.

    Chains are truncated at ``|lam^(M)| <= K``; the missing mass is reported as ``tail``.
    """
    phi = phi_norm(spec, q=0, t=spec.t, u=spec.u)
    table: Dict[Tuple[int, Bits, Bits], Fraction] = {}
    for lam0, ka, kb, w in _phl_chains(spec, trunc.K, keep_path=False):
        key = (len(lam0), ka[1], kb[1])
        table[key] = table.get(key, Fraction(0)) + w / phi
    jt = JointTable(table, Fraction(0), trunc.K)
    jt.tail = 1 - jt.total()
    return jt


def phl_shifted_length_cdf(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()) -> Truncated:
    """P(l(lam) + chi <= n), lam ~ periodic Hall-Littlewood measure, chi t-geometric."""
    if n < 0:
        return Truncated(Fraction(0))
    t, u = spec.t, spec.u
    tinf = qpoch(t, t)

    def terms():
        for lam, mu, w in _pair_terms(spec, HL_P, HL_Q, t, trunc.K, max_length=n):
            yield lam.size, tinf / qpoch(t, t, n - len(lam)) * u ** mu.size * w

    raw = _by_size(terms(), trunc.K, trunc.tol)
    return _scaled(raw, 1 / phi_norm(spec, q=0, t=t, u=u))


def hl_to_macdonald_lhs(n: int, spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()) -> Truncated:
    """sum_{lam_1 <= n, mu ⊆ lam} (t;t)_{m_n(mu)}/(t;t)_{m_n(lam)} u^|mu| P_{lam/mu}(a;0,t) Q_{lam/mu}(b;0,t)."""
    t, u = spec.t, spec.u

    def terms():
        for lam, mu, w in _pair_terms(spec, HL_P, HL_Q, t, trunc.K, max_part=n):
            ratio = qpoch(t, t, mu.multiplicity(n)) / qpoch(t, t, lam.multiplicity(n)) if n else Fraction(1)
            yield lam.size, ratio * u ** mu.size * w

    return _by_size(terms(), trunc.K, trunc.tol)


# ---------------------------------------------------------------------------
# Sampling and export
# ---------------------------------------------------------------------------


@dataclass
class ChainSample:
    lambdas: Tuple[Partition, ...]
    mus: Tuple[Partition, ...]
    approximate: bool
    tail: Fraction

    @property
    def observables(self) -> Tuple[int, Bits, Bits]:
        up = tuple(int(len(b) > len(a)) for a, b in zip(self.lambdas, self.lambdas[1:]))
        down = tuple(int(len(b) == len(a)) for a, b in zip(self.mus, self.mus[1:]))
        return len(self.lambdas[0]), up, down


def chain_table(spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec()):
    """Deterministically ordered list of ((lam chain, mu chain), probability) and the tail."""
    phi = phi_norm(spec, q=0, t=spec.t, u=spec.u)
    rows = []
    for lam0, ka, kb, w in _phl_chains(spec, trunc.K, keep_path=True):
        rows.append(((ka[2], kb[2]), w / phi))
    total = sum((p for _, p in rows), Fraction(0))
    return rows, 1 - total


def sample(spec: MeasureSpec, trunc: TruncationSpec = TruncationSpec(), seed: int = 0,
           size: int = 1, rows=None) -> List[ChainSample]:
    """Inverse-CDF draws of (lam chain, mu chain) from the truncated, renormalised table."""
    if rows is None:
        rows, tail = chain_table(spec, trunc)
    else:
        rows, tail = rows
    if not rows:
        raise ValueError("empty measure table; increase K")
    probs = np.array([float(p) for _, p in rows])
    cdf = np.cumsum(probs / probs.sum())
    rng = np.random.default_rng(seed)
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    idx = np.minimum(idx, len(rows) - 1)
    return [ChainSample(rows[k][0][0], rows[k][0][1], approximate=bool(tail), tail=tail) for k in idx]
