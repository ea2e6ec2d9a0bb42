"""Stochastic six vertex model on M x N domains and its quasi-periodic chain.

Geometry of one domain: columns ``i = 1..M`` (left to right) carry rapidity
``z * a_i`` and receive the bottom inputs; rows ``j = 1..N`` (bottom to top)
carry rapidity ``b_j`` and receive the left inputs.  Arrows move up and
right, at most one per edge.

Vertex law with ``p = (1 - ab) / (1 - t ab)``:

==================  ==========================
input               output
==================  ==========================
none                none (probability 1)
bottom and left     top and right (probability 1)
bottom only         top with ``t p``, right with ``1 - t p``
left only           right with ``p``, top with ``1 - p``
==================  ==========================

Edge states of a domain are encoded as integers: bit ``i`` of the vertical
word is column ``i+1``; bit ``j`` of the horizontal word is row ``j+1``.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .core import DomainError, DivergenceError, format_rational, frac, q_geometric

Bits = Tuple[int, ...]


@dataclass(frozen=True)
class VertexLaw:
    """Branching probabilities of one stochastic vertex."""

    p: Fraction
    t: Fraction

    @property
    def up_given_bottom(self):
        return self.t * self.p

    @property
    def right_given_left(self):
        return self.p

    def weight(self, bottom_in: int, left_in: int, top_out: int, right_out: int):
        """Probability of the outgoing pair given the incoming pair."""
        if bottom_in + left_in != top_out + right_out:
            return 0 * self.p
        if bottom_in == left_in:
            return 1 + 0 * self.p
        if bottom_in:
            s = self.up_given_bottom
            return s if top_out else 1 - s
        s = self.right_given_left
        return s if right_out else 1 - s


def vertex_probs(a, b, t, exact: bool = True) -> VertexLaw:
    if exact:
        a, b, t = frac(a), frac(b), frac(t)
    else:
        a, b, t = float(a), float(b), float(t)
    if a * b >= 1 or a < 0 or b < 0 or not (0 <= t < 1):
        raise DomainError(f"need a, b >= 0, ab < 1 and t in [0,1); got a={a}, b={b}, t={t}")
    return VertexLaw((1 - a * b) / (1 - t * a * b), t)


def bernoulli_check(a, b, t) -> Fraction:
    """Max deviation between the output law of one vertex fed with independent
    Bernoulli(a/(1+a)) bottom and Bernoulli(1/(1+b)) left inputs and the same
    product law on (top, right).  Exact; zero when the product law is preserved."""
    a, b, t = frac(a), frac(b), frac(t)
    law = vertex_probs(a, b, t)
    pa, pb = a / (1 + a), 1 / (1 + b)

    def ber(x, p):
        return p if x else 1 - p

    worst = Fraction(0)
    for top, right in itertools.product((0, 1), repeat=2):
        out = sum(ber(bi, pa) * ber(li, pb) * law.weight(bi, li, top, right)
                  for bi in (0, 1) for li in (0, 1))
        worst = max(worst, abs(out - ber(top, pa) * ber(right, pb)))
    return worst


# ---------------------------------------------------------------------------
# One domain
# ---------------------------------------------------------------------------


def bits_of(word: int, width: int) -> Bits:
    return tuple((word >> k) & 1 for k in range(width))


def word_of(bits: Sequence[int]) -> int:
    return sum(int(b) << k for k, b in enumerate(bits))


@dataclass
class DomainTransfer:
    """Transition law of one M x N domain.

    ``table[(beta, ell)]`` maps (top word, right word) to its probability,
    where ``beta``/``top`` are M-bit vertical words and ``ell``/``right``
    N-bit horizontal words.
    """

    M: int
    N: int
    z: object
    table: Dict[Tuple[int, int], Dict[Tuple[int, int], object]]

    def row_sums(self):
        return {k: sum(v.values()) for k, v in self.table.items()}

    def matrix(self) -> np.ndarray:
        """Dense float matrix on combined words ``beta | ell << M`` (rows = inputs)."""
        n = 1 << (self.M + self.N)
        mat = np.zeros((n, n))
        for (beta, ell), dist in self.table.items():
            for (top, right), pr in dist.items():
                mat[beta | (ell << self.M), top | (right << self.M)] += float(pr)
        return mat


def domain_transfer(M: int, N: int, z, a: Sequence, b: Sequence, t, exact: bool = True) -> DomainTransfer:
    """Exact (or floating) transition law of one M x N domain with column
    rapidities ``z a_i`` and row rapidities ``b_j``.

    Rows are swept bottom to top; within a row, the horizontal arrow moves
    through columns 1..M.
    """
    if len(a) != M or len(b) != N:
        raise ValueError("alphabet lengths must match M and N")
    if exact:
        z = frac(z)
        av = [z * frac(x) for x in a]
        bv = [frac(x) for x in b]
    else:
        z = float(z)
        av = [z * float(x) for x in a]
        bv = [float(x) for x in b]
    laws = [[vertex_probs(av[i], bv[j], t, exact) for j in range(N)] for i in range(M)]
    one = Fraction(1) if exact else 1.0
    table = {}
    for beta in range(1 << M):
        for ell in range(1 << N):
            # state: (vertical word, right word so far) -> prob
            states = {(beta, 0): one}
            for j in range(N):
                h0 = (ell >> j) & 1
                nxt: dict = {}
                for (vert, right), pr in states.items():
                    # sweep columns with a horizontal bit
                    partial = {(vert, h0): pr}
                    for i in range(M):
                        law = laws[i][j]
                        step: dict = {}
                        for (v, h), w in partial.items():
                            vin = (v >> i) & 1
                            for top in (0, 1):
                                rout = vin + h - top
                                if rout not in (0, 1):
                                    continue
                                c = law.weight(vin, h, top, rout)
                                if not c:
                                    continue
                                nv = (v & ~(1 << i)) | (top << i)
                                key = (nv, rout)
                                step[key] = step.get(key, 0 * one) + w * c
                        partial = step
                    for (v, h), w in partial.items():
                        key = (v, right | (h << j))
                        nxt[key] = nxt.get(key, 0 * one) + w
                states = nxt
            table[(beta, ell)] = states
    return DomainTransfer(M, N, z, table)


# ---------------------------------------------------------------------------
# Quasi-periodic chain
# ---------------------------------------------------------------------------


@dataclass
class WindingJoint:
    """Joint law of (W, S1, S2); keys are (w, s1 bits, s2 bits)."""

    table: Dict[Tuple[int, Bits, Bits], object]
    tail: object
    cap: int
    M: int
    N: int

    def total(self):
        return sum(self.table.values())

    def marginal_s(self) -> Dict[Tuple[Bits, Bits], object]:
        out: dict = {}
        for (w, s1, s2), pr in self.table.items():
            out[(s1, s2)] = out.get((s1, s2), 0) + pr
        return out

    def get(self, w: int, s1: Sequence[int], s2: Sequence[int]):
        return self.table.get((w, tuple(s1), tuple(s2)), 0)

    def to_csv(self) -> str:
        """Columns winding, s1, s2, probability (p/q when exact); zero cells are omitted."""
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["winding", "s1", "s2", "probability"])
        for (w, s1, s2), pr in sorted(self.table.items()):
            if not pr:
                continue
            val = format_rational(pr) if isinstance(pr, Fraction) else repr(float(pr))
            out.writerow([w, "".join(map(str, s1)), "".join(map(str, s2)), val])
        return buf.getvalue()


def quasi_joint(L: int, cap: int, M: int, N: int, a: Sequence, b: Sequence, t, u,
                exact: bool = True) -> WindingJoint:
    """Law of (W, S1, S2) for the length-L quasi-periodic chain.

    Copy ``l`` (1..L) has column rapidities ``u^{l-1} a``.  The chain starts
    at copy L with no bottom arrows and a full left boundary; the top and
    right outputs of copy l feed the bottom and left of copy l-1, and copy 1
    emits (S1, S2).  W counts arrows entering domains from the bottom;
    mass with W > cap is moved to ``tail``.
    """
    if L < 1:
        raise ValueError("L >= 1 required")
    uu = frac(u) if exact else float(u)
    one = Fraction(1) if exact else 1.0
    states = {(0, (1 << N) - 1, 0): one}  # (bottom word, left word, W)
    tail = 0 * one
    for l in range(L, 0, -1):
        dt = domain_transfer(M, N, uu ** (l - 1), a, b, t, exact)
        nxt: dict = {}
        for (beta, ell, w), pr in states.items():
            w2 = w + bin(beta).count("1")
            if w2 > cap:
                tail += pr
                continue
            for (top, right), c in dt.table[(beta, ell)].items():
                key = (top, right, w2)
                nxt[key] = nxt.get(key, 0 * one) + pr * c
        states = nxt
    table = {}
    for (top, right, w), pr in states.items():
        if pr:
            table[(w, bits_of(top, M), bits_of(right, N))] = pr
    return WindingJoint(table, tail, cap, M, N)


def shift_by_geometric(joint: WindingJoint, u) -> WindingJoint:
    """Law of (W + chi, S1, S2) with chi an independent u-geometric variable,
    truncated at the same cap (overflow added to the tail)."""
    exact = isinstance(joint.tail, Fraction)
    geo = q_geometric(frac(u))
    pmf = [geo.pmf(k) if exact else float(geo.pmf(k)) for k in range(joint.cap + 1)]
    table: dict = {}
    tail = joint.tail
    for (w, s1, s2), pr in joint.table.items():
        kept = 0
        for k in range(joint.cap - w + 1):
            key = (w + k, s1, s2)
            table[key] = table.get(key, 0) + pr * pmf[k]
            kept += pmf[k]
        tail += pr * (1 - kept)
    return WindingJoint(table, tail, joint.cap, joint.M, joint.N)


def mc_sample(L: int, n_samples: int, seed: int, M: int, N: int, a: Sequence, b: Sequence,
              t, u, block: int = 20000) -> Dict[Tuple[int, Bits, Bits], int]:
    """Forward-simulate the length-L chain; returns counts of (W, S1, S2).

    Sample ``k`` draws its uniforms from a Philox stream keyed by
    ``(seed, k)``, so results do not depend on how samples are batched.
    """
    av = np.array([float(x) for x in a])
    bv = np.array([float(x) for x in b])
    tf, uf = float(t), float(u)
    per = L * M * N
    counts: dict = {}
    for start in range(0, n_samples, block):
        stop = min(n_samples, start + block)
        S = stop - start
        U = np.empty((S, per))
        for k in range(S):
            U[k] = np.random.Generator(np.random.Philox(key=[seed, start + k])).random(per)
        vert = np.zeros((S, M), dtype=np.int8)
        horiz = np.ones((S, N), dtype=np.int8)
        W = np.zeros(S, dtype=np.int64)
        col = 0
        for l in range(L, 0, -1):
            W += vert.sum(axis=1)
            z = uf ** (l - 1)
            for j in range(N):
                h = horiz[:, j].copy()
                for i in range(M):
                    ab = z * av[i] * bv[j]
                    p = (1 - ab) / (1 - tf * ab)
                    v = vert[:, i]
                    r = U[:, col]
                    col += 1
                    bottom_only = (v == 1) & (h == 0)
                    left_only = (v == 0) & (h == 1)
                    go_up = bottom_only & (r < tf * p)
                    turn_up = left_only & (r >= p)
                    new_v = np.where(bottom_only, go_up, np.where(left_only, turn_up, v)).astype(np.int8)
                    new_h = (v + h - new_v).astype(np.int8)
                    vert[:, i] = new_v
                    h = new_h
                horiz[:, j] = h
        for k in range(S):
            key = (int(W[k]), tuple(int(x) for x in vert[k]), tuple(int(x) for x in horiz[k]))
            counts[key] = counts.get(key, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# Periodic chain at u = 1 and its stationary law
# ---------------------------------------------------------------------------


def sector_states(M: int, N: int, arrows: Optional[int] = None) -> list:
    """Combined words ``beta | ell << M`` with the given number of arrows (default N)."""
    k = N if arrows is None else arrows
    return [w for w in range(1 << (M + N)) if bin(w).count("1") == k]


def periodic_step_matrix(M: int, N: int, a, b, t, z=1, exact: bool = True):
    """P(z) restricted to the N-arrow sector: (states, matrix as nested lists or ndarray)."""
    dt = domain_transfer(M, N, z, a, b, t, exact)
    states = sector_states(M, N)
    idx = {s: k for k, s in enumerate(states)}
    n = len(states)
    if exact:
        mat = [[Fraction(0)] * n for _ in range(n)]
    else:
        mat = np.zeros((n, n))
    for s in states:
        beta, ell = s & ((1 << M) - 1), s >> M
        for (top, right), pr in dt.table[(beta, ell)].items():
            mat[idx[s]][idx[top | (right << M)]] += pr
    return states, mat


def _exact_stationary(mat: list) -> list:
    """Solve pi P = pi, sum pi = 1 over the rationals by Gaussian elimination."""
    n = len(mat)
    # equations: sum_i pi_i (P_ij - delta_ij) = 0 for j < n-1, plus normalisation
    A = [[mat[i][j] - (1 if i == j else 0) for i in range(n)] for j in range(n)]
    rhs = [Fraction(0)] * n
    A[-1] = [Fraction(1)] * n
    rhs[-1] = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise DivergenceError("stationary system is singular (chain not ergodic)")
        A[c], A[piv] = A[piv], A[c]
        rhs[c], rhs[piv] = rhs[piv], rhs[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        rhs[c] *= inv
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
                rhs[r] -= f * rhs[c]
    return rhs


def stationary(M: int, N: int, a, b, t, exact: bool = True) -> Dict[Tuple[Bits, Bits], object]:
    """Stationary law of P(1) on the N-arrow sector, keyed by (S1 bits, S2 bits)."""
    states, mat = periodic_step_matrix(M, N, a, b, t, 1, exact)
    if exact:
        pi = _exact_stationary(mat)
    else:
        vals, vecs = np.linalg.eig(mat.T)
        k = int(np.argmin(np.abs(vals - 1)))
        v = np.real(vecs[:, k])
        pi = v / v.sum()
    return {(bits_of(s & ((1 << M) - 1), M), bits_of(s >> M, N)): pi[k] for k, s in enumerate(states)}


def bernoulli_stationary(M: int, N: int, a, b) -> Dict[Tuple[Bits, Bits], Fraction]:
    """Product Bernoulli(a_i/(1+a_i)) x Bernoulli(1/(1+b_j)) law conditioned on N arrows."""
    a = [frac(x) for x in a]
    b = [frac(x) for x in b]
    weights = {}
    for s in sector_states(M, N):
        beta, ell = bits_of(s & ((1 << M) - 1), M), bits_of(s >> M, N)
        w = Fraction(1)
        for i, x in enumerate(beta):
            w *= a[i] if x else 1
        for j, x in enumerate(ell):
            w *= 1 / b[j] if x else 1
        weights[(beta, ell)] = w
    z = sum(weights.values())
    return {k: v / z for k, v in weights.items()}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def stationarity_study(M: int, N: int, a, b, t, us: Sequence[float], L: int) -> list:
    """[(u, TV distance between the chain's (S1,S2) law and the stationary law)]."""
    pi = stationary(M, N, a, b, t, exact=False)
    out = []
    for u in us:
        uq = Fraction(str(u)) if not isinstance(u, Fraction) else u
        joint = quasi_joint(L, 10**9, M, N, a, b, t, uq, exact=False)
        out.append((u, total_variation(joint.marginal_s(), pi)))
    return out
