"""Deformed-boson lattice.

Vertical edges carry any number of arrows, horizontal edges at most one.
A vertex is described by ``(m, h_in, h_out)``: the number of arrows entering
from below and the left/right horizontal bits; the top occupancy is then
``m + h_in - h_out``.

Orientation: occupancy sequences for single rows are indexed by column,
``occ[0]`` being column 1, the rightmost column; arrows move right, i.e. from
higher to lower column index, and leave the row through the right boundary
after column 1.  Cylinder lattices (``rect_macdonald_pf`` and the uncolored
model) use left-to-right positions ``0..n`` instead; see ``_sweep_row``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    DivergenceError,
    ShapeError,
    Truncated,
    as_partition,
    enumerate_partitions,
    frac,
    qpoch,
)

BLACK, RED = "black", "red"


def vertex_weight(kind: str, m: int, in_left: int, out_right: int, rapidity, t) -> Fraction:
    """Weight of one boson vertex.

    black: (0,0) -> 1, (0,1) -> a, (1,0) -> 1 - t^{m+1}, (1,1) -> a
    red:   (0,0) -> b, (0,1) -> 1, (1,0) -> b (1 - t^{m+1}), (1,1) -> 1
    """
    if in_left not in (0, 1) or out_right not in (0, 1):
        raise ShapeError("horizontal edges carry at most one arrow")
    if m < 0 or m + in_left - out_right < 0:
        raise ShapeError(f"arrow conservation violated at m={m}, in={in_left}, out={out_right}")
    a, t = frac(rapidity), frac(t)
    key = (in_left, out_right)
    if kind == BLACK:
        return {(0, 0): Fraction(1), (0, 1): a, (1, 0): 1 - t ** (m + 1), (1, 1): a}[key]
    if kind == RED:
        return {(0, 0): a, (0, 1): Fraction(1), (1, 0): a * (1 - t ** (m + 1)), (1, 1): Fraction(1)}[key]
    raise ValueError(f"unknown vertex kind {kind!r}")


def occupancy(lam) -> tuple:
    """(m_1(lam), m_2(lam), ...) trimmed of trailing zeros."""
    lam = as_partition(lam)
    if not lam.length:
        return ()
    return tuple(lam.multiplicity(i) for i in range(1, lam[0] + 1))


def _at(seq: Sequence[int], i: int) -> int:
    return seq[i] if i < len(seq) else 0


def row_window(kind: str, rapidity, t, bottom: Sequence[int], top: Sequence[int],
               left_in: int, right_out: int, ncols: int) -> Fraction:
    """Finite row of ``ncols`` columns (1..ncols) with fixed boundary bits.

    Horizontal edges are forced column by column from the right boundary.
    Inconsistent boundary data gives exact zero.
    """
    h = right_out
    w = Fraction(1)
    for c in range(ncols):
        m, n = _at(bottom, c), _at(top, c)
        h_in = h + n - m
        if h_in not in (0, 1):
            return Fraction(0)
        w *= vertex_weight(kind, m, h_in, h, rapidity, t)
        if not w:
            return w
        h = h_in
    return w if h == left_in else Fraction(0)


@dataclass(frozen=True)
class BosonRow:
    """One semi-infinite boson row.

    ``bottom``/``top`` are occupancy sequences indexed from the rightmost
    column; ``left_in`` is the horizontal state far to the left.
    """

    kind: str
    rapidity: Fraction
    t: Fraction
    bottom: tuple
    top: tuple
    left_in: int
    right_out: int

    def __post_init__(self):
        object.__setattr__(self, "rapidity", frac(self.rapidity))
        object.__setattr__(self, "t", frac(self.t))
        object.__setattr__(self, "bottom", tuple(self.bottom))
        object.__setattr__(self, "top", tuple(self.top))


def row_pf(row: BosonRow) -> Fraction:
    """Semi-infinite row partition function as the limit of longer finite rows.

    Beyond the supports every vertex has ``m = 0`` and ``h_in = h_out``; that
    tail vertex has weight 1 for (black, left 0) and (red, left 1).  For the
    other two boundary choices the tail weight is the rapidity, so the limit
    is 0 when it lies in [0, 1) and does not exist otherwise.
    """
    ncols = max(len(row.bottom), len(row.top)) + 1
    tail = vertex_weight(row.kind, 0, row.left_in, row.left_in, row.rapidity, row.t)
    if tail != 1:
        if 0 <= tail < 1:
            return Fraction(0)
        raise DivergenceError(f"semi-infinite tail weight {tail} is not < 1")
    return row_window(row.kind, row.rapidity, row.t, row.bottom, row.top,
                      row.left_in, row.right_out, ncols)


def hl_row(lam, mu, a, t, right_out: int, dual: bool = False) -> Fraction:
    """Boson rows whose partition functions are one-letter skew Hall-Littlewood polynomials.

    ``dual=False``: black row, bottom m(lam), top m(mu), left 0.
    ``dual=True``: red row, bottom m(mu), top m(lam), left 1.
    """
    if dual:
        row = BosonRow(RED, a, t, occupancy(mu), occupancy(lam), 1, right_out)
    else:
        row = BosonRow(BLACK, a, t, occupancy(lam), occupancy(mu), 0, right_out)
    return row_pf(row)


# ---------------------------------------------------------------------------
# Yang-Baxter exchange and u-shift
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int) -> Iterable[tuple]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def yb_exchange_residual(a, b, t, bottom: Sequence[int], top: Sequence[int], j1: int, j2: int,
                         cross=None) -> Fraction:
    """Exact LHS - RHS of the boson Yang-Baxter exchange.

    LHS: (1-ab)/(1-tab) * [red row b (left 1, right j1) below black row a
    (left 0, right j2)], summed over the middle occupancies.
    RHS: black row a (right k2) below red row b (right k1), followed by a
    six-vertex cross with bottom input k2, left input k1, top output j2 and
    right output j1, summed over the middle occupancies and k1, k2.

    On the LHS the red arrow may be deposited arbitrarily far to the left
    and then carried back by the black row; columns beyond the supports are
    summed in closed form, contributing (1-t) ab / (1-ab) with the black
    row occupied at the window edge.
    """
    a, b, t = frac(a), frac(b), frac(t)
    m, n = tuple(bottom), tuple(top)
    K = max(len(m), len(n), 1)
    if cross is None:
        from .sixvertex import vertex_probs

        cross = vertex_probs(a, b, t)
    law = cross

    lhs = Fraction(0)
    # (red state at window edge, black state at window edge, tail weight)
    edges = [(1, 0, Fraction(1)), (0, 1, (1 - t) * a * b / (1 - a * b))]
    for red_left, black_left, tail_w in edges:
        total_p = sum(m) + red_left - j1
        if total_p < 0:
            continue
        for p in _compositions(total_p, K):
            w1 = row_window(RED, b, t, m, p, red_left, j1, K)
            if not w1:
                continue
            w2 = row_window(BLACK, a, t, p, n, black_left, j2, K)
            lhs += tail_w * w1 * w2
    lhs *= (1 - a * b) / (1 - t * a * b)

    rhs = Fraction(0)
    for k1 in (0, 1):
        for k2 in (0, 1):
            c = law.weight(k2, k1, j2, j1)
            if not c:
                continue
            total_p = sum(m) - k2
            if total_p < 0:
                continue
            for p in _compositions(total_p, K):
                w1 = row_window(BLACK, a, t, m, p, 0, k2, K)
                if not w1:
                    continue
                w2 = row_window(RED, b, t, p, n, 1, k1, K)
                rhs += c * w1 * w2
    return lhs - rhs


def u_shift_residual(a, u, t, bottom: Sequence[int], top: Sequence[int], j: int,
                     kind: str = BLACK) -> Fraction:
    """Exact residual of the u-power shift identity for one semi-infinite row.

    black (left 0): u^{sum i n_i} w_{ua} - u^{sum i m_i} w_a
    red (left 1):   u^{sum i n_i} w_a - u^{sum i m_i} w_{ua}
    with m = bottom, n = top, columns numbered from 1 at the right.
    """
    a, u = frac(a), frac(u)
    sm = sum((i + 1) * x for i, x in enumerate(bottom))
    sn = sum((i + 1) * x for i, x in enumerate(top))
    if kind == BLACK:
        lhs = u**sn * row_pf(BosonRow(BLACK, u * a, t, bottom, top, 0, j))
        rhs = u**sm * row_pf(BosonRow(BLACK, a, t, bottom, top, 0, j))
    elif kind == RED:
        lhs = u**sn * row_pf(BosonRow(RED, a, t, bottom, top, 1, j))
        rhs = u**sm * row_pf(BosonRow(RED, u * a, t, bottom, top, 1, j))
    else:
        raise ValueError(kind)
    return lhs - rhs


# ---------------------------------------------------------------------------
# Cylinder lattices with winding
# ---------------------------------------------------------------------------


def _sweep_row(occ: tuple, weight_fn) -> dict:
    """All top occupancies reachable in one row with empty left/right boundary.

    ``occ`` is indexed left to right; arrows move right.  ``weight_fn(m, h_in,
    h_out)`` gives the vertex weight.  Returns {top occupancy: weight}.
    """
    out: dict = {}
    ncols = len(occ)

    def rec(k: int, h_in: int, acc: tuple, w: Fraction):
        if k == ncols:
            if h_in == 0:
                out[acc] = out.get(acc, Fraction(0)) + w
            return
        m = occ[k]
        for h_out in (0, 1):
            top = m + h_in - h_out
            if top < 0:
                continue
            v = weight_fn(m, h_in, h_out)
            if v:
                rec(k + 1, h_out, acc + (top,), w * v)

    rec(0, 0, (), Fraction(1))
    return out


def _lattice_pf(bottom: tuple, top: tuple, rows: Sequence, weight_for_row) -> Fraction:
    states = {bottom: Fraction(1)}
    total_top = sum(top)
    for x in rows:
        wf = weight_for_row(x)
        nxt: dict = {}
        for occ, w in states.items():
            for new, v in _sweep_row(occ, wf).items():
                nxt[new] = nxt.get(new, Fraction(0)) + w * v
        states = nxt
    assert all(sum(s) == total_top for s in states)
    return states.get(top, Fraction(0))


def _winding_tail_bound(n_cols: int, n_rows: int, x: Sequence[Fraction], travel: int,
                        series_total: Fraction, partial: Fraction) -> Fraction:
    """Crude rigorous bound on the omitted winding terms.

    Each omitted lattice has at most 2^(columns * rows) configurations, every
    horizontal edge weight is at most max(x) <= 1 and at least ``travel`` such
    edges are occupied.
    """
    xmax = max(x) if x else Fraction(1)
    per = Fraction(2) ** (n_cols * n_rows) * (xmax**travel if xmax <= 1 else xmax ** (n_cols * n_rows))
    return per * (series_total - partial)


def rect_macdonald_pf(n: int, M: int, x: Sequence, q, t, winding_cap: int) -> Truncated:
    """Sum over mu (mu_1 <= n, |mu| <= cap) of q^{|mu|} times the black-vertex
    lattice with n+1 columns whose target is (t;t)_M/(q;q)_n P_{n^M}(x; q, t).

    Position 0 (left) starts with M + m_n(mu) arrows and ends with m_n(mu);
    position k in 1..n-1 starts and ends with m_{n-k}(mu); position n starts
    empty and ends with M.  All horizontal boundaries are empty.
    """
    if n < 1 or M < 1:
        raise ValueError("n, M >= 1 required")
    xs = [frac(v) for v in x]
    q, t = frac(q), frac(t)

    def weight_for_row(a):
        return lambda m, hi, ho: vertex_weight(BLACK, m, hi, ho, a, t)

    total = Fraction(0)
    partial_series = Fraction(0)
    for mu in enumerate_partitions(winding_cap, max_part=n):
        mult = [mu.multiplicity(i) for i in range(n + 1)]
        bottom = (M + mult[n],) + tuple(mult[n - k] for k in range(1, n)) + (0,)
        top = (mult[n],) + tuple(mult[n - k] for k in range(1, n)) + (M,)
        w = q**mu.size
        partial_series += w
        total += w * _lattice_pf(bottom, top, xs, weight_for_row)
    series_total = 1 / qpoch(q, q, n)
    tail = _winding_tail_bound(n + 1, len(xs), xs, n * M, series_total, partial_series)
    return Truncated(total, tail=tail, cap=winding_cap)


def uncolored_schur_winding_pf(n: int, M: int, x: Sequence, q, winding_cap: int) -> Truncated:
    """The uncolored winding partition function with weights 1_{a+b=c+d} x^d.

    M arrows enter at the bottom of position 0 and leave at the top of
    position n; position k in 1..n-1 carries m_{n-k} winding arrows, each
    weighted by q^{n-k}.  Truncated at sum_j j m_j <= cap.
    """
    if n < 1 or M < 0:
        raise ValueError("n >= 1 and M >= 0 required")
    xs = [frac(v) for v in x]
    q = frac(q)

    def weight_for_row(a):
        return lambda m, hi, ho: a if ho else Fraction(1)

    total = Fraction(0)
    partial_series = Fraction(0)
    # winding vectors (m_1..m_{n-1}) <-> partitions with parts <= n-1
    for mu in enumerate_partitions(winding_cap, max_part=n - 1):
        mult = [mu.multiplicity(i) for i in range(n)]
        mid = tuple(mult[n - k] for k in range(1, n))
        bottom = (M,) + mid + (0,)
        top = (0,) + mid + (M,)
        w = q**mu.size
        partial_series += w
        total += w * _lattice_pf(bottom, top, xs, weight_for_row)
    series_total = 1 / qpoch(q, q, n - 1)
    tail = _winding_tail_bound(n + 1, len(xs), xs, n * M, series_total, partial_series)
    return Truncated(total, tail=tail, cap=winding_cap)
