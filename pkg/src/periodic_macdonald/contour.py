"""Constant terms of products on the n-torus, computed two ways.

An integrand is a :class:`LaurentExpr`: a constant, finitely many Laurent
polynomials, and finitely many *series factors*

    N(w) / prod_k (1 - rho_k w),     w = z_1^{v_1} ... z_n^{v_n},

with every ``|rho_k| < 1``.  Expanding each series factor in powers of ``w``
gives an absolutely summable coefficient sequence, so the constant term
equals the normalised integral over the unit torus (and over any torus the
expansions stay valid on).

``constant_term_series`` truncates each series factor at a fixed order and
works in exact rationals.  Its error is bounded with l1 norms of coefficient
sequences (l1 is submultiplicative and dominates the constant term):

    |CT(F) - CT(F_trunc)| <= l1(polys) * sum_i tail_i * prod_{j != i} l1(f_j),

where ``l1(f_j)`` and ``tail_i`` come from the majorant
``sum |N_k| s^k / prod (1 - |rho_k| s)`` evaluated at ``s = 1``.

``constant_term_quadrature`` applies the trapezoid rule on an equal-radius
torus with node doubling.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import DomainError, ShapeError, Truncated, as_partition, frac, qpoch, qpoch_double
from .measures import MeasureSpec, phi_norm
from .symfunc import hall_littlewood_P

Exponent = Tuple[int, ...]


class ContourError(ValueError):
    """No admissible contour for the requested formula."""


@dataclass(frozen=True)
class SeriesFactor:
    direction: Exponent
    numerator: Tuple[Fraction, ...]
    poles: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        for r in self.poles:
            if abs(r) >= 1:
                raise DomainError(f"series factor needs |rho| < 1, got {r}")

    def coefficients(self, order: int) -> List[Fraction]:
        """Exact coefficients c_0..c_order of the expansion in w."""
        c = [Fraction(0)] * (order + 1)
        for k, a in enumerate(self.numerator[: order + 1]):
            c[k] = Fraction(a)
        for r in self.poles:
            # multiply by 1/(1 - r w): running sum c_k += r c_{k-1}
            for k in range(1, order + 1):
                c[k] += r * c[k - 1]
        return c

    def majorant(self, order: int) -> List[Fraction]:
        m = [Fraction(0)] * (order + 1)
        for k, a in enumerate(self.numerator[: order + 1]):
            m[k] = abs(Fraction(a))
        for r in self.poles:
            for k in range(1, order + 1):
                m[k] += abs(r) * m[k - 1]
        return m

    def l1_norm(self) -> Fraction:
        val = sum((abs(Fraction(a)) for a in self.numerator), Fraction(0))
        for r in self.poles:
            val /= 1 - abs(r)
        return val

    def tail(self, order: int) -> Fraction:
        if not self.poles:
            return sum((abs(Fraction(a)) for a in self.numerator[order + 1:]), Fraction(0))
        return self.l1_norm() - sum(self.majorant(order), Fraction(0))

    def evaluate(self, w: np.ndarray) -> np.ndarray:
        num = np.zeros_like(w)
        for a in reversed(self.numerator):
            num = num * w + float(a)
        for r in self.poles:
            num = num / (1 - float(r) * w)
        return num


@dataclass
class LaurentExpr:
    """Product ``const * prod(polys) * prod(factors)`` in n variables."""

    n: int
    factors: List[SeriesFactor] = field(default_factory=list)
    polys: List[Dict[Exponent, Fraction]] = field(default_factory=list)
    const: Fraction = Fraction(1)

    def times(self, other: "LaurentExpr") -> "LaurentExpr":
        if other.n != self.n:
            raise ValueError("variable counts differ")
        return LaurentExpr(self.n, self.factors + other.factors, self.polys + other.polys,
                           self.const * other.const)


@dataclass(frozen=True)
class QuadratureSpec:
    radius: float = 1.0
    nodes: int = 128
    max_nodes: int = 1024
    tol: float = 1e-13

    def __post_init__(self):
        if self.radius <= 0 or self.nodes < 1:
            raise ValueError("radius and nodes must be positive")


@dataclass
class QuadratureResult:
    value: complex
    nodes: int
    delta: float
    converged: bool

    def __float__(self) -> float:
        return float(self.value.real)


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------


def _unit(n: int, i: int, sign: int = 1) -> Exponent:
    return tuple(sign if k == i else 0 for k in range(n))


def _ratio(n: int, i: int, j: int) -> Exponent:
    v = [0] * n
    v[i] += 1
    v[j] -= 1
    return tuple(v)


def monomial(n: int, exps: Sequence[int], coeff=1) -> Dict[Exponent, Fraction]:
    return {tuple(exps): frac(coeff)}


def delta_tilde(n: int, q, u) -> LaurentExpr:
    """prod_{i != j} (1 - qu x)(1 - x) / ((1 - q x)(1 - u x)),  x = z_i / z_j."""
    q, u = frac(q), frac(u)
    num = (Fraction(1), -(1 + q * u), q * u)
    poles = tuple(r for r in (q, u) if r)
    fs = [SeriesFactor(_ratio(n, i, j), num, poles) for i in range(n) for j in range(n) if i != j]
    return LaurentExpr(n, fs)


def delta_hl(n: int, t) -> LaurentExpr:
    """prod_{i != j} (1 - x) / (1 - t x),  x = z_i / z_j."""
    t = frac(t)
    poles = (t,) if t else ()
    fs = [SeriesFactor(_ratio(n, i, j), (Fraction(1), Fraction(-1)), poles)
          for i in range(n) for j in range(n) if i != j]
    return LaurentExpr(n, fs)


def _poly_mul(a: Dict[Exponent, Fraction], b: Dict[Exponent, Fraction]) -> Dict[Exponent, Fraction]:
    out: Dict[Exponent, Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def dual_cauchy_factors(n: int, xs: Sequence, N: int) -> List[Dict[Exponent, Fraction]]:
    """prod_i z_i^N prod_{i,j} (1 + x_j / z_i), one Laurent polynomial per factor."""
    polys = [{tuple([N] * n): Fraction(1)}]
    for i in range(n):
        for x in xs:
            polys.append({(0,) * n: Fraction(1), _unit(n, i, -1): frac(x)})
    return polys


def dual_cauchy_poly(n: int, xs: Sequence, N: int) -> Dict[Exponent, Fraction]:
    """The same product expanded into a single Laurent polynomial."""
    poly = {(0,) * n: Fraction(1)}
    for f in dual_cauchy_factors(n, xs, N):
        poly = _poly_mul(poly, f)
    return poly


def symmetric_poly(f, n: int, invert: bool = False) -> Dict[Exponent, Fraction]:
    """A SymFunc restricted to n variables as a Laurent polynomial (in 1/z with ``invert``)."""
    out: Dict[Exponent, Fraction] = {}
    sign = -1 if invert else 1
    for lam, c in f.to_m().coeffs.items():
        lam = tuple(lam)
        if len(lam) > n:
            continue
        padded = lam + (0,) * (n - len(lam))
        for perm in set(itertools.permutations(padded)):
            e = tuple(sign * x for x in perm)
            out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------


def constant_term_series(e: LaurentExpr, order: int = 20) -> Truncated:
    """Exact constant term after truncating every series factor at ``order``.

    ``tail`` is a rigorous bound on the truncation error.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if e.n == 0:
        return Truncated(e.const, tail=Fraction(0))
    zero = (0,) * e.n
    acc: Dict[Exponent, Fraction] = {zero: Fraction(1)}
    for p in e.polys:
        acc = _poly_mul(acc, p)
    poly_l1 = sum((abs(c) for c in acc.values()), Fraction(0))
    for f in e.factors:
        coeffs = f.coefficients(order)
        nxt: Dict[Exponent, Fraction] = {}
        for ex, c in acc.items():
            for k, ck in enumerate(coeffs):
                if not ck:
                    continue
                key = tuple(x + k * v for x, v in zip(ex, f.direction))
                nxt[key] = nxt.get(key, Fraction(0)) + c * ck
        acc = nxt
    norms = [f.l1_norm() for f in e.factors]
    bound = Fraction(0)
    for i, f in enumerate(e.factors):
        term = f.tail(order)
        if term:
            for j, nj in enumerate(norms):
                if j != i:
                    term *= nj
            bound += term
    value = e.const * acc.get(zero, Fraction(0))
    return Truncated(value, tail=abs(e.const) * poly_l1 * bound, cap=order)


def _eval_grid(e: LaurentExpr, zs: List[np.ndarray]) -> np.ndarray:
    out = np.full(zs[0].shape, complex(e.const))
    for p in e.polys:
        acc = np.zeros(zs[0].shape, dtype=complex)
        for ex, c in p.items():
            term = np.full(zs[0].shape, complex(c))
            for z, k in zip(zs, ex):
                if k:
                    term = term * z**k
            acc = acc + term
        out = out * acc
    for f in e.factors:
        w = np.ones(zs[0].shape, dtype=complex)
        for z, k in zip(zs, f.direction):
            if k:
                w = w * z**k
        out = out * f.evaluate(w)
    return out


def _trapezoid(e: LaurentExpr, radius: float, m: int) -> complex:
    n = e.n
    nodes = radius * np.exp(2j * np.pi * np.arange(m) / m)
    if n == 1:
        return complex(np.sum(_eval_grid(e, [nodes])) / m)
    # loop over the first variable, vectorise over the rest; fixed summation order
    rest = np.meshgrid(*([nodes] * (n - 1)), indexing="ij")
    partial = np.empty(m, dtype=complex)
    for k in range(m):
        z1 = np.full(rest[0].shape, nodes[k])
        partial[k] = np.sum(_eval_grid(e, [z1] + list(rest)))
    return complex(np.sum(partial) / m**n)


def constant_term_quadrature(e: LaurentExpr, spec: QuadratureSpec = QuadratureSpec()) -> QuadratureResult:
    """Trapezoid rule on the torus |z_i| = radius, doubling nodes until stable."""
    if e.n == 0:
        return QuadratureResult(complex(e.const), 0, 0.0, True)
    m = spec.nodes
    prev = _trapezoid(e, spec.radius, m)
    while True:
        if 2 * m > spec.max_nodes:
            return QuadratureResult(prev, m, float("nan"), False)
        cur = _trapezoid(e, spec.radius, 2 * m)
        delta = abs(cur - prev)
        if delta <= spec.tol * max(1.0, abs(cur)):
            return QuadratureResult(cur, 2 * m, delta, True)
        prev, m = cur, 2 * m


def _ct(e: LaurentExpr, backend: str, quad: Optional[QuadratureSpec], order: int):
    """Return (value as float, metadata dict)."""
    if backend == "series":
        tr = constant_term_series(e, order)
        return tr.value, {"backend": "series", "order": order, "tail_bound": tr.tail}
    if backend == "quadrature":
        res = constant_term_quadrature(e, quad or QuadratureSpec())
        return res.value.real, {"backend": "quadrature", "nodes": res.nodes, "delta": res.delta,
                                "converged": res.converged}
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


def phi_tilde(n: int, a: Sequence, b: Sequence, q, u) -> Fraction:
    """n!(1-q)^n(1-u)^n / ((q;q)_inf (u;u)_inf (1-qu)^n prod (a_i b_j; q,u)_inf), with the ambient n."""
    q, u = frac(q), frac(u)
    den = qpoch(q, q) * qpoch(u, u) * (1 - q * u) ** n
    for x in a:
        for y in b:
            den *= qpoch_double(frac(x) * frac(y), q, u)
    return math.factorial(n) * (1 - q) ** n * (1 - u) ** n / den


def default_radius(points: Sequence[float]) -> float:
    return 1.1 * max([abs(p) for p in points] + [1e-300]) if points else 1.0


def qtsym_rhs(n: int, spec: MeasureSpec, backend: str = "quadrature",
              quad: Optional[QuadratureSpec] = None, order: int = 20):
    """prod b_j^n / Phi~ times CT[prod z^N prod (1 + a_j/z_i)(1 + 1/(b_j z_i)) Delta~(z;q,u)].

    Returns ``(value, metadata)``.  ``metadata['tail_bound']`` (series backend)
    bounds the error of the integral before the prefactor is applied; the
    scaled bound is reported as ``metadata['value_bound']``.
    """
    spec.check_convergent()
    N = spec.N
    letters = list(spec.a) + [1 / y for y in spec.b]
    e = LaurentExpr(n, polys=dual_cauchy_factors(n, letters, N)).times(delta_tilde(n, spec.q, spec.u))
    if quad is None:
        quad = QuadratureSpec(radius=default_radius([float(x) for x in letters]))
    pref = Fraction(1)
    for y in spec.b:
        pref *= y**n
    pref /= phi_tilde(n, spec.a, spec.b, spec.q, spec.u)
    val, meta = _ct(e, backend, quad, order)
    if "tail_bound" in meta:
        meta["value_bound"] = meta["tail_bound"] * pref
    return val * (pref if backend == "series" else float(pref)), meta


def hl_length_cdf_rhs(n: int, spec: MeasureSpec, backend: str = "quadrature",
                     quad: Optional[QuadratureSpec] = None, order: int = 30):
    """Contour side for P(l(lam) + chi <= n) on the periodic Hall-Littlewood measure.

    Integrand prod (1 - t a_j/z_i)/(1 - a_j/z_i) prod (1 - t z_i b_j)/(1 - z_i b_j) Delta~(z;t,u),
    prefactor Phi(a,b;t,0,u) / (Phi~(a,b;t,u) Phi(a,b;0,t,u)).
    """
    spec.check_convergent()
    t, u = spec.t, spec.u
    amax = max([float(x) for x in spec.a], default=0.0)
    bmax = max([float(y) for y in spec.b], default=0.0)
    if bmax > 0 and amax >= 1 / bmax:
        raise ContourError("no circle separates the a_j from the 1/b_j")
    if amax >= 1 or bmax >= 1:
        raise ContourError("series expansion on the unit torus needs a_j, b_j < 1")
    fs = []
    for i in range(n):
        for x in spec.a:
            fs.append(SeriesFactor(_unit(n, i, -1), (Fraction(1), -t * x), (x,)))
        for y in spec.b:
            fs.append(SeriesFactor(_unit(n, i, 1), (Fraction(1), -t * y), (y,)))
    e = LaurentExpr(n, fs).times(delta_tilde(n, t, u))
    if quad is None:
        lo, hi = amax, (1 / bmax if bmax else 2 * amax + 2)
        quad = QuadratureSpec(radius=math.sqrt(lo * hi) if lo > 0 else min(1.0, hi / 2))
    pref = phi_norm(spec, q=t, t=0, u=u) / (phi_tilde(n, spec.a, spec.b, t, u) * phi_norm(spec, q=0, t=t, u=u))
    val, meta = _ct(e, backend, quad, order)
    if "tail_bound" in meta:
        meta["value_bound"] = meta["tail_bound"] * pref
    return val * (pref if backend == "series" else float(pref)), meta


def z_contour(n: int, N: int, q, u, x: Sequence, backend: str = "quadrature",
              quad: Optional[QuadratureSpec] = None, order: int = 20):
    """(1-qu)^n / (n!(1-q)^n(1-u)^n) CT[prod z_i^N prod (1 + x_j/z_i) Delta~(z;q,u)]."""
    q, u = frac(q), frac(u)
    e = LaurentExpr(n, polys=dual_cauchy_factors(n, x, N)).times(delta_tilde(n, q, u))
    if quad is None:
        quad = QuadratureSpec(radius=default_radius([float(v) for v in x]))
    pref = (1 - q * u) ** n / (math.factorial(n) * (1 - q) ** n * (1 - u) ** n)
    val, meta = _ct(e, backend, quad, order)
    return val * (pref if backend == "series" else float(pref)), meta


def hl_pairing(f_poly: Dict[Exponent, Fraction], g_poly_inv: Dict[Exponent, Fraction], n: int, t,
               extra: Sequence[SeriesFactor] = (), backend: str = "quadrature",
               quad: Optional[QuadratureSpec] = None, order: int = 30):
    """<f, g>'_n = (1/n!) CT[f(z) g(1/z) Delta(z;0,t)] with g already inverted."""
    e = LaurentExpr(n, list(extra), [f_poly, g_poly_inv], Fraction(1, math.factorial(n)))
    e = e.times(delta_hl(n, t))
    return _ct(e, backend, quad, order)


def hl_orthogonality(lam, mu, n: int, t, backend: str = "quadrature",
                     quad: Optional[QuadratureSpec] = None):
    """<P_lam(z;0,t), Q_mu(z;0,t)>'_n; expected (1-t)^n/(t;t)_{n-l(lam)} when lam = mu."""
    from .symfunc import macdonald_Q

    lam, mu = as_partition(lam), as_partition(mu)
    t = frac(t)
    f = symmetric_poly(hall_littlewood_P(lam, t), n)
    g = symmetric_poly(macdonald_Q(mu, 0, t), n, invert=True)
    if not f or not g:
        return 0.0, {"backend": backend, "empty": True}
    return hl_pairing(f, g, n, t, backend=backend, quad=quad)


def hl_skew_integral(lam, mu, x: Sequence, q, n: int, backend: str = "quadrature",
                     quad: Optional[QuadratureSpec] = None, order: int = 30):
    """(q;q)_{n-l(lam)} / (1-q)^n <P_lam(z), Q_mu(z) Pi(z,x)>'_n with HL parameter q.

    Pi(z,x) = prod (1 - q z_i x_j)/(1 - z_i x_j); evaluated at 1/z it becomes
    a product of series factors in 1/z_i.
    """
    from .symfunc import macdonald_Q

    lam, mu = as_partition(lam), as_partition(mu)
    if len(lam) > n:
        raise ShapeError(f"l(lam) = {len(lam)} exceeds n = {n}")
    q = frac(q)
    xs = [frac(v) for v in x]
    if any(abs(v) >= 1 for v in xs):
        raise ContourError("letters must have modulus < 1")
    f = symmetric_poly(hall_littlewood_P(lam, q), n)
    g = symmetric_poly(macdonald_Q(mu, 0, q), n, invert=True)
    if not f or not g:
        return 0.0, {"backend": backend, "empty": True}
    extra = [SeriesFactor(_unit(n, i, -1), (Fraction(1), -q * v), (v,)) for i in range(n) for v in xs]
    if quad is None:
        quad = QuadratureSpec(radius=1.0)
    val, meta = hl_pairing(f, g, n, q, extra, backend, quad, order)
    pref = qpoch(q, q, n - len(lam)) / (1 - q) ** n
    return val * (pref if backend == "series" else float(pref)), meta

