from fractions import Fraction

import pytest

from periodic_macdonald import contour
from periodic_macdonald.contour import LaurentExpr, QuadratureSpec, SeriesFactor
from periodic_macdonald.core import DomainError, ShapeError, enumerate_partitions, qpoch
from periodic_macdonald.measures import MeasureSpec, TruncationSpec, pqw_shifted_cdf, z_sum

RHO = Fraction(1, 3)


def _geometric_expr():
    # z^{-2} / (1 - z/3): constant term rho^2
    return LaurentExpr(1, factors=[SeriesFactor((1,), (Fraction(1),), (RHO,))], polys=[{(-2,): Fraction(1)}])


def test_series_constant_term_and_bound():
    res = contour.constant_term_series(_geometric_expr(), order=10)
    assert res.value == RHO**2
    # the dropped coefficients are rho^11 + rho^12 + ...
    assert res.tail == RHO**11 / (1 - RHO)


def test_series_truncation_error_within_bound():
    res = contour.constant_term_series(_geometric_expr(), order=1)
    assert res.value == 0
    assert abs(res.value - RHO**2) <= res.tail


def test_quadrature_constant_term():
    res = contour.constant_term_quadrature(_geometric_expr(), QuadratureSpec(nodes=16))
    assert res.converged
    assert abs(res.value - float(RHO**2)) < 1e-15


def test_series_factor_rejects_poles_on_circle():
    with pytest.raises(DomainError):
        SeriesFactor((1,), (Fraction(1),), (Fraction(1),))


def test_backends_agree_two_variables():
    spec = MeasureSpec((Fraction(1, 3),), (Fraction(1, 4),), q=Fraction(1, 5), u=Fraction(1, 6))
    quad, _ = contour.qtsym_rhs(2, spec)
    series, meta = contour.qtsym_rhs(2, spec, backend="series", order=16)
    assert abs(float(series) - quad) <= float(meta["value_bound"]) + 1e-14


def test_shifted_cdf_small_case():
    spec = MeasureSpec((Fraction(1, 3),), (Fraction(1, 4),), q=Fraction(1, 5), u=Fraction(1, 6))
    lhs = pqw_shifted_cdf(1, spec, TruncationSpec(K=16))
    rhs, meta = contour.qtsym_rhs(1, spec)
    assert meta["converged"]
    assert abs(float(lhs.value) - rhs) < 1e-12


def test_z_contour_small_case():
    x = (Fraction(1, 3),)
    q, u = Fraction(1, 5), Fraction(1, 6)
    s = z_sum(2, 1, q, u, x, TruncationSpec(K=16))
    c, _ = contour.z_contour(2, 1, q, u, x)
    assert abs(float(s.value) - c) < 1e-10


def test_hl_orthogonality_small():
    t = Fraction(1, 3)
    for lam in enumerate_partitions(2):
        for mu in enumerate_partitions(2):
            v, _ = contour.hl_orthogonality(lam, mu, 2, t, quad=QuadratureSpec(nodes=16, max_nodes=64))
            want = (1 - t) ** 2 / qpoch(t, t, 2 - len(lam)) if lam == mu and len(lam) <= 2 else 0
            assert abs(v - float(want)) < 1e-13


def test_skew_integral_rejects_long_shapes():
    with pytest.raises(ShapeError):
        contour.hl_skew_integral((1, 1, 1), (), (Fraction(1, 3),), Fraction(1, 3), 2)


def test_length_cdf_needs_separating_circle():
    spec = MeasureSpec((Fraction(1, 2),), (Fraction(3),), t=Fraction(1, 4), u=Fraction(1, 5))
    with pytest.raises((contour.ContourError, DomainError)):
        contour.hl_length_cdf_rhs(1, spec)
