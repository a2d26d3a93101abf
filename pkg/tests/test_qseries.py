import pytest
from sympy.polys.domains import QQ

from lattice_algebra import CharLattice, LaurentPoly, Monomial
from models import TruncationError
from qseries import QSeries, product_of_binomials, series_mul, series_scale, theta_expand


@pytest.fixture
def lattice():
    return CharLattice(('x', 'y'))


def poly(lattice, coeff=1, **exps):
    return LaurentPoly.monomial(lattice, exps, coeff)


def test_product_of_binomials_truncates(lattice):
    one = LaurentPoly.constant(lattice)
    series = product_of_binomials(lattice, {0: one}, [(1, poly(lattice, x=1)), (2, poly(lattice, y=1))], 2)
    assert series.coefficient(0) == one
    assert series.coefficient(1) == -poly(lattice, x=1)
    assert series.coefficient(2) == -poly(lattice, y=1)
    with pytest.raises(TruncationError):
        series.coefficient(3)


def test_theta_first_coefficients(lattice):
    x = Monomial.from_dict(lattice, {'x': 1})
    theta = theta_expand(x, 1)
    half = QQ(1, 2)
    assert theta.coefficient(0) == poly(lattice, x=half) - poly(lattice, x=-half)
    expected = (poly(lattice, x=half) + poly(lattice, x=-3 * half)
                - poly(lattice, x=3 * half) - poly(lattice, x=-half))
    assert theta.coefficient(1) == expected


@pytest.mark.parametrize('order', [1, 2, 4])
def test_theta_automorphy(lattice, order):
    """theta(x) = -q^(1/2) x theta(qx)"""
    x = Monomial.from_dict(lattice, {'x': 1, 'y': -2})
    left = theta_expand(x, order)
    right = series_scale(theta_expand(x, order, 1).shifted(QQ(1, 2)), -x.as_poly())
    assert left.agrees_with(right, through=order)


def test_theta_of_trivial_argument_vanishes(lattice):
    assert theta_expand(Monomial.one(lattice), 3).is_zero()


def test_theta_needs_positive_order(lattice):
    with pytest.raises(TruncationError):
        theta_expand(Monomial.from_dict(lattice, {'x': 1}), 0)


def test_mul_tracks_precision(lattice):
    a = QSeries(lattice, {0: poly(lattice, x=1), 1: poly(lattice, y=1)}, 3)
    b = QSeries(lattice, {1: poly(lattice, x=-1)}, 2)
    product = series_mul(a, b)
    assert product.order == 2
    assert product.coefficient(1) == LaurentPoly.constant(lattice)
    assert product.coefficient(2) == poly(lattice, x=-1, y=1)


def test_first_difference(lattice):
    a = QSeries(lattice, {0: 1, 2: poly(lattice, x=1)}, 3)
    b = QSeries(lattice, {0: 1}, 3)
    assert a.first_difference(b) == 2
    assert a.truncate(1).agrees_with(b.truncate(1))


def test_leading_of_zero_series(lattice):
    with pytest.raises(TruncationError):
        QSeries(lattice, {}, 2).leading()


def test_coefficients_beyond_order_are_dropped(lattice):
    series = QSeries(lattice, {0: 1, 5: poly(lattice, x=1)}, 2)
    assert 5 not in {int(k.numerator) for k in series.coeffs}
