import random

import pytest
from sympy.polys.domains import QQ

from lattice_algebra import (CharLattice, DegreePolytope, LatticeMap, LaurentPoly, Monomial,
                             RationalChar, deg_A, is_bounded, limit_along, to_qq, wedge_star)
from models import Boundedness, DegreeOfZeroError, LatticeMismatchError, LimitDivergesError

AXES = ('a1', 'a2', 'h')


@pytest.fixture
def lattice():
    return CharLattice(AXES)


def mono(lattice, coeff=1, **exps):
    return LaurentPoly.monomial(lattice, exps, coeff)


def random_class(rng, lattice, terms=3, spread=2):
    out = LaurentPoly.zero(lattice)
    for _ in range(rng.randint(1, terms)):
        exps = {a: rng.randint(-spread, spread) for a in AXES}
        if not any(exps.values()):
            exps['a1'] = 1
        out = out + mono(lattice, rng.choice([-2, -1, 1, 2]), **exps)
    return out


def random_poly(rng, lattice, terms=4, spread=2):
    out = LaurentPoly.zero(lattice)
    while out.is_zero():
        for _ in range(rng.randint(1, terms)):
            exps = {a: rng.randint(-spread, spread) for a in ('a1', 'a2')}
            out = out + mono(lattice, rng.randint(-3, 3), **exps)
    return out


class TestLaurentPoly:
    def test_parse_and_print_are_inverse(self, lattice):
        f = mono(lattice, 1, a1=1, h=QQ(1, 2)) - mono(lattice, 3, a2=-2)
        assert LaurentPoly.parse(str(f), lattice) == f

    def test_half_integer_exponent_needs_scale(self):
        coarse = CharLattice(AXES, 1)
        with pytest.raises(LatticeMismatchError):
            LaurentPoly.monomial(coarse, {'h': QQ(1, 2)})

    def test_mixed_scales_align(self, lattice):
        fine = lattice.rescaled(4)
        f = LaurentPoly.monomial(fine, {'a1': QQ(1, 4)})
        g = LaurentPoly.monomial(lattice, {'a1': QQ(1, 2)})
        assert (f * f) == g
        assert (f * f).lattice.scale == 4

    def test_monomial_inverse(self, lattice):
        m = mono(lattice, 2, a1=1, h=-1)
        assert m * m.monomial_inverse() == LaurentPoly.constant(lattice)

    def test_exact_monomial_quotient(self, lattice):
        one = LaurentPoly.constant(lattice)
        x = mono(lattice, 1, a1=1)
        a = one - x
        b = one - x.monomial_inverse()
        assert a.exact_monomial_quotient(b) == -x
        assert a.exact_monomial_quotient(one + x) is None

    def test_dual_inverts_characters(self, lattice):
        f = mono(lattice, 1, a1=1) + mono(lattice, 2, a2=-1, h=1)
        assert f.dual() == mono(lattice, 1, a1=-1) + mono(lattice, 2, a2=1, h=-1)

    def test_drop_axes_requires_independence(self, lattice):
        f = mono(lattice, 1, a1=1)
        assert f.drop_axes(['h']).lattice.axis_labels == ('a1', 'a2')
        with pytest.raises(LatticeMismatchError):
            f.drop_axes(['a1'])


class TestMonomial:
    def test_fractional_power_rescales(self, lattice):
        m = Monomial.from_dict(lattice, {'a1': 1})
        root = m ** QQ(1, 3)
        assert root.lattice.scale == 6
        assert root ** 3 == m

    def test_division(self, lattice):
        m = Monomial.from_dict(lattice, {'a1': 1, 'h': 1})
        n = Monomial.from_dict(lattice, {'h': 1})
        assert (m / n) == Monomial.from_dict(lattice, {'a1': 1})


class TestRationalChar:
    def test_cross_multiplication_equality(self, lattice):
        one = LaurentPoly.constant(lattice)
        x = mono(lattice, 1, a1=1)
        assert RationalChar(one - x * x, one - x) == RationalChar(one + x)

    def test_coerce_constant(self, lattice):
        assert RationalChar.coerce(0, lattice).is_zero()
        assert RationalChar.coerce(3, lattice) == LaurentPoly.constant(lattice, 3)

    def test_zero_denominator(self, lattice):
        with pytest.raises(ZeroDivisionError):
            RationalChar(LaurentPoly.constant(lattice), LaurentPoly.zero(lattice))


class TestLatticeMap:
    def test_substitution(self, lattice):
        target = CharLattice(('t', 'h'))
        phi = LatticeMap(lattice, target, {'a1': {'t': 1}, 'a2': {'t': -1, 'h': 1}})
        f = mono(lattice, 1, a1=2) + mono(lattice, 1, a2=1)
        assert phi(f) == LaurentPoly.monomial(target, {'t': 2}) + LaurentPoly.monomial(target, {'t': -1, 'h': 1})

    def test_missing_image(self, lattice):
        with pytest.raises(LatticeMismatchError):
            LatticeMap(lattice, CharLattice(('t',)))


class TestWedge:
    def test_homomorphism_on_random_classes(self, lattice):
        rng = random.Random(11)
        for _ in range(500):
            a, b = random_class(rng, lattice), random_class(rng, lattice)
            if (a + b).terms.get(lattice.zero()):
                continue
            assert wedge_star(a + b, omit_trivial=True) == wedge_star(a, omit_trivial=True) * wedge_star(b, omit_trivial=True)

    def test_inverse_of_negative(self, lattice):
        v = mono(lattice, 1, a1=1) + mono(lattice, 2, a2=1)
        assert wedge_star(-v) == wedge_star(v).inverse()

    def test_trivial_character(self, lattice):
        with pytest.raises(ValueError):
            wedge_star(LaurentPoly.constant(lattice))
        assert wedge_star(LaurentPoly.constant(lattice, 2), omit_trivial=True) == LaurentPoly.constant(lattice)


class TestDegrees:
    def test_minkowski_sum_law(self, lattice):
        rng = random.Random(5)
        axes = ('a1', 'a2')
        checked = 0
        while checked < 200:
            f, g = random_poly(rng, lattice), random_poly(rng, lattice)
            fg = f * g
            if fg.is_zero():
                continue
            checked += 1
            expected = deg_A(f, axes).minkowski_sum(deg_A(g, axes))
            assert expected.contains(deg_A(fg, axes))
            for direction in ((1, 0), (0, 1), (-1, 2), (3, -1), (-1, -1)):
                assert deg_A(fg, axes).max_along(direction) == expected.max_along(direction)

    def test_degree_of_zero(self, lattice):
        with pytest.raises(DegreeOfZeroError):
            deg_A(LaurentPoly.zero(lattice), ('a1',))

    def test_strict_needs_interior(self):
        lattice = CharLattice(('t',))
        one = LaurentPoly.constant(lattice)
        t = LaurentPoly.monomial(lattice, {'t': 1})
        assert is_bounded(one, one + t, ('t',)) is Boundedness.BOUNDED
        assert is_bounded(one, t.monomial_inverse() + t, ('t',)) is Boundedness.STRICTLY_BOUNDED
        assert is_bounded(t * t, one + t, ('t',)) is Boundedness.UNBOUNDED

    def test_two_dimensional_hull(self):
        square = DegreePolytope(('a1', 'a2'), frozenset({(QQ(0), QQ(0)), (QQ(2), QQ(0)),
                                                         (QQ(0), QQ(2)), (QQ(2), QQ(2))}))
        assert square.contains_point((QQ(1), QQ(1)), strict=True)
        assert square.contains_point((QQ(2), QQ(1)))
        assert not square.contains_point((QQ(2), QQ(1)), strict=True)
        assert not square.contains_point((QQ(3), QQ(1)))


class TestLimits:
    def test_strictly_bounded_limit_vanishes(self):
        lattice = CharLattice(('t', 'h'))
        rng = random.Random(3)
        sigma = {'t': 1}
        for _ in range(200):
            den = LaurentPoly.zero(lattice)
            while den.is_zero():
                den = sum((LaurentPoly.monomial(lattice, {'t': rng.randint(-2, 3), 'h': rng.randint(-1, 1)},
                                                rng.randint(1, 3)) for _ in range(rng.randint(1, 3))),
                          LaurentPoly.zero(lattice))
            top = den.max_grade(sigma)
            num = LaurentPoly.monomial(lattice, {'t': int(top.numerator) - rng.randint(1, 3), 'h': rng.randint(-2, 2)},
                                       rng.choice([-1, 1]))
            assert is_bounded(num, den, ('t',), along=sigma) is Boundedness.STRICTLY_BOUNDED
            assert limit_along(RationalChar(num, den), sigma).is_zero()

    def test_bounded_limit_is_leading_ratio(self):
        lattice = CharLattice(('t', 'h'))
        one = LaurentPoly.constant(lattice)
        t = LaurentPoly.monomial(lattice, {'t': 1})
        h = LaurentPoly.monomial(lattice, {'h': 1})
        value = limit_along(RationalChar(h * t + one, t + h), {'t': 1})
        assert value == h

    def test_divergent(self):
        lattice = CharLattice(('t',))
        t = LaurentPoly.monomial(lattice, {'t': 1})
        with pytest.raises(LimitDivergesError):
            limit_along(RationalChar(t * t, t + LaurentPoly.constant(lattice)), {'t': 1})


def test_to_qq_accepts_strings():
    assert to_qq('3/6') == QQ(1, 2)
    assert to_qq(-2) == QQ(-2)
