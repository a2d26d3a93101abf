import pytest

from kirwan_restriction import (Polarization, classify_weight, epsilon, polarization_restriction, restrict_character,
                                restrictions_for, tangent_class, x_character, y_character)
from lattice_algebra import LaurentPoly, Monomial
from models import Coordinate, GenericityError, WeightType


def char(kr, coeff=1, **exps):
    return LaurentPoly.monomial(kr.lattice, exps, coeff)


def test_tp1_restrictions(tp1):
    kr = restrictions_for(tp1)
    p1, p2 = tp1.fixed_points
    assert kr.u(0, p1) == char(kr, a1=1, h=1)
    assert kr.u(1, p1) == char(kr, h=1)
    assert kr.u(0, p2) == char(kr, h=1)
    assert kr.u(1, p2) == char(kr, a1=-1, h=1)
    assert kr.epsilon(p1, 0) == 1


def test_tp1_tangent_and_polarization(tp1):
    kr = restrictions_for(tp1)
    p1 = tp1.fixed_points[0]
    assert kr.tangent_class(p1) == char(kr, a1=1, h=1) + char(kr, a1=-1)
    standard = kr.polarization_restriction(Polarization.standard(2), p1)
    assert standard == char(kr, a1=1, h=1) + char(kr, h=1) - LaurentPoly.constant(kr.lattice)


def test_polarization_halves_tangent(arrangement):
    """T^1/2 + opposite = T, and T = T^1/2 + hbar (T^1/2)^dual"""
    kr = restrictions_for(arrangement)
    standard = Polarization.standard(arrangement.n)
    hbar = char(kr, h=1)
    for p in arrangement.fixed_points:
        half = kr.polarization_restriction(standard, p)
        other = kr.polarization_restriction(standard.opposite(), p)
        tangent = kr.tangent_class(p)
        assert half + other == tangent
        assert half + hbar * half.dual() == tangent


def test_calibration_checks_pass(arrangement):
    checks = restrictions_for(arrangement).calibration_checks()
    assert all(c.passed for c in checks), [c.detail for c in checks if not c.passed]


def test_hbar_rule(arrangement):
    kr = restrictions_for(arrangement)
    for p in arrangement.fixed_points:
        for e in p.complement:
            expected = 1 if p.beta_pairing(e, arrangement.eta) > 0 else 0
            assert kr.epsilon(p, e) == expected
            assert all(kr.u(e, p).value(a) == 0 for a in arrangement.a_axes)


def test_split_by_sign(tp1):
    kr = restrictions_for(tp1)
    attracting, repelling, trivial = kr.split_by_sign(kr.tangent_class(tp1.fixed_points[0]))
    assert attracting == char(kr, a1=1, h=1)
    assert repelling == char(kr, a1=-1)
    assert trivial.is_zero()


def test_classify_weight(tp1):
    kr = restrictions_for(tp1)
    p1, p2 = tp1.fixed_points
    assert kr.classify_weight(p1, 0) is WeightType.ATTRACTING
    assert kr.classify_weight(p2, 1) is WeightType.REPELLING


def test_opposite_polarization_flags():
    pol = Polarization.standard(3).opposite()
    assert pol.choices == (Coordinate.Y,) * 3
    assert pol.flags() == 'yyy/y'
    assert pol.opposite() == Polarization.standard(3)


@pytest.mark.parametrize('fixture', ['tp2', 'rank2'])
def test_restriction_table_shape(fixture, request):
    data = request.getfixturevalue(fixture)
    table = restrictions_for(data).table()
    assert set(table) == {p.label for p in data.fixed_points}
    assert all(len(row) == data.n for row in table.values())


def test_module_level_operations(tp2):
    kr = restrictions_for(tp2)
    standard = Polarization.standard(tp2.n)
    hbar = Monomial.from_dict(kr.lattice, {'h': 1})
    for p in tp2.fixed_points:
        for e in range(tp2.n):
            assert restrict_character(x_character(tp2.n, e), p) == kr.u(e, p)
            assert restrict_character(y_character(tp2.n, e), p) == kr.u(e, p).inverse() * hbar
            assert epsilon(p, e) == kr.epsilon(p, e)
        for e in p.base:
            assert classify_weight(p, e) is kr.classify_weight(p, e)
        assert tangent_class(p) == kr.tangent_class(p)
        assert polarization_restriction(standard, p) == kr.polarization_restriction(standard, p)


def test_classify_weight_on_a_wall(tp1):
    with pytest.raises(GenericityError):
        classify_weight(tp1.fixed_points[0], 0, zeta=(0,))
