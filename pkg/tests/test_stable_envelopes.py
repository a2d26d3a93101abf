import random

import pytest
from sympy.polys.domains import QQ

from kirwan_restriction import Polarization, restrictions_for
from lattice_algebra import LaurentPoly
from models import SlopeNotGenericError
from stable_envelopes import (Slope, build_opposite, build_stab, check_axioms, check_diagonal_calibration,
                              check_duality, diagonal_value, duality_pairing, random_slope, stab_order)

P1, P2 = '{e1}', '{e2}'


def char(data, coeff=1, **exps):
    return LaurentPoly.monomial(restrictions_for(data).lattice, exps, coeff)


@pytest.fixture
def tp1_slope():
    return Slope.parse('1/3,1/5')


def test_slope_parse_and_print():
    slope = Slope.parse('1/3, -2/7,0')
    assert slope.coefficients == (QQ(1, 3), QQ(-2, 7), QQ(0))
    assert str(slope) == '1/3,-2/7,0'
    assert str(-slope) == '-1/3,2/7,0'


def test_kahler_image_controls_genericity(tp1):
    standard = Polarization.standard(2)
    assert Slope.parse('1/3,1/5').kahler_image(tp1, standard) == (QQ(-7, 15),)
    assert Slope.parse('1/3,1/5').is_generic(tp1, standard)
    assert not Slope.zero(2).is_generic(tp1, standard)


def test_non_generic_slope_is_rejected(tp1):
    with pytest.raises(SlopeNotGenericError):
        build_stab(tp1, slope=Slope.zero(2))


def test_tp1_diagonal(tp1):
    p1, p2 = tp1.fixed_points
    one = char(tp1)
    assert diagonal_value(p1) == char(tp1, h=-1) * (one - char(tp1, a1=-1))
    assert diagonal_value(p2) == char(tp1, h=QQ(-1, 2)) * (one - char(tp1, a1=1, h=-1))


@pytest.mark.parametrize('text,power', [('1/3,1/5', 0), ('1/2,2/3', 1), ('-1/3,-1/4', -1)])
def test_tp1_envelope(tp1, text, power):
    stab = build_stab(tp1, slope=Slope.parse(text))
    one = char(tp1)
    assert stab[(P1, P1)] == diagonal_value(tp1.fixed_points[0])
    assert stab[(P2, P2)] == diagonal_value(tp1.fixed_points[1])
    assert stab[(P1, P2)].is_zero()
    expected = (char(tp1, h=QQ(-1, 2)) - char(tp1, h=QQ(-3, 2))) * char(tp1, a1=power)
    assert stab[(P2, P1)] == expected


def test_tp1_opposite_envelope(tp1, tp1_slope):
    opposite = build_opposite(build_stab(tp1, slope=tp1_slope))
    one = char(tp1)
    assert opposite[(P1, P1)] == one - char(tp1, a1=1, h=1)
    assert opposite[(P2, P2)] == char(tp1, h=QQ(1, 2)) * (one - char(tp1, a1=-1))
    assert opposite[(P1, P2)] == one - char(tp1, h=1)
    assert opposite[(P2, P1)].is_zero()


@pytest.mark.parametrize('seed', [7, 8, 9])
def test_axioms_hold(arrangement, seed):
    stab = build_stab(arrangement, slope=random_slope(arrangement, rng=random.Random(seed)))
    checks = check_axioms(stab)
    assert all(c.passed for c in checks), [(c.name, c.witness) for c in checks if not c.passed]


def test_diagonal_calibration(arrangement):
    assert check_diagonal_calibration(arrangement).passed


def test_mutated_diagonal_fails(tp1, tp1_slope):
    stab = build_stab(tp1, slope=tp1_slope)
    broken = stab.mutated(P1, P1, char(tp1, a1=1))
    failed = {c.name for c in check_axioms(broken) if not c.passed}
    assert 'stab_diagonal' in failed


def test_mutated_support_fails(tp1, tp1_slope):
    stab = build_stab(tp1, slope=tp1_slope)
    broken = stab.mutated(P1, P2, char(tp1, h=1))
    failed = {c.name for c in check_axioms(broken) if not c.passed}
    assert 'stab_support' in failed


def test_mutated_degree_fails(tp1, tp1_slope):
    stab = build_stab(tp1, slope=tp1_slope)
    broken = stab.mutated(P2, P1, char(tp1, a1=5))
    assert not all(c.passed for c in check_axioms(broken))


def test_support_order(tp1):
    assert stab_order(tp1, (1,)) == {(P1, P1), (P2, P2), (P1, P2)}


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_duality_pairing_is_identity(arrangement, seed):
    slope = random_slope(arrangement, rng=random.Random(seed))
    stab = build_stab(arrangement, slope=slope)
    opposite = build_opposite(stab)
    result = check_duality(duality_pairing(stab, opposite))
    assert result.passed, result.witness


def test_random_slope_is_reproducible(tp2):
    assert random_slope(tp2, rng=random.Random(4)) == random_slope(tp2, rng=random.Random(4))


def test_to_dict_records_metadata(tp1, tp1_slope):
    payload = build_stab(tp1, slope=tp1_slope).to_dict()
    assert payload['metadata']['slope'] == '1/3,1/5'
    assert payload['metadata']['polarization'] == 'xx/x'
    assert f"{P2}|{P1}" in payload['entries']
