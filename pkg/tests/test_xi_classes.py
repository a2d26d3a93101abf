import pytest

from lattice_algebra import LaurentPoly
from models import Coordinate
from xi_classes import (SubspaceSpec, attr_n_member, attracting_order, check_degree_bound, check_vanishing,
                        joint_lattice, kirwan_lattice, transitive_closure, xi_matrix, xi_tilde)


def joint(data, coeff=1, **exps):
    return LaurentPoly.monomial(joint_lattice(data), exps, coeff)


def test_tp1_entries(tp1):
    matrix = xi_matrix(tp1)
    one = joint(tp1)
    assert matrix[('{e1}', '{e1}')] == (one - joint(tp1, a1=1, h=1)) * (one - joint(tp1, z1=1, h=1))
    assert matrix[('{e1}', '{e2}')].is_zero()
    assert matrix[('{e2}', '{e1}')] == (one - joint(tp1, h=1)) * (one - joint(tp1, a1=-1, z1=1, h=1))
    assert matrix[('{e2}', '{e2}')] == (one - joint(tp1, z1=1, h=2)) * (one - joint(tp1, a1=-1))


def test_tp1_attracting_order(tp1):
    assert attracting_order(tp1) == {('{e1}', '{e1}'), ('{e2}', '{e2}'), ('{e2}', '{e1}')}


def test_vanishing_matches_attracting_sets(arrangement):
    checks = check_vanishing(xi_matrix(arrangement), arrangement)
    vanishing = next(c for c in checks if c.name == 'xi_vanishing')
    assert vanishing.passed, vanishing.witness


def test_tp2_matrix_has_nine_entries(tp2):
    matrix = xi_matrix(tp2)
    assert len(matrix.entries) == 9
    zeros = {key for key, value in matrix.entries.items() if value.is_zero()}
    expected = {(p.label, q.label) for p in tp2.fixed_points for q in tp2.fixed_points
                if not attr_n_member(q, p)}
    assert zeros == expected


def test_degree_bound_and_diagonal(arrangement):
    checks = {c.name: c for c in check_degree_bound(xi_matrix(arrangement), arrangement)}
    assert checks['xi_degree_bound'].passed, checks['xi_degree_bound'].witness
    assert checks['xi_diagonal'].passed, checks['xi_diagonal'].witness


def test_diagonal_never_vanishes(arrangement):
    matrix = xi_matrix(arrangement)
    for p in arrangement.fixed_points:
        assert not matrix[(p.label, p.label)].is_zero()
        assert attr_n_member(p, p)


def test_xi_tilde_standard(tp1):
    lattice = kirwan_lattice(tp1)
    one = LaurentPoly.constant(lattice)
    expected = ((one - LaurentPoly.monomial(lattice, {'u1': 1, 'v1': 1}))
                * (one - LaurentPoly.monomial(lattice, {'u2': 1, 'v2': 1})))
    assert xi_tilde(tp1) == expected


def test_xi_tilde_y_flag(tp1):
    lattice = kirwan_lattice(tp1)
    spec = SubspaceSpec.from_dict({(0, 0): Coordinate.Y, (1, 0): Coordinate.ABSENT})
    one = LaurentPoly.constant(lattice)
    assert xi_tilde(tp1, spec) == one - LaurentPoly.monomial(lattice, {'u1': -1, 'v1': -1})


def test_subspace_union_rejects_overlap():
    a = SubspaceSpec.from_dict({(0, 0): Coordinate.X})
    b = SubspaceSpec.from_dict({(0, 0): Coordinate.Y})
    with pytest.raises(ValueError):
        a.union(b)
    c = SubspaceSpec.from_dict({(1, 0): Coordinate.Y})
    assert len(a.union(c).entries()) == 2


def test_transitive_closure(tp2):
    points = tp2.fixed_points
    chain = {(points[0].label, points[1].label), (points[1].label, points[2].label)}
    closure = transitive_closure(points, lambda x, y: (x.label, y.label) in chain)
    assert (points[0].label, points[2].label) in closure
    assert (points[2].label, points[0].label) not in closure
