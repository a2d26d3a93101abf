import random
from functools import reduce
from itertools import combinations
from math import gcd, lcm

import pytest
from pydantic import ValidationError as SchemaError
from sympy import Matrix

from hypertoric_data import (HypertoricData, cotangent_projective_space, dual_point, enumerate_bases,
                             gale_dual, require_valid, validate)
from models import DimensionMismatchError, GenericityError, ValidationError


def test_tp1_fixed_points(tp1):
    assert [p.label for p in tp1.fixed_points] == ['{e1}', '{e2}']
    p1, p2 = tp1.fixed_points
    assert p1.alpha == {0: (1,)}
    assert p2.alpha == {1: (-1,)}
    assert p1.beta_p == {1: (1,)}
    assert p2.beta_p == {0: (1,)}


def test_fixed_point_counts(tp1, tp2, rank2):
    assert len(tp1.fixed_points) == 2
    assert len(tp2.fixed_points) == 3
    assert [p.label for p in rank2.fixed_points] == ['{e1,e2}', '{e1,e3}', '{e1,e4}', '{e2,e3}', '{e2,e4}']


def test_golden_inputs_validate(arrangement):
    report = validate(arrangement)
    assert report.passed, [c.detail for c in report.failures()]


def test_dual_bases_on_every_fixed_point(arrangement):
    """alpha^p is dual to the beta columns on b, beta^p dual to the partial rows off b"""
    for p in arrangement.fixed_points:
        for e in p.base:
            for f in p.base:
                assert sum(a * b for a, b in zip(p.alpha[e], arrangement.beta_column(f))) == int(e == f)
        for e in p.complement:
            for f in p.complement:
                assert sum(a * b for a, b in zip(p.beta_p[e], arrangement.partial[f])) == int(e == f)


def test_gale_dual_is_involutive(arrangement):
    double = gale_dual(gale_dual(arrangement))
    assert double.partial == arrangement.partial
    assert double.beta == arrangement.beta
    assert double.eta == arrangement.eta
    assert double.zeta == arrangement.zeta


def test_gale_dual_swaps_parameters(tp1):
    dual = tp1.dual
    assert dual.partial == ((1,), (-1,))
    assert dual.beta == ((1, 1),)
    assert dual.eta == (-1,)
    assert dual.zeta == (-1,)
    assert dual.a_axes == ('z1',)
    assert dual.dual_axes == ('a1',)


def test_dual_points_are_complements(arrangement):
    dual_labels = {p.label for p in arrangement.dual.fixed_points}
    assert len(dual_labels) == len(arrangement.fixed_points)
    for p in arrangement.fixed_points:
        q = dual_point(p)
        assert set(q.base) == set(p.complement)
        assert q.label in dual_labels


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        HypertoricData(E=('e1', 'e2'), partial=((1,), (1,)), beta=((1, -1, 0),), eta=(1,), zeta=(1,))


def test_schema_rejects_non_integers():
    with pytest.raises(SchemaError):
        HypertoricData.from_document({'E': ['e1', 'e2'], 'partial': [[1], [1.5]],
                                      'beta': [[1, -1]], 'eta': [1], 'zeta': [1]})


def test_non_exact_sequence_fails_validation():
    data = HypertoricData(E=('e1', 'e2'), partial=((1,), (1,)), beta=((1, 1),), eta=(1,), zeta=(1,))
    report = validate(data)
    assert not report.passed
    assert report.failures()[0].name == 'exactness'
    with pytest.raises(ValidationError):
        require_valid(data)


def test_non_unimodular_beta_fails():
    data = HypertoricData(E=('e1', 'e2', 'e3'), partial=((1,), (1,), (-1,)),
                          beta=((1, 1, 2), (0, 1, 1)), eta=(1,), zeta=(1, 1))
    assert 'unimodularity' in [c.name for c in validate(data).failures()]


def test_eta_on_a_wall():
    data = cotangent_projective_space(2).with_eta((0,))
    assert 'eta_generic' in [c.name for c in validate(data).failures()]


def test_zeta_on_a_wall():
    data = cotangent_projective_space(3).with_zeta((1, 1))
    assert 'zeta_generic' in [c.name for c in validate(data).failures()]
    with pytest.raises(GenericityError):
        require_valid(data)


def test_document_round_trip(rank2):
    assert HypertoricData.from_document(rank2.to_document()) == rank2


def test_enumerate_bases_lexicographic(tp2):
    assert [p.base for p in enumerate_bases(tp2)] == [(0, 1), (0, 2), (1, 2)]


def test_unimodularity_fails_on_a_two_entry():
    data = HypertoricData(E=('e1', 'e2'), partial=((2,), (-1,)), beta=((1, 2),), eta=(1,), zeta=(1,))
    report = validate(data)
    assert [c.name for c in report.failures()] == ['unimodularity']
    assert report.failures()[0].witness == {'rows': [0], 'cols': [1], 'det': 2}
    with pytest.raises(ValidationError):
        require_valid(data)


# Brute-force re-derivation of exactness and unimodularity

def naive_det(m):
    if not m:
        return 1
    return sum((-1) ** j * m[0][j] * naive_det([row[:j] + row[j + 1:] for row in m[1:]])
               for j in range(len(m)))


def naive_minors(m, size):
    return [naive_det([[m[i][j] for j in cols] for i in rows])
            for rows in combinations(range(len(m)), size)
            for cols in combinations(range(len(m[0])), size)]


def naive_unimodular(beta):
    return all(d in (-1, 0, 1) for size in range(1, len(beta) + 1) for d in naive_minors(beta, size))


def naive_exact(partial, beta):
    n, k = len(partial), len(partial[0])
    if any(sum(beta[i][e] * partial[e][j] for e in range(n)) for i in range(n - k) for j in range(k)):
        return False
    # full rank and saturated iff the maximal minors have gcd 1
    return reduce(gcd, naive_minors(partial, k), 0) == 1 and reduce(gcd, naive_minors(beta, n - k), 0) == 1


def random_arrangement(rng):
    n = rng.randint(2, 4)
    k = rng.randint(1, n - 1)
    partial = [[rng.randint(-1, 2) for _ in range(k)] for _ in range(n)]
    kernel = Matrix(partial).T.nullspace()
    if len(kernel) != n - k:
        return None
    beta = []
    for v in kernel:
        scale = lcm(*(int(x.q) for x in v))
        beta.append([int(x * scale) for x in v])
    if rng.random() < 0.3:
        beta[0] = [2 * x for x in beta[0]]
    if rng.random() < 0.3:
        beta[-1][rng.randrange(n)] += 1
    return HypertoricData(E=tuple(f'e{i + 1}' for i in range(n)), partial=partial, beta=beta,
                          eta=tuple(rng.choice([1, 2, 3]) for _ in range(k)),
                          zeta=tuple(rng.choice([1, 2, 3]) for _ in range(n - k)))


def test_validate_agrees_with_brute_force():
    rng = random.Random(2024)
    seen = set()
    for _ in range(60):
        data = random_arrangement(rng)
        if data is None:
            continue
        checks = {c.name: c.passed for c in validate(data).checks}
        partial, beta = [list(r) for r in data.partial], [list(r) for r in data.beta]
        assert checks['exactness'] == naive_exact(partial, beta), data
        assert checks['unimodularity'] == naive_unimodular(beta), data
        seen.add((checks['exactness'], checks['unimodularity']))
    assert (True, True) in seen and len(seen) > 1
