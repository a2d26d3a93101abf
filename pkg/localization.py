"""
Hypertoric Duality Engine - Localization Module
Equivariant Euler characteristic by fixed-point summation, the t -> infinity factor table,
and the intertwiner check between stable envelopes of a dual pair
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from math import lcm
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from config import DEFAULT_Q_ORDER, DEFAULT_SEED, SPECIALIZED_AXIS
from hypertoric_data import FixedPoint, HypertoricData, dual_point
from kirwan_restriction import Polarization, restrictions_for
from lattice_algebra import (CharLattice, LatticeMap, LaurentPoly, Monomial, RationalChar,
                             format_qq, is_bounded, limit_along)
from models import (Boundedness, CheckResult, GenericityError, LocalizationError, PneqqFactorType,
                    SlopeNotGenericError)
from stable_envelopes import build_stab, random_slope
from xi_classes import embed_dual, embed_primal, joint_lattice, xi_restriction

logger = logging.getLogger(__name__)

ALONG = {SPECIALIZED_AXIS: 1}


# Euler characteristic

def tangent_weights(x: FixedPoint) -> List[Monomial]:
    """Weights of T_x X with multiplicity"""
    tangent = restrictions_for(x.parent).tangent_class(x)
    weights = []
    for e, c in sorted(tangent.terms.items()):
        weights.extend([Monomial(tangent.lattice, e)] * int(c.numerator))
    return weights


def _binomial(w: Monomial) -> Tuple[LaurentPoly, LaurentPoly]:
    """1 - w^-1 = unit * (1 - v), v the lexicographically larger of w and w^-1"""
    one = LaurentPoly.constant(w.lattice)
    inverse = w.inverse()
    if inverse.exponents > w.exponents:
        return one - inverse.as_poly(), one
    return one - w.as_poly(), -inverse.as_poly()


def _as_poly(value) -> Optional[LaurentPoly]:
    if value is None:
        return None
    if isinstance(value, Monomial):
        return value.as_poly()
    if isinstance(value, RationalChar):
        return value.as_polynomial()
    return value


@dataclass
class PairingSummand:
    """One fixed-point term numerator / prod (1 - w^-1)"""
    x: str
    y: Optional[str]
    numerator: LaurentPoly
    weights: List[Monomial] = field(default_factory=list)

    @property
    def denominator(self) -> LaurentPoly:
        one = LaurentPoly.constant(self.numerator.lattice)
        total = one
        for w in self.weights:
            if not w.is_trivial():
                total = total * (one - w.inverse().as_poly())
        return total

    @property
    def value(self) -> RationalChar:
        return RationalChar(self.numerator, self.denominator)


def localization_sum(summands: Sequence[PairingSummand], lattice: CharLattice) -> RationalChar:
    """Exact sum over a common denominator: the lcm of the binomial factors"""
    reduced = []
    for s in summands:
        if s.numerator.is_zero():
            continue
        factors: Counter = Counter()
        unit = LaurentPoly.constant(s.numerator.lattice)
        for w in s.weights:
            if w.is_trivial():
                logger.debug(f"Omitting trivial denominator weight at {s.x}")
                continue
            binomial, u = _binomial(w)
            factors[binomial] += 1
            unit = unit * u
        reduced.append((s.numerator * unit.monomial_inverse(), factors))

    if not reduced:
        return RationalChar(LaurentPoly.zero(lattice), LaurentPoly.constant(lattice))
    common: Counter = Counter()
    for _, factors in reduced:
        for binomial, count in factors.items():
            common[binomial] = max(common[binomial], count)

    def product(counts: Mapping[LaurentPoly, int]) -> LaurentPoly:
        total = LaurentPoly.constant(lattice)
        for binomial, count in counts.items():
            if count:
                total = total * binomial ** count
        return total

    numerator = LaurentPoly.zero(lattice)
    for num, factors in reduced:
        numerator = numerator + num * product({b: common[b] - factors[b] for b in common})
    return RationalChar(numerator, product(common))


def euler_pairing(A: Mapping[str, Any], B: Mapping[str, Any],
                  weights: Mapping[str, Sequence[Monomial]]) -> RationalChar:
    """sum_x A|_x B|_x / wedge(T_x^dual)"""
    if not weights:
        raise LocalizationError("empty fixed-point set")
    summands = []
    lattice = None
    for key, ws in weights.items():
        a, b = _as_poly(A.get(key)), _as_poly(B.get(key))
        if a is None or b is None:
            continue
        numerator = a * b
        lattice = lattice or numerator.lattice
        summands.append(PairingSummand(key, None, numerator, list(ws)))
    if lattice is None:
        raise LocalizationError("no restrictions to pair")
    scale = lcm(*(s.numerator.lattice.scale for s in summands),
                 *(w.lattice.scale for s in summands for w in s.weights))
    return localization_sum(summands, lattice.rescaled(scale))


# Specialization to one cocharacter

def specialization(lattice: CharLattice, data: HypertoricData, zeta: Sequence[int],
                   eta: Sequence[int]) -> LatticeMap:
    """mu -> <mu_a, zeta> + <mu_z, eta> on the tau axis; hbar kept"""
    target = CharLattice((SPECIALIZED_AXIS, data.hbar_axis), lattice.scale)
    images = {a: {SPECIALIZED_AXIS: z} for a, z in zip(data.a_axes, zeta)}
    images.update({z: {SPECIALIZED_AXIS: y} for z, y in zip(data.dual_axes, eta)})
    images[data.hbar_axis] = {data.hbar_axis: 1}
    images = {k: v for k, v in images.items() if k in lattice.axis_labels}
    return LatticeMap(lattice, target, images)


def _hbar_lattice(data: HypertoricData, scale: int = 2) -> CharLattice:
    return CharLattice((SPECIALIZED_AXIS, data.hbar_axis), scale)


def _hbar_ratio(data: HypertoricData, lattice: CharLattice, power: int, numerator_power: int) -> RationalChar:
    """(h^numerator_power / (1 - h^power))"""
    one = LaurentPoly.constant(lattice)
    h = data.hbar_axis
    return RationalChar(LaurentPoly.monomial(lattice, {h: numerator_power}),
                        one - LaurentPoly.monomial(lattice, {h: power}))


# Factor table for t -> infinity

@dataclass
class PneqqFactor:
    index: str
    kind: PneqqFactorType
    value: RationalChar

    @property
    def limit(self) -> RationalChar:
        return limit_along(self.value, ALONG)


@dataclass
class PneqqResult:
    p: str
    q: str
    factors: List[PneqqFactor]
    product_limit: RationalChar
    factorwise_limit: RationalChar
    expected: RationalChar
    index_form: RationalChar

    @property
    def routes_agree(self) -> bool:
        return self.product_limit == self.factorwise_limit

    @property
    def passed(self) -> bool:
        return self.routes_agree and self.product_limit == self.expected

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p': self.p, 'q': self.q,
            'limit': str(self.product_limit),
            'factorwise': str(self.factorwise_limit),
            'expected': str(self.expected),
            'index_form': str(self.index_form),
            'pass': self.passed,
            'factors': [{'e': f.index, 'type': f.kind.value, 'value': str(f.value)} for f in self.factors],
        }


def _with_chamber(data: HypertoricData, zeta, eta) -> HypertoricData:
    if zeta is not None and tuple(zeta) != data.zeta:
        data = data.with_zeta(zeta)
    if eta is not None and tuple(eta) != data.eta:
        data = data.with_eta(eta)
    return data


def _factor_kind(e: int, p: FixedPoint, q: FixedPoint) -> PneqqFactorType:
    if e in p.base:
        return PneqqFactorType.BOTH_BASES if e in q.base else PneqqFactorType.BASE_NOT_DUAL_BASE
    return PneqqFactorType.DUAL_BASE_ONLY if e in q.base else PneqqFactorType.NEITHER_BASE


def pneqq_factors(p: FixedPoint, q: FixedPoint, zeta: Optional[Sequence[int]] = None,
                  eta: Optional[Sequence[int]] = None) -> List[PneqqFactor]:
    """Per e: (1 - u_e|_p u_e|_{q!}) / ((1 - u_e|_p)(1 - u_e|_{q!})) along zeta x eta.

    Denominator factors with trivial weight are omitted.
    """
    data = _with_chamber(p.parent, zeta, eta)
    p, q = data.point(p.base), data.point(q.base)
    q_dual = dual_point(q)
    primal, dual = restrictions_for(data), restrictions_for(data.dual)
    to_joint, dual_to_joint = embed_primal(data), embed_dual(data)
    collapse = specialization(joint_lattice(data), data, data.zeta, data.eta)

    factors = []
    one = LaurentPoly.constant(collapse.target)
    for e in range(data.n):
        u = collapse(to_joint(primal.u(e, p)))
        w = collapse(dual_to_joint(dual.u(e, q_dual)))
        numerator = one - (u * w).as_poly()
        denominator = one
        for m in (u, w):
            if not m.is_trivial():
                denominator = denominator * (one - m.as_poly())
        factors.append(PneqqFactor(data.E[e], _factor_kind(e, p, q), RationalChar(numerator, denominator)))
    return factors


def pneqq_closed_form(p: FixedPoint, lattice: CharLattice) -> RationalChar:
    """(h/(1-h))^{#e not in b_p, <beta^p_e, eta> > 0} (1/(1-h^-1))^{#e in b_p, <alpha^p_e, zeta> < 0}"""
    data = p.parent
    ascending = sum(1 for e in p.complement if p.beta_pairing(e, data.eta) > 0)
    repelling = sum(1 for e in p.base if p.alpha_pairing(e, data.zeta) < 0)
    return _hbar_ratio(data, lattice, 1, 1) ** ascending * _hbar_ratio(data, lattice, -1, 0) ** repelling


def pneqq_index_form(p: FixedPoint, lattice: CharLattice) -> RationalChar:
    """(h/(1-h))^{rk ind_p} (h^-1/(1-h^-1))^{rk ind_p!}, reported beside the closed form"""
    data = p.parent
    rank = sum(1 for e in p.base if p.alpha_pairing(e, data.zeta) > 0)
    dual_rank = sum(1 for e in p.complement if p.beta_pairing(e, tuple(-x for x in data.eta)) > 0)
    return _hbar_ratio(data, lattice, 1, 1) ** rank * _hbar_ratio(data, lattice, -1, -1) ** dual_rank


def pneqq_limit(p: FixedPoint, q: FixedPoint, zeta: Optional[Sequence[int]] = None,
                eta: Optional[Sequence[int]] = None) -> PneqqResult:
    data = _with_chamber(p.parent, zeta, eta)
    p, q = data.point(p.base), data.point(q.base)
    factors = pneqq_factors(p, q)
    lattice = _hbar_lattice(data)

    product = RationalChar.coerce(1, lattice)
    factorwise = RationalChar.coerce(1, lattice)
    for f in factors:
        product = product * f.value
        factorwise = factorwise * f.limit
    product_limit = limit_along(product, ALONG)

    if p == q:
        expected, index_form = pneqq_closed_form(p, lattice), pneqq_index_form(p, lattice)
    else:
        expected = index_form = RationalChar.coerce(0, lattice)
    return PneqqResult(p.label, q.label, factors, product_limit, factorwise, expected, index_form)


def check_pneqq(data: HypertoricData) -> Tuple[List[CheckResult], List[Dict[str, Any]]]:
    results = [pneqq_limit(p, q) for p in data.fixed_points for q in data.fixed_points]
    records = [r.to_dict() for r in results]
    disagree = [r.to_dict() for r in results if not r.routes_agree]
    wrong = [r.to_dict() for r in results if r.routes_agree and not r.passed]
    diagonal = [r for r in results if r.p == r.q]
    index_matches = [r.p for r in diagonal if r.product_limit == r.index_form]
    checks = [
        CheckResult("pneqq_routes_agree", not disagree,
                    "product-then-limit equals the product of per-factor limits",
                    {'pairs': disagree} if disagree else None),
        CheckResult("pneqq_limit", not wrong,
                    "limit is 0 off the diagonal and the closed form on it",
                    {'pairs': wrong} if wrong else None),
        CheckResult("pneqq_index_form", len(index_matches) == len(diagonal),
                    f"index-rank form matches at {len(index_matches)} of {len(diagonal)} fixed points",
                    {'matching': index_matches}, informational=True),
    ]
    return checks, records


# Intertwiner

@dataclass
class IntertwinerResult:
    checks: List[CheckResult]
    records: List[Dict[str, Any]]
    normalized: Dict[Tuple[str, str], RationalChar]
    slopes: Dict[str, str]
    polarization: str = ""
    opposite: Optional[Dict[str, Any]] = None


@dataclass
class _PairingRun:
    """Limits of the stable envelope pairing for one polarization"""
    polarization: Polarization
    target: CharLattice
    limits: Dict[Tuple[str, str], RationalChar]
    bound_failures: List[Dict[str, Any]]
    slopes: Dict[str, str]


def _joint_scale(values: Sequence[Any]) -> int:
    return lcm(2, *(v.lattice.scale for v in values))


def _pair_envelopes(data: HypertoricData, polarization: Polarization, slope, slope_dual,
                    q_order: int) -> _PairingRun:
    """Sum over (x, y) of (L_p / L_x)(L!_q! / L!_y!) xi|_(x, y!) Stab(p)|_x Stab!(q!)|_y! along zeta x eta"""
    dual = data.dual
    stab = build_stab(data, data.zeta, polarization, slope, q_order)
    stab_dual = build_stab(dual, data.eta, polarization, slope_dual, q_order)

    points = data.fixed_points
    duals = {y.label: dual_point(y) for y in points}
    line = {x.label: slope.restriction(x) for x in points}
    line_dual = {y.label: slope_dual.restriction(duals[y.label]) for y in points}
    scale = _joint_scale(list(stab.entries.values()) + list(stab_dual.entries.values())
                         + list(line.values()) + list(line_dual.values()))
    joint = joint_lattice(data).rescaled(scale)
    to_joint, dual_to_joint = embed_primal(data, joint), embed_dual(data, joint)
    collapse = specialization(joint, data, data.zeta, data.eta)
    weights = {x.label: [to_joint(w) for w in tangent_weights(x)] for x in points}
    dual_weights = {y.label: [dual_to_joint(w) for w in tangent_weights(duals[y.label])] for y in points}
    xi = {(x.label, y.label): xi_restriction(data, None, x, duals[y.label]) for x in points for y in points}

    target = collapse.target
    limits, bound_failures = {}, []
    for p in points:
        for q in points:
            q_dual = duals[q.label]
            total = RationalChar.coerce(0, target)
            for x in points:
                s = stab[(p.label, x.label)]
                if s.is_zero():
                    continue
                for y in points:
                    s_dual = stab_dual[(q_dual.label, duals[y.label].label)]
                    factor = xi[(x.label, y.label)]
                    if s_dual.is_zero() or factor.is_zero():
                        continue
                    twist = to_joint(line[p.label] / line[x.label]) * dual_to_joint(line_dual[q.label] / line_dual[y.label])
                    summand = PairingSummand(x.label, y.label,
                                             twist.as_poly() * factor * to_joint(s) * dual_to_joint(s_dual),
                                             weights[x.label] + dual_weights[y.label])
                    num, den = collapse(summand.numerator), collapse(summand.denominator)
                    if num.is_zero():
                        continue
                    verdict = is_bounded(num, den, (SPECIALIZED_AXIS,), along=ALONG)
                    diagonal_term = x == p and y == q
                    if verdict is Boundedness.UNBOUNDED or (not diagonal_term and verdict is not Boundedness.STRICTLY_BOUNDED):
                        bound_failures.append({'p': p.label, 'q': q.label, 'x': x.label, 'y': y.label,
                                               'verdict': verdict.value})
                        continue
                    total = total + limit_along(RationalChar(num, den), ALONG)
            limits[(p.label, q.label)] = total
    return _PairingRun(polarization, target, limits, bound_failures, {'X': str(slope), 'X!': str(slope_dual)})


def _opposite_run(data: HypertoricData, polarization: Polarization, q_order: int,
                  seed: int) -> Dict[str, Any]:
    """Summary of the same pairing with the other polarization; recorded, never asserted"""
    opposite = polarization.opposite()
    rng = random.Random(seed)
    try:
        run = _pair_envelopes(data, opposite, random_slope(data, opposite, rng),
                              random_slope(data.dual, opposite, rng), q_order)
    except (GenericityError, SlopeNotGenericError) as e:
        return {'polarization': opposite.flags(), 'error': str(e)}
    return {
        'polarization': opposite.flags(),
        'bounded': not run.bound_failures,
        'unbounded': run.bound_failures,
        'diagonal': {p.label: str(run.limits[(p.label, p.label)]) for p in data.fixed_points},
        'slopes': run.slopes,
    }


def intertwiner_check(data: HypertoricData, zeta: Optional[Sequence[int]] = None,
                      eta: Optional[Sequence[int]] = None, slope=None, slope_dual=None,
                      polarization: Optional[Polarization] = None,
                      q_order: int = DEFAULT_Q_ORDER, seed: int = DEFAULT_SEED,
                      compare_opposite: bool = True) -> IntertwinerResult:
    """Pair xi against the stable envelopes of X and X! and take the limit along zeta x eta.

    Both families use `polarization` (standard by default), chamber zeta on X and eta on X!.
    The diagonal is asserted to be h^((n-k)/2). The index-rank closed form and, with
    compare_opposite, the run with the opposite polarization are reported beside it.
    """
    data = _with_chamber(data, zeta, eta)
    polarization = polarization or Polarization.standard(data.n)
    rng = random.Random(seed)
    slope = slope or random_slope(data, polarization, rng)
    slope_dual = slope_dual or random_slope(data.dual, polarization, rng)
    run = _pair_envelopes(data, polarization, slope, slope_dual, q_order)

    target = run.target
    diagonal_unit = RationalChar(LaurentPoly.monomial(target, {data.hbar_axis: QQ(data.rank_a, 2)}))
    records, failures, normalized = [], [], {}
    for (p, q), total in run.limits.items():
        expected = diagonal_unit if p == q else RationalChar.coerce(0, target)
        passed = total == expected
        normalized[(p, q)] = total / diagonal_unit
        records.append({'p': p, 'q': q, 'limit': str(total), 'expected': str(expected), 'pass': passed})
        if not passed:
            failures.append({'p': p, 'q': q, 'limit': str(total), 'expected': str(expected)})

    opposite = _opposite_run(data, polarization, q_order, seed) if compare_opposite else None
    index_forms = []
    for p in data.fixed_points:
        computed = run.limits[(p.label, p.label)]
        closed = pneqq_index_form(p, target)
        entry = {'p': p.label, 'computed': str(computed), 'index_form': str(closed),
                 'matches': computed == closed}
        if opposite is not None and 'diagonal' in opposite:
            entry['opposite_polarization'] = opposite['diagonal'][p.label]
        index_forms.append(entry)
    index_matches = sum(1 for entry in index_forms if entry['matches'])

    identity = all(value == RationalChar.coerce(int(p == q), target) for (p, q), value in normalized.items())
    checks = [
        CheckResult("intertwiner_bounded", not run.bound_failures,
                    "every summand is bounded along zeta x eta, strictly away from (p, q!)",
                    {'failures': run.bound_failures} if run.bound_failures else None),
        CheckResult("intertwiner_limit", not failures,
                    f"limits are delta_pq * h^({format_qq(QQ(data.rank_a, 2))})",
                    {'failures': failures} if failures else None),
        CheckResult("intertwiner_change_of_basis", identity,
                    "normalized matrix has the form 1 + R with lim R = 0"),
        CheckResult("intertwiner_index_form", index_matches == len(index_forms),
                    f"(h/(1-h))^(rk ind_p) (h^-1/(1-h^-1))^(rk ind_p!) matches the diagonal at "
                    f"{index_matches} of {len(index_forms)} fixed points with polarization {polarization.flags()}",
                    {'diagonal': index_forms, 'opposite': opposite}, informational=True),
    ]
    if opposite is not None and not opposite.get('bounded', False):
        logger.warning(f"⚠️ Opposite polarization {opposite['polarization']} on {data.name}: "
                       f"{len(opposite.get('unbounded', []))} unbounded summands")
    logger.info(f"{'✅' if all(c.passed for c in checks if not c.informational) else '❌'} Intertwiner check on {data.name}")
    return IntertwinerResult(checks, records, normalized, run.slopes, polarization.flags(), opposite)
