"""
Hypertoric Duality Engine - Stable Envelopes Module
Slopes, diagonal normalization, construction of K-theoretic stable envelopes and their axioms
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from config import (CALIBRATION, DEFAULT_Q_ORDER, MAX_Q_ORDER, MAX_WORKERS,
                    RANDOM_SLOPE_ATTEMPTS, RANDOM_SLOPE_MAX_DENOMINATOR)
from elliptic_interface import theta_factors
from hypertoric_data import FixedPoint, HypertoricData, gale_dual
from kirwan_restriction import Polarization, restrictions_for
from lattice_algebra import (CharLattice, DegreePolytope, LatticeMap, LaurentPoly, Monomial,
                             RationalChar, format_qq, to_qq, wedge_star)
from models import (CheckResult, Coordinate, GenericityError, SlopeNotGenericError,
                    TruncationError)
from qseries import series_mul
from xi_classes import attracting_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Slope:
    """Fractional line bundle sum_e s_e u_e"""
    coefficients: Tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', tuple(to_qq(c) for c in self.coefficients))

    @classmethod
    def parse(cls, text: str) -> 'Slope':
        return cls(tuple(to_qq(part) for part in text.split(',') if part.strip()))

    @classmethod
    def zero(cls, n: int) -> 'Slope':
        return cls((QQ(0),) * n)

    def __neg__(self) -> 'Slope':
        return Slope(tuple(-c for c in self.coefficients))

    def __str__(self) -> str:
        return ','.join(format_qq(c) for c in self.coefficients)

    def kahler_image(self, data: HypertoricData, polarization: Polarization) -> Tuple[Any, ...]:
        """sum_e (s_e - pi_e / 2) partial_e; pi_e = +1 for x, -1 for y"""
        half = QQ(1, 2)
        shifted = [s - half * (1 if c is Coordinate.X else -1)
                   for s, c in zip(self.coefficients, polarization.choices)]
        return tuple(sum((m * data.partial[e][j] for e, m in enumerate(shifted)), QQ(0))
                     for j in range(data.k))

    def grades(self, data: HypertoricData, polarization: Polarization) -> Dict[Tuple[str, str], Any]:
        """<kahler image, beta^p_e> for every fixed point p and e outside b_p"""
        image = self.kahler_image(data, polarization)
        return {(p.label, data.E[e]): sum((x * y for x, y in zip(image, p.beta_p[e])), QQ(0))
                for p in data.fixed_points for e in p.complement}

    def non_generic_witnesses(self, data: HypertoricData, polarization: Polarization) -> List[Tuple[str, str]]:
        return [key for key, grade in self.grades(data, polarization).items() if grade.denominator == 1]

    def is_generic(self, data: HypertoricData, polarization: Polarization) -> bool:
        return not self.non_generic_witnesses(data, polarization)

    def restriction(self, p: FixedPoint) -> Monomial:
        """prod_e (u_e|_p)^(s_e)"""
        kr = restrictions_for(p.parent)
        result = Monomial.one(kr.lattice)
        for e, s in enumerate(self.coefficients):
            if s:
                result = result * kr.u(e, p) ** s
        return result

    def a_part(self, p: FixedPoint) -> Tuple[Any, ...]:
        """sum_{e in b_p} s_e alpha^p_e"""
        data = p.parent
        return tuple(sum((self.coefficients[e] * p.alpha[e][i] for e in p.base), QQ(0))
                     for i in range(data.rank_a))


def random_slope(data: HypertoricData, polarization: Optional[Polarization] = None,
                 rng: Optional[random.Random] = None) -> Slope:
    """Slope with denominators at most RANDOM_SLOPE_MAX_DENOMINATOR, redrawn until generic"""
    polarization = polarization or Polarization.standard(data.n)
    rng = rng or random.Random(0)
    for _ in range(RANDOM_SLOPE_ATTEMPTS):
        coefficients = []
        for _ in range(data.n):
            den = rng.randint(1, RANDOM_SLOPE_MAX_DENOMINATOR)
            coefficients.append(QQ(rng.randint(-den, den), den))
        slope = Slope(tuple(coefficients))
        if slope.is_generic(data, polarization):
            return slope
        logger.debug(f"Rejected non-generic slope {slope}")
    raise GenericityError(f"no generic slope found for {data.name} in {RANDOM_SLOPE_ATTEMPTS} attempts")


@dataclass
class StabMatrix:
    """Restrictions Stab(p)|_q keyed by (p, q) labels"""
    data: HypertoricData
    chamber: Tuple[int, ...]
    polarization: Polarization
    slope: Slope
    entries: Dict[Tuple[str, str], LaurentPoly] = field(default_factory=dict)

    @property
    def labels(self) -> List[str]:
        return [p.label for p in self.data.fixed_points]

    def __getitem__(self, key: Tuple[str, str]) -> LaurentPoly:
        return self.entries[key]

    def column(self, p: FixedPoint) -> Dict[str, LaurentPoly]:
        """Stab(p) as a class: fixed point label -> restriction"""
        return {q.label: self.entries[(p.label, q.label)] for q in self.data.fixed_points}

    def mutated(self, source: str, target: str, delta: LaurentPoly) -> 'StabMatrix':
        entries = dict(self.entries)
        entries[(source, target)] = entries[(source, target)] + delta
        return StabMatrix(self.data, self.chamber, self.polarization, self.slope, entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'metadata': {
                'arrangement': self.data.name,
                'chamber': list(self.chamber),
                'polarization': self.polarization.flags(),
                'slope': str(self.slope),
                'calibration': {k: CALIBRATION[k] for k in ('attracting_class', 'square_root_branch')},
            },
            'entries': {f"{p}|{q}": str(v) for (p, q), v in self.entries.items()},
        }


# Diagonal normalization

def _weights(cls: LaurentPoly) -> List[Tuple[Monomial, int]]:
    return [(Monomial(cls.lattice, e), int(c.numerator)) for e, c in sorted(cls.terms.items())]


def _det(cls: LaurentPoly) -> Monomial:
    result = Monomial.one(cls.lattice)
    for w, c in _weights(cls):
        result = result * w ** c
    return result


def diagonal_value(p: FixedPoint, zeta: Optional[Sequence[int]] = None,
                   polarization: Optional[Polarization] = None) -> LaurentPoly:
    """(-1)^{rk T^1/2_{>0}} (det T_{<0} / det T^1/2)^{1/2} prod_{w in T_{<0}} (1 - w^{-1})"""
    data = p.parent
    kr = restrictions_for(data)
    polarization = polarization or Polarization.standard(data.n)
    sigma = kr.sigma(zeta)
    half = kr.polarization_restriction(polarization, p)
    _, repelling, _ = kr.split_by_sign(kr.tangent_class(p), zeta)
    attracting_half, _, _ = kr.split_by_sign(half, zeta)

    sign = -1 if sum(int(c.numerator) for c in attracting_half.terms.values()) % 2 else 1
    root = (_det(repelling) / _det(half)) ** QQ(1, 2)
    one = LaurentPoly.constant(kr.lattice)
    koszul = one
    for w, c in _weights(repelling):
        koszul = koszul * (one - w.inverse().as_poly()) ** c
    logger.debug(f"diag at {p.label} along {sigma}: root {root}")
    return root.as_poly() * koszul * sign


def hbar_to_one(value: LaurentPoly, data: HypertoricData) -> LaurentPoly:
    flat = CharLattice(data.a_axes, value.lattice.scale)
    return LatticeMap(value.lattice, flat, {data.hbar_axis: {}})(value)


def check_diagonal_calibration(data: HypertoricData, zeta: Optional[Sequence[int]] = None,
                               polarization: Optional[Polarization] = None) -> CheckResult:
    """At hbar = 1 the diagonal equals the wedge of the dual polarization, trivial weights dropped"""
    polarization = polarization or Polarization.standard(data.n)
    kr = restrictions_for(data)
    failures = []
    for p in data.fixed_points:
        value = hbar_to_one(diagonal_value(p, zeta, polarization), data)
        half = hbar_to_one(kr.polarization_restriction(polarization, p), data)
        expected = wedge_star(half.dual(), omit_trivial=True)
        if RationalChar(value) != expected:
            failures.append({'p': p.label, 'value': str(value), 'expected': str(expected)})
    return CheckResult("diagonal_hbar_one", not failures,
                       "Stab(p)|_p at hbar = 1 equals the wedge of (T^1/2|_p)^dual",
                       {'failures': failures} if failures else None)


# Construction

def chamber_dual(data: HypertoricData, chamber: Sequence[int]) -> HypertoricData:
    """Gale dual whose GIT character is the chamber"""
    return gale_dual(data.with_zeta(tuple(-x for x in chamber)))


def _raw_entry(p_dual: FixedPoint, q: FixedPoint, source: FixedPoint, kahler, order: int) -> LaurentPoly:
    """Leading q-coefficient of the slope-substituted elliptic envelope of source at q"""
    factors = theta_factors(p_dual, q, kahler)
    if any(f.vanishes for f in factors):
        return LaurentPoly.zero(factors[0].argument.lattice)
    series = []
    for f in factors:
        expansion = f.expand(order)
        if f.index not in source.base:
            _, lead = expansion.leading()
            if not lead.is_monomial():
                raise SlopeNotGenericError(source.label, q.label,
                                           f"q-grades tie on {q.parent.E[f.index]}")
        series.append(expansion)
    product = series[0]
    for s in series[1:]:
        product = series_mul(product, s)
    _, lead = product.leading()
    return lead


def _build_column(data: HypertoricData, p: FixedPoint, chamber, polarization: Polarization,
                  kahler, q_order: int) -> Dict[str, LaurentPoly]:
    dual = chamber_dual(data, chamber)
    p_dual = dual.point(p.complement)
    order = q_order
    while True:
        try:
            raw = {q.label: _raw_entry(p_dual, q, p, kahler, order) for q in data.fixed_points}
            break
        except TruncationError:
            if order >= MAX_Q_ORDER:
                raise
            order = min(2 * order, MAX_Q_ORDER)
            logger.info(f"🔄 Raising q-order to {order} for source {p.label}")
    diagonal = diagonal_value(p, chamber, polarization)
    scale = raw[p.label]
    normalizer = diagonal.exact_monomial_quotient(scale)
    if normalizer is None:
        raise SlopeNotGenericError(p.label, p.label, "diagonal is not a monomial multiple of the leading term")
    return {label: normalizer * value for label, value in raw.items()}


def build_stab(data: HypertoricData, zeta: Optional[Sequence[int]] = None,
               polarization: Optional[Polarization] = None, slope: Optional[Slope] = None,
               q_order: int = DEFAULT_Q_ORDER) -> StabMatrix:
    chamber = tuple(data.zeta if zeta is None else zeta)
    polarization = polarization or Polarization.standard(data.n)
    slope = slope or random_slope(data, polarization)
    witnesses = slope.non_generic_witnesses(data, polarization)
    if witnesses:
        point, index = witnesses[0]
        raise SlopeNotGenericError(point, point, f"integral Kahler grade on {index}")
    kahler = slope.kahler_image(data, polarization)

    points = data.fixed_points
    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        columns = list(executor.map(
            lambda p: _build_column(data, p, chamber, polarization, kahler, q_order), points))
    matrix = StabMatrix(data, chamber, polarization, slope)
    for p, column in zip(points, columns):
        for label, value in column.items():
            matrix.entries[(p.label, label)] = value
    logger.info(f"✅ Stable envelopes for {data.name}: chamber {list(chamber)}, slope {slope}")
    return matrix


def build_opposite(stab: StabMatrix, q_order: int = DEFAULT_Q_ORDER) -> StabMatrix:
    """The family paired against stab: chamber -sigma, opposite polarization, slope -s"""
    return build_stab(stab.data, tuple(-x for x in stab.chamber), stab.polarization.opposite(),
                      -stab.slope, q_order)


# Axioms

def stab_order(data: HypertoricData, chamber: Sequence[int]):
    """Pairs (q, p) with q below p; Attr^n with the chamber reversed, closed transitively"""
    return attracting_order(data, zeta=tuple(-x for x in chamber))


def _degree(value: LaurentPoly, p: FixedPoint, slope: Slope) -> DegreePolytope:
    axes = p.parent.a_axes
    return DegreePolytope(axes, frozenset(value.support(axes))).shifted(slope.a_part(p))


def check_axioms(stab: StabMatrix) -> List[CheckResult]:
    data = stab.data
    points = data.fixed_points
    below = stab_order(data, stab.chamber)

    support_failures = []
    for p in points:
        for q in points:
            if not stab[(p.label, q.label)].is_zero() and (q.label, p.label) not in below:
                support_failures.append({'p': p.label, 'q': q.label, 'entry': str(stab[(p.label, q.label)])})

    diagonal_failures = []
    for p in points:
        expected = diagonal_value(p, stab.chamber, stab.polarization)
        if stab[(p.label, p.label)] != expected:
            diagonal_failures.append({'p': p.label, 'entry': str(stab[(p.label, p.label)]),
                                      'expected': str(expected)})

    def degree_failures_for(p: FixedPoint) -> List[Dict[str, str]]:
        failures = []
        for q in points:
            entry = stab[(p.label, q.label)]
            if q == p or entry.is_zero():
                continue
            bound = _degree(stab[(q.label, q.label)], q, stab.slope)
            if not bound.contains(_degree(entry, p, stab.slope)):
                failures.append({'p': p.label, 'q': q.label, 'entry': str(entry)})
        return failures

    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        degree_failures = [f for batch in executor.map(degree_failures_for, points) for f in batch]

    return [
        CheckResult("stab_support", not support_failures,
                    "Stab(p)|_q vanishes unless q lies below p",
                    {'failures': support_failures} if support_failures else None),
        CheckResult("stab_diagonal", not diagonal_failures,
                    "Stab(p)|_p equals the diagonal normalization",
                    {'failures': diagonal_failures} if diagonal_failures else None),
        check_diagonal_calibration(data, stab.chamber, stab.polarization),
        CheckResult("stab_degree", not degree_failures,
                    "deg Stab(p)|_q + L_p lies in deg Stab(q)|_q + L_q",
                    {'failures': degree_failures} if degree_failures else None),
    ]


def duality_pairing(stab: StabMatrix, opposite: StabMatrix) -> Dict[Tuple[str, str], RationalChar]:
    """<Stab(p), Stab_opp(q)> by localization with cotangent denominators"""
    from localization import euler_pairing, tangent_weights

    data = stab.data
    weights = {x.label: tangent_weights(x) for x in data.fixed_points}
    return {(p.label, q.label): euler_pairing(stab.column(p), opposite.column(q), weights)
            for p in data.fixed_points for q in data.fixed_points}


def check_duality(pairing: Dict[Tuple[str, str], RationalChar]) -> CheckResult:
    failures = []
    for (p, q), value in pairing.items():
        expected = RationalChar.coerce(int(p == q), value.lattice)
        if value != expected:
            failures.append({'p': p, 'q': q, 'value': str(value)})
    return CheckResult("duality_pairing", not failures,
                       "<Stab(p), Stab_opp(q)> is the identity matrix",
                       {'failures': failures} if failures else None)
