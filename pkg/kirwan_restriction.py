"""
Hypertoric Duality Engine - Kirwan Restriction Module
Restricts Kirwan-image classes to torus fixed points via the stabilizer of a lifted point
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import Matrix, zeros, eye

from lattice_algebra import CharLattice, LaurentPoly, Monomial
from hypertoric_data import FixedPoint, HypertoricData
from models import (CheckResult, Coordinate, GenericityError, LiftInconsistentError,
                    WeightType)

logger = logging.getLogger(__name__)

# character chi^m hbar^j of D x C*_hbar as (m, j)
Character = Tuple[Tuple[int, ...], int]


@dataclass(frozen=True)
class LiftedPoint:
    """Which Darboux coordinate is nonzero at a lift of the fixed point"""
    point: FixedPoint
    nonzero_coord: Dict[int, Coordinate] = field(default_factory=dict)


@dataclass(frozen=True)
class Polarization:
    """Coordinate Lagrangian: x or y per index, plus the choice for the moment map correction"""
    choices: Tuple[Coordinate, ...]
    ghost: Coordinate = Coordinate.X

    @classmethod
    def standard(cls, n: int) -> 'Polarization':
        return cls(tuple(Coordinate.X for _ in range(n)), Coordinate.X)

    def opposite(self) -> 'Polarization':
        return Polarization(tuple(c.flipped() for c in self.choices), self.ghost.flipped())

    def flags(self) -> str:
        return ''.join(c.value for c in self.choices) + '/' + self.ghost.value


def x_character(n: int, e: int) -> Character:
    return tuple(1 if i == e else 0 for i in range(n)), 0


def y_character(n: int, e: int) -> Character:
    return tuple(-1 if i == e else 0 for i in range(n)), 1


class KirwanRestriction:
    """Fixed-point restrictions for one arrangement; filled once and read-only afterwards"""

    def __init__(self, data: HypertoricData):
        self.data = data
        self.lattice = CharLattice(data.a_axes + (data.hbar_axis,))
        self._lifts: Dict[Tuple[int, ...], LiftedPoint] = {}
        self._transport: Dict[Tuple[int, ...], Matrix] = {}
        for p in data.fixed_points:
            self._lifts[p.base] = self._lift(p)
            self._transport[p.base] = self._stabilizer_transport(p)

    def _lift(self, p: FixedPoint) -> LiftedPoint:
        marks = {}
        for e in p.complement:
            pairing = p.beta_pairing(e, self.data.eta)
            if pairing == 0:
                raise GenericityError(f"<beta^p_{self.data.E[e]}, eta> = 0 at {p.label}")
            marks[e] = Coordinate.Y if pairing > 0 else Coordinate.X
        return LiftedPoint(p, marks)

    def _stabilizer_transport(self, p: FixedPoint) -> Matrix:
        """Rows e: log-coordinate of d_e on the stabilizer in terms of (A, hbar); last row: hbar"""
        data = self.data
        r = data.rank_a
        lift = self._lifts[p.base]
        beta = data.beta_matrix
        base, comp = list(p.base), list(p.complement)
        eps = Matrix(len(comp), 1, [1 if lift.nonzero_coord[e] is Coordinate.Y else 0 for e in comp])
        beta_b = beta.extract(list(range(r)), base)
        inv = beta_b.inv() if r else beta_b
        shift = -(inv * beta.extract(list(range(r)), comp) * eps) if r else Matrix(0, 1, [])
        transport = zeros(data.n + 1, r + 1)
        for i, e in enumerate(base):
            for j in range(r):
                transport[e, j] = inv[i, j]
            transport[e, r] = shift[i, 0]
        for i, e in enumerate(comp):
            transport[e, r] = eps[i, 0]
        transport[data.n, r] = 1
        # the stabilizer must map isomorphically onto A x C*_hbar
        image = beta.col_join(zeros(1, data.n)).row_join(zeros(r, 1).col_join(Matrix([[1]]))) * transport
        if image != eye(r + 1):
            raise LiftInconsistentError(f"lift inconsistent at {p.label}")
        return transport

    def restrict_character(self, character: Character, p: FixedPoint) -> Monomial:
        m, j = character
        row = Matrix([list(m) + [j]])
        image = row * self._transport[p.base]
        exps = {axis: int(image[0, i]) for i, axis in enumerate(self.data.a_axes)}
        exps[self.data.hbar_axis] = int(image[0, self.data.rank_a])
        return Monomial.from_dict(self.lattice, exps)

    def u(self, e: int, p: FixedPoint) -> Monomial:
        return self.restrict_character(x_character(self.data.n, e), p)

    def epsilon(self, p: FixedPoint, e: int) -> int:
        return int(self.u(e, p).value(self.data.hbar_axis))

    def restrict_class(self, terms: Iterable[Tuple[Character, int]], p: FixedPoint) -> LaurentPoly:
        """Restriction of a virtual representation sum c * chi^m hbar^j"""
        total = LaurentPoly.zero(self.lattice)
        for character, coeff in terms:
            total = total + self.restrict_character(character, p).as_poly() * coeff
        return total

    def polarization_restriction(self, polarization: Polarization, p: FixedPoint) -> LaurentPoly:
        n = self.data.n
        terms = []
        for e, choice in enumerate(polarization.choices):
            if choice is Coordinate.X:
                terms.append((x_character(n, e), 1))
            elif choice is Coordinate.Y:
                terms.append((y_character(n, e), 1))
        ghost = ((0,) * n, 0 if polarization.ghost is Coordinate.X else 1)
        terms.append((ghost, -self.data.k))
        return self.restrict_class(terms, p)

    def tangent_class(self, p: FixedPoint) -> LaurentPoly:
        hbar = LaurentPoly.monomial(self.lattice, {self.data.hbar_axis: 1})
        total = LaurentPoly.zero(self.lattice)
        for e in p.base:
            w = self.u(e, p).as_poly()
            total = total + w + hbar * w.monomial_inverse()
        return total

    def classify_weight(self, p: FixedPoint, e: int, zeta: Sequence[int] = None) -> WeightType:
        zeta = self.data.zeta if zeta is None else zeta
        pairing = p.alpha_pairing(e, zeta)
        if pairing == 0:
            raise GenericityError(f"<alpha^p_{self.data.E[e]}, zeta> = 0 at {p.label}")
        return WeightType.ATTRACTING if pairing > 0 else WeightType.REPELLING

    def sigma(self, zeta: Sequence[int] = None) -> Dict[str, int]:
        zeta = self.data.zeta if zeta is None else zeta
        return dict(zip(self.data.a_axes, zeta))

    def split_by_sign(self, cls: LaurentPoly, zeta: Sequence[int] = None) -> Tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
        """(attracting, repelling, A-trivial) parts of a class"""
        sigma = self.sigma(zeta)
        parts = {1: {}, -1: {}, 0: {}}
        for e, c in cls.terms.items():
            grade = self.lattice.pairing(e, sigma)
            key = 1 if grade > 0 else (-1 if grade < 0 else 0)
            parts[key][e] = c
        return tuple(LaurentPoly(self.lattice, parts[s]) for s in (1, -1, 0))

    def table(self) -> Dict[str, Dict[str, str]]:
        return {p.label: {self.data.E[e]: str(self.u(e, p)) for e in range(self.data.n)}
                for p in self.data.fixed_points}

    def calibration_checks(self) -> List[CheckResult]:
        data = self.data
        checks = []
        bad_hbar, bad_alpha, bad_rank = [], [], []
        for p in data.fixed_points:
            for e in p.complement:
                u = self.u(e, p)
                expected = 1 if p.beta_pairing(e, data.eta) > 0 else 0
                if any(u.value(a) for a in data.a_axes) or u.value(data.hbar_axis) != expected:
                    bad_hbar.append(f"{p.label}:{data.E[e]}")
            for e in p.base:
                u = self.u(e, p)
                if tuple(int(u.value(a)) for a in data.a_axes) != p.alpha[e]:
                    bad_alpha.append(f"{p.label}:{data.E[e]}")
            attracting, _, _ = self.split_by_sign(self.polarization_restriction(Polarization.standard(data.n), p))
            count = sum(1 for e in p.base if p.alpha_pairing(e, data.zeta) > 0)
            if sum(int(c.numerator) for c in attracting.terms.values()) != count:
                bad_rank.append(p.label)
        checks.append(CheckResult("hbar_restriction", not bad_hbar,
                                  "u_e|_p = hbar exactly when <beta^p_e, eta> > 0",
                                  {'failures': bad_hbar} if bad_hbar else None))
        checks.append(CheckResult("normal_characters", not bad_alpha,
                                  "A-part of u_e|_p is alpha^p_e for e in b_p",
                                  {'failures': bad_alpha} if bad_alpha else None))
        checks.append(CheckResult("index_rank", not bad_rank,
                                  "rk ind_p counts e in b_p with <alpha^p_e, zeta> > 0",
                                  {'failures': bad_rank} if bad_rank else None))
        checks.append(CheckResult(
            "semistable_coordinate_reading", True,
            "y_e is taken nonzero when <beta^p_e, eta> > 0; the opposite x/y reading would "
            "contradict the hbar restriction rule and is not used", informational=True))
        return checks


@lru_cache(maxsize=64)
def restrictions_for(data: HypertoricData) -> KirwanRestriction:
    return KirwanRestriction(data)


def restrict_character(character: Character, p: FixedPoint) -> Monomial:
    return restrictions_for(p.parent).restrict_character(character, p)


def epsilon(p: FixedPoint, e: int) -> int:
    return restrictions_for(p.parent).epsilon(p, e)


def polarization_restriction(polarization: Polarization, p: FixedPoint) -> LaurentPoly:
    return restrictions_for(p.parent).polarization_restriction(polarization, p)


def tangent_class(p: FixedPoint) -> LaurentPoly:
    return restrictions_for(p.parent).tangent_class(p)


def classify_weight(p: FixedPoint, e: int, zeta: Sequence[int] = None) -> WeightType:
    return restrictions_for(p.parent).classify_weight(p, e, zeta)
