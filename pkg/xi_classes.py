"""
Hypertoric Duality Engine - Xi Classes Module
The intertwining class xi(V'), its fixed-point restriction matrix and attracting-set combinatorics
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from config import MAX_WORKERS
from hypertoric_data import FixedPoint, HypertoricData, dual_point
from kirwan_restriction import Polarization, restrictions_for
from lattice_algebra import (CharLattice, LatticeMap, LaurentPoly, RationalChar,
                             is_bounded, wedge_star)
from models import CheckResult, Coordinate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubspaceSpec:
    """Per (index, loop level): which Darboux character enters V'"""
    flags: Tuple[Tuple[Tuple[int, int], Coordinate], ...]

    @classmethod
    def standard(cls, n: int) -> 'SubspaceSpec':
        return cls(tuple(((e, 0), Coordinate.X) for e in range(n)))

    @classmethod
    def from_dict(cls, flags: Dict[Tuple[int, int], Coordinate]) -> 'SubspaceSpec':
        return cls(tuple(sorted(flags.items(), key=lambda item: item[0])))

    def entries(self) -> List[Tuple[int, int, Coordinate]]:
        return [(e, level, flag) for (e, level), flag in self.flags if flag is not Coordinate.ABSENT]

    def union(self, other: 'SubspaceSpec') -> 'SubspaceSpec':
        mine = dict(self.flags)
        for key, flag in other.flags:
            if key in mine and mine[key] is not Coordinate.ABSENT and flag is not Coordinate.ABSENT:
                raise ValueError(f"Subspaces overlap at {key}")
            mine[key] = flag
        return SubspaceSpec.from_dict(mine)


@dataclass
class RestrictionMatrix:
    """Fixed-point indexed table of restrictions"""
    rows: List[str]
    cols: List[str]
    entries: Dict[Tuple[str, str], Any] = field(default_factory=dict)
    lattice: Optional[CharLattice] = None

    def __getitem__(self, key: Tuple[str, str]):
        return self.entries[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rows': self.rows,
            'cols': self.cols,
            'entries': {f"{r}|{c}": str(self.entries[(r, c)]) for r in self.rows for c in self.cols},
        }


# Lattices

def joint_lattice(data: HypertoricData) -> CharLattice:
    return CharLattice(data.a_axes + data.dual_axes + (data.hbar_axis,))


def kirwan_lattice(data: HypertoricData) -> CharLattice:
    """Universal lattice: one axis per Kirwan class u_e and per dual class v_e"""
    return CharLattice(tuple(f"u{e + 1}" for e in range(data.n)) + tuple(f"v{e + 1}" for e in range(data.n)))


def embed_primal(data: HypertoricData, lattice: Optional[CharLattice] = None) -> LatticeMap:
    return LatticeMap(restrictions_for(data).lattice, lattice or joint_lattice(data))


def embed_dual(data: HypertoricData, lattice: Optional[CharLattice] = None) -> LatticeMap:
    """Dual-side restrictions into the joint lattice; the dual hbar appears inverted"""
    h = data.hbar_axis
    return LatticeMap(restrictions_for(data.dual).lattice, lattice or joint_lattice(data), {h: {h: -1}})


def kirwan_substitution(data: HypertoricData, p: FixedPoint, q_dual: FixedPoint,
                        lattice: Optional[CharLattice] = None) -> LatticeMap:
    """u_e -> u_e|_p and v_e -> u_e|_{q!} (hbar inverted) on the joint lattice"""
    target = lattice or joint_lattice(data)
    primal = restrictions_for(data)
    dual = restrictions_for(data.dual)
    h = data.hbar_axis
    images = {}
    for e in range(data.n):
        u = primal.u(e, p)
        images[f"u{e + 1}"] = {a: u.value(a) for a in data.a_axes}
        images[f"u{e + 1}"][h] = u.value(h)
        v = dual.u(e, q_dual)
        images[f"v{e + 1}"] = {z: v.value(z) for z in data.dual_axes}
        images[f"v{e + 1}"][h] = -v.value(h)
    return LatticeMap(kirwan_lattice(data), target, images)


# xi

def xi_tilde(data: HypertoricData, spec: Optional[SubspaceSpec] = None) -> LaurentPoly:
    """wedge of sum chi chi^dual on the universal lattice, before the Kirwan map"""
    spec = spec or SubspaceSpec.standard(data.n)
    lattice = kirwan_lattice(data)
    one = LaurentPoly.constant(lattice)
    total = one
    for e, _level, flag in spec.entries():
        sign = 1 if flag is Coordinate.X else -1
        character = LaurentPoly.monomial(lattice, {f"u{e + 1}": sign, f"v{e + 1}": sign})
        total = total * (one - character)
    return total


def xi_restriction(data: HypertoricData, spec: Optional[SubspaceSpec], p: FixedPoint,
                   q_dual: FixedPoint) -> LaurentPoly:
    """prod over spec entries of (1 - w w-check) at p x q!"""
    return kirwan_substitution(data, p, q_dual)(xi_tilde(data, spec))


def xi_matrix(data: HypertoricData, spec: Optional[SubspaceSpec] = None) -> RestrictionMatrix:
    points = data.fixed_points
    duals = [dual_point(q) for q in points]
    pairs = [(p, q, qd) for p in points for q, qd in zip(points, duals)]
    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        values = list(executor.map(lambda t: xi_restriction(data, spec, t[0], t[2]), pairs))
    matrix = RestrictionMatrix([p.label for p in points], [q.label for q in points],
                               lattice=joint_lattice(data))
    for (p, q, _), value in zip(pairs, values):
        matrix.entries[(p.label, q.label)] = value
    logger.info(f"✅ xi matrix for {data.name}: {len(points)}x{len(points)}")
    return matrix


# Attracting sets

def attr_n_member(q: FixedPoint, p: FixedPoint, zeta: Optional[Sequence[int]] = None,
                  eta: Optional[Sequence[int]] = None) -> bool:
    """Whether p lies in Attr^n(q): every e in b_q minus b_p has <alpha^q_e, zeta><beta^p_e, eta> > 0"""
    data = q.parent
    zeta = data.zeta if zeta is None else zeta
    eta = data.eta if eta is None else eta
    return all(q.alpha_pairing(e, zeta) * p.beta_pairing(e, eta) > 0
               for e in q.base if e not in p.base)


def transitive_closure(points: Sequence[FixedPoint], relation) -> Set[Tuple[str, str]]:
    """Pairs (x, y) with x below y; relation(x, y) gives the generating steps"""
    below = {(x.label, y.label) for x in points for y in points if x == y or relation(x, y)}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(below):
            for (c, d) in list(below):
                if b == c and (a, d) not in below:
                    below.add((a, d))
                    changed = True
    return below


def attracting_order(data: HypertoricData, zeta: Optional[Sequence[int]] = None,
                     eta: Optional[Sequence[int]] = None) -> Set[Tuple[str, str]]:
    """p below q when p lies in Attr^n(q), closed transitively"""
    return transitive_closure(data.fixed_points, lambda p, q: attr_n_member(q, p, zeta, eta))


def membership_table(data: HypertoricData) -> Dict[str, Dict[str, bool]]:
    return {p.label: {q.label: attr_n_member(q, p) for q in data.fixed_points} for p in data.fixed_points}


def check_vanishing(matrix: RestrictionMatrix, data: HypertoricData) -> List[CheckResult]:
    violations, converse = [], []
    for p in data.fixed_points:
        for q in data.fixed_points:
            entry = matrix[(p.label, q.label)]
            member = attr_n_member(q, p)
            if not member and not entry.is_zero():
                violations.append({'p': p.label, 'q': q.label, 'entry': str(entry)})
            if member and entry.is_zero():
                converse.append({'p': p.label, 'q': q.label})
    checks = [CheckResult("xi_vanishing", not violations,
                          f"{len(violations)} nonzero entries outside Attr^n",
                          {'violations': violations} if violations else None)]
    checks.append(CheckResult("xi_vanishing_converse", not converse,
                              "every member of Attr^n has a nonzero entry" if not converse
                              else f"{len(converse)} members with vanishing entry",
                              {'pairs': converse} if converse else None, informational=True))
    return checks


def check_degree_bound(matrix: RestrictionMatrix, data: HypertoricData,
                       polarization: Optional[Polarization] = None,
                       dual_polarization: Optional[Polarization] = None) -> List[CheckResult]:
    """deg xi at p x q! inside deg of wedge T^1/2_p tensor wedge T^1/2_q!, after hbar -> 1"""
    polarization = polarization or Polarization.standard(data.n)
    dual_polarization = dual_polarization or Polarization.standard(data.n)
    joint = joint_lattice(data)
    flat = CharLattice(data.a_axes + data.dual_axes, joint.scale)
    forget_hbar = LatticeMap(joint, flat, {data.hbar_axis: {}})
    primal, dual = restrictions_for(data), restrictions_for(data.dual)
    to_joint, dual_to_joint = embed_primal(data), embed_dual(data)
    axes = data.a_axes + data.dual_axes

    failures, diagonal_failures = [], []
    for p in data.fixed_points:
        half_p = forget_hbar(to_joint(primal.polarization_restriction(polarization, p)))
        for q in data.fixed_points:
            qd = dual_point(q)
            half_q = forget_hbar(dual_to_joint(dual.polarization_restriction(dual_polarization, qd)))
            bound = wedge_star(half_p, omit_trivial=True) * wedge_star(half_q, omit_trivial=True)
            entry = forget_hbar(matrix[(p.label, q.label)])
            if p == q:
                if RationalChar(entry) != bound:
                    diagonal_failures.append({'p': p.label, 'entry': str(entry), 'expected': str(bound)})
                continue
            if not bound.den.is_constant():
                failures.append({'p': p.label, 'q': q.label, 'reason': 'bound is not a polynomial'})
                continue
            verdict = is_bounded(entry, bound.num, axes)
            if not verdict.is_bounded:
                failures.append({'p': p.label, 'q': q.label, 'entry': str(entry), 'bound': str(bound.num)})
    return [
        CheckResult("xi_degree_bound", not failures,
                    f"{len(failures)} off-diagonal entries exceed the wedge bound",
                    {'failures': failures} if failures else None),
        CheckResult("xi_diagonal", not diagonal_failures,
                    "diagonal entries equal wedge T^1/2_p tensor wedge T^1/2_p! as A x G^dual classes",
                    {'failures': diagonal_failures} if diagonal_failures else None),
    ]
