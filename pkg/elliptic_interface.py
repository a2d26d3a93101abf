"""
Hypertoric Duality Engine - Elliptic Interface Module
The duality interface as a truncated q-series and its fixed-point restrictions
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from config import MAX_WORKERS
from hypertoric_data import FixedPoint, HypertoricData, dual_point
from kirwan_restriction import restrictions_for
from lattice_algebra import CharLattice, LatticeMap, Monomial, to_qq
from qseries import QSeries, series_mul, theta_expand
from xi_classes import joint_lattice, kirwan_lattice, kirwan_substitution

logger = logging.getLogger(__name__)


@dataclass
class InterfaceSeries:
    """prod_e theta(u_e v_e) on the universal Kirwan lattice, known through order"""
    data: HypertoricData
    series: QSeries
    order: int

    def restrict(self, p: FixedPoint, q_dual: FixedPoint) -> QSeries:
        """Specialize u_e -> u_e|_p and v_e -> u_e|_{q!} in every coefficient"""
        target = joint_lattice(self.data).rescaled(self.series.lattice.scale)
        substitution = kirwan_substitution(self.data, p, q_dual, target)
        return QSeries(target, {k: substitution(c) for k, c in self.series.coeffs.items()},
                       self.series.order)

    def header(self) -> Dict[str, object]:
        return {'arrangement': self.data.name, 'order': self.order, 'factors': self.data.n}


@dataclass(frozen=True)
class ThetaFactor:
    """One factor theta(q^shift * argument) of a restricted interface"""
    index: int
    argument: Monomial
    shift: object = QQ(0)

    @property
    def vanishes(self) -> bool:
        # theta(q^m) = 0 for integral m
        return self.argument.is_trivial() and to_qq(self.shift).denominator == 1

    def expand(self, order) -> QSeries:
        return theta_expand(self.argument, order, self.shift)


def _product(series: List[QSeries], lattice: CharLattice, order) -> QSeries:
    if not series:
        return QSeries.one(lattice, order)
    return reduce(series_mul, series)


def interface_series(data: HypertoricData, order: int) -> InterfaceSeries:
    lattice = kirwan_lattice(data)
    factors = [theta_expand(Monomial.from_dict(lattice, {f"u{e + 1}": 1, f"v{e + 1}": 1}), order)
               for e in range(data.n)]
    series = _product(factors, lattice, order)
    logger.debug(f"Interface of {data.name} through q^{order}: {len(series.coeffs)} coefficients")
    return InterfaceSeries(data, series, order)


def theta_factors(p_dual: FixedPoint, q: FixedPoint,
                  kahler: Optional[Sequence] = None) -> List[ThetaFactor]:
    """Arguments u_e|_q * u_e|_{p!} with the dual hbar inverted.

    With kahler set, the dual equivariant variables are traded for powers of q:
    z^v -> q^(-<kahler, v>), and the arguments live on the lattice of X alone.
    """
    data = q.parent
    primal = restrictions_for(data)
    dual = restrictions_for(p_dual.parent)
    h = data.hbar_axis
    joint = joint_lattice(data)
    to_joint = LatticeMap(primal.lattice, joint)
    dual_to_joint = LatticeMap(dual.lattice, joint, {h: {h: -1}})
    if kahler is not None:
        kahler = [to_qq(x) for x in kahler]
        drop_dual = LatticeMap(joint, primal.lattice, {z: {} for z in data.dual_axes})

    factors = []
    for e in range(data.n):
        argument = to_joint(primal.u(e, q)) * dual_to_joint(dual.u(e, p_dual))
        if kahler is None:
            factors.append(ThetaFactor(e, argument))
            continue
        z_part = [argument.value(z) for z in data.dual_axes]
        shift = -sum((x * v for x, v in zip(kahler, z_part)), QQ(0))
        factors.append(ThetaFactor(e, drop_dual(argument), shift))
    return factors


def elliptic_stab_restriction(p_dual: FixedPoint, q: FixedPoint, order: int,
                              kahler: Optional[Sequence] = None) -> QSeries:
    """prod_e theta(u_e|_q * u_e|_{p!}); the renormalized elliptic envelope of p at q"""
    factors = theta_factors(p_dual, q, kahler)
    lattice = factors[0].argument.lattice if factors else joint_lattice(q.parent)
    if any(f.vanishes for f in factors):
        return QSeries(lattice, {}, order)
    return _product([f.expand(order) for f in factors], lattice, order)


def elliptic_matrix(data: HypertoricData, order: int) -> Dict[Tuple[str, str], QSeries]:
    """Entries Stab^ell(p)|_q for all pairs, keyed (p, q)"""
    pairs = [(p, q) for p in data.fixed_points for q in data.fixed_points]
    with ThreadPoolExecutor(max_workers=MAX_WORKERS) as executor:
        values = list(executor.map(lambda t: elliptic_stab_restriction(dual_point(t[0]), t[1], order), pairs))
    return {(p.label, q.label): v for (p, q), v in zip(pairs, values)}


def check_restriction_commutes(data: HypertoricData, order: int) -> Tuple[bool, List[Dict[str, str]]]:
    """Restricting the universal interface agrees with the product of restricted thetas"""
    universal = interface_series(data, order)
    failures = []
    for p in data.fixed_points:
        for q in data.fixed_points:
            restricted = universal.restrict(q, dual_point(p))
            direct = elliptic_stab_restriction(dual_point(p), q, order)
            if not restricted.agrees_with(direct):
                failures.append({'p': p.label, 'q': q.label,
                                 'first_difference': str(restricted.first_difference(direct))})
    return not failures, failures
