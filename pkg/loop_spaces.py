"""
Hypertoric Duality Engine - Loop Spaces Module
Truncated loop data, the positive-loop class xi(L+) as a q-series, and its comparison with the interface
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from sympy.polys.domains import QQ

from elliptic_interface import interface_series
from hypertoric_data import FixedPoint, HypertoricData, dual_point
from lattice_algebra import CharLattice, LaurentPoly, Monomial
from models import CheckResult, Coordinate, TruncationError
from qseries import QSeries, product_of_binomials, series_scale
from xi_classes import SubspaceSpec, joint_lattice, kirwan_lattice, kirwan_substitution, xi_restriction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoopData:
    """Index set E x [-N, N]; G sits in every Fourier block by the same partial"""
    base: HypertoricData
    N: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError(f"truncation level must be non-negative, got {self.N}")

    @property
    def levels(self) -> range:
        return range(-self.N, self.N + 1)

    @property
    def index_set(self) -> List[Tuple[int, int]]:
        return [(e, k) for e in range(self.base.n) for k in self.levels]

    @property
    def partial(self) -> Tuple[Tuple[int, ...], ...]:
        """Level-wise diagonal embedding of G"""
        return tuple(self.base.partial[e] for e, _ in self.index_set)

    def positive_spec(self) -> SubspaceSpec:
        """{x_{e,k} = 0 | k < 0} and {y_{e,k} = 0 | k <= 0}: x for k >= 0, y for k < 0"""
        return SubspaceSpec.from_dict({(e, k): Coordinate.X if k >= 0 else Coordinate.Y
                                       for e, k in self.index_set})


@dataclass(frozen=True)
class LoopFactor:
    """(1 - chi_{e,k}^s chi-check_{e,k}^s), s = +1 or -1"""
    index: int
    level: int
    sign: int

    def label(self, data: HypertoricData) -> str:
        power = '' if self.sign > 0 else '^-1'
        return f"(1 - x[{data.E[self.index]},{self.level}]{power} xc[{data.E[self.index]},{self.level}]{power})"


def xi_positive_loops_raw(loops: LoopData) -> List[LoopFactor]:
    factors = []
    for e, k, flag in loops.positive_spec().entries():
        factors.append(LoopFactor(e, k, 1 if flag is Coordinate.X else -1))
    return factors


def loop_lattice(loops: LoopData) -> CharLattice:
    def tag(k: int) -> str:
        return str(k) if k >= 0 else f"m{-k}"
    axes = [f"x{e + 1}_{tag(k)}" for e, k in loops.index_set]
    axes += [f"xc{e + 1}_{tag(k)}" for e, k in loops.index_set]
    return CharLattice(tuple(axes))


def raw_polynomial(loops: LoopData) -> LaurentPoly:
    """The raw product on the loop lattice; exponential in |E|(2N+1), meant for small cases"""
    lattice = loop_lattice(loops)
    one = LaurentPoly.constant(lattice)
    total = one
    for f in xi_positive_loops_raw(loops):
        tag = str(f.level) if f.level >= 0 else f"m{-f.level}"
        total = total * (one - LaurentPoly.monomial(
            lattice, {f"x{f.index + 1}_{tag}": f.sign, f"xc{f.index + 1}_{tag}": f.sign}))
    return total


@dataclass
class LoopClass:
    """xi(L+) after chi_{e,k} -> q^k u_e and chi-check_{e,k} -> v_e"""
    data: HypertoricData
    N: int
    series: QSeries

    def restrict(self, p: FixedPoint, q_dual: FixedPoint) -> QSeries:
        target = joint_lattice(self.data).rescaled(self.series.lattice.scale)
        substitution = kirwan_substitution(self.data, p, q_dual, target)
        return QSeries(target, {k: substitution(c) for k, c in self.series.coeffs.items()},
                       self.series.order)


def _loop_product(start: LaurentPoly, characters: List[Any], N: int, order: int) -> QSeries:
    """start * prod_{0<k<=N} (1 - q^k w)(1 - q^k / w) over the given characters w"""
    factors = []
    for w in characters:
        for k in range(1, N + 1):
            factors.append((QQ(k), w))
            factors.append((QQ(k), w.monomial_inverse()))
    return product_of_binomials(start.lattice, {QQ(0): start}, factors, order)


def xi_positive_loops(data: HypertoricData, order: int, N: Optional[int] = None) -> LoopClass:
    N = order if N is None else N
    if order > N:
        raise TruncationError(f"order {order} exceeds truncation level {N}: raise truncation level")
    lattice = kirwan_lattice(data)
    one = LaurentPoly.constant(lattice)
    characters = [LaurentPoly.monomial(lattice, {f"u{e + 1}": 1, f"v{e + 1}": 1}) for e in range(data.n)]
    start = one
    for w in characters:
        start = start * (one - w)
    return LoopClass(data, N, _loop_product(start, characters, N, order))


def restricted_loops(p: FixedPoint, q_dual: FixedPoint, order: int, N: Optional[int] = None) -> QSeries:
    """The loop product built from restricted characters u_e|_p u_e|_{q!}"""
    data = p.parent
    N = order if N is None else N
    if order > N:
        raise TruncationError(f"order {order} exceeds truncation level {N}: raise truncation level")
    start = xi_restriction(data, None, p, q_dual)
    substitution = kirwan_substitution(data, p, q_dual)
    characters = [substitution(LaurentPoly.monomial(kirwan_lattice(data), {f"u{e + 1}": 1, f"v{e + 1}": 1}))
                  for e in range(data.n)]
    return _loop_product(start, characters, N, order)


def fractional_twist(data: HypertoricData) -> Monomial:
    """prod_e (u_e v_e)^(-1/2)"""
    lattice = kirwan_lattice(data)
    return Monomial.from_dict(lattice, {axis: QQ(-1, 2) for axis in lattice.axis_labels})


def expected_unit(data: HypertoricData) -> LaurentPoly:
    """(-1)^|E| prod_e u_e v_e"""
    lattice = kirwan_lattice(data)
    return LaurentPoly.monomial(lattice, {axis: 1 for axis in lattice.axis_labels}, (-1) ** data.n)


@dataclass
class MainTheoremResult:
    checks: List[CheckResult]
    unit: Optional[LaurentPoly]
    restrictions: List[Dict[str, Any]]


def main_theorem_check(data: HypertoricData, order: int) -> MainTheoremResult:
    """xi(L+) against the interface times prod (u_e v_e)^(-1/2), up to one global unit"""
    loops = xi_positive_loops(data, order).series
    twisted = series_scale(interface_series(data, order).series, fractional_twist(data))

    unit = loops.coefficient(0).exact_monomial_quotient(twisted.coefficient(0))
    checks = []
    if unit is None:
        checks.append(CheckResult("main_theorem", False,
                                  "q^0 terms do not differ by a monomial unit",
                                  {'xi': str(loops.coefficient(0)), 'interface': str(twisted.coefficient(0))}))
        return MainTheoremResult(checks, None, [])

    scaled = series_scale(twisted, unit)
    difference = loops.first_difference(scaled)
    checks.append(CheckResult(
        "main_theorem", difference is None,
        f"xi(L+) = unit * interface * prod (u_e v_e)^(-1/2) through q^{order}" if difference is None
        else f"first differing coefficient at q^{difference}",
        {'unit': str(unit)}))
    checks.append(CheckResult("main_theorem_unit_form", unit == expected_unit(data),
                              f"global unit {unit}; (-1)^|E| prod u_e v_e expected",
                              {'unit': str(unit)}, informational=True))

    records, mismatched = [], []
    for p in data.fixed_points:
        for q in data.fixed_points:
            q_dual = dual_point(q)
            substitution = kirwan_substitution(data, p, q_dual, joint_lattice(data).rescaled(unit.lattice.scale))
            lhs = restricted_loops(p, q_dual, order)
            local_twisted = _restrict(twisted, data, p, q_dual)
            rhs = series_scale(local_twisted, substitution(unit))
            agrees = lhs.agrees_with(rhs)
            local_unit = None
            if not rhs.coefficient(0).is_zero():
                quotient = lhs.coefficient(0).exact_monomial_quotient(local_twisted.coefficient(0))
                local_unit = str(quotient) if quotient is not None else None
                agrees = agrees and quotient == substitution(unit)
            records.append({'p': p.label, 'q': q.label, 'pass': agrees, 'unit': local_unit})
            if not agrees:
                mismatched.append(f"{p.label}x{q.label}")
    checks.append(CheckResult("main_theorem_restrictions", not mismatched,
                              "the same unit works at every fixed-point restriction",
                              {'mismatched': mismatched} if mismatched else None))
    logger.info(f"{'✅' if not mismatched and difference is None else '❌'} Loop identity on {data.name} through q^{order}")
    return MainTheoremResult(checks, unit, records)


def _restrict(series: QSeries, data: HypertoricData, p: FixedPoint, q_dual: FixedPoint) -> QSeries:
    target = joint_lattice(data).rescaled(series.lattice.scale)
    substitution = kirwan_substitution(data, p, q_dual, target)
    return QSeries(target, {k: substitution(c) for k, c in series.coeffs.items()}, series.order)


def check_stabilization(data: HypertoricData, N: int, N_larger: int) -> CheckResult:
    """Truncation levels N <= N' agree through q^N"""
    small = xi_positive_loops(data, N, N).series
    large = xi_positive_loops(data, N, N_larger).series
    return CheckResult("loop_stabilization", small.agrees_with(large),
                       f"levels {N} and {N_larger} agree through q^{N}")


def check_loop_restriction(data: HypertoricData, order: int) -> CheckResult:
    """Restricting xi(L+) commutes with building the loop product from restricted characters"""
    universal = xi_positive_loops(data, order)
    failures = []
    for p in data.fixed_points:
        for q in data.fixed_points:
            q_dual = dual_point(q)
            if not universal.restrict(p, q_dual).agrees_with(restricted_loops(p, q_dual, order)):
                failures.append(f"{p.label}x{q.label}")
    return CheckResult("loop_restriction", not failures,
                       "restriction commutes with the loop substitution",
                       {'failures': failures} if failures else None)
