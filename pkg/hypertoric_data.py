"""
Hypertoric Duality Engine - Hypertoric Data Module
Validates arrangement data, enumerates fixed points and builds the Gale dual
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from config import HBAR_AXIS
from models import (ArrangementInput, CheckResult, DimensionMismatchError, GenericityError,
                    ValidationError)

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]

GENERICITY_CHECKS = ("eta_generic", "zeta_generic")


def _matrix(rows: Sequence[Sequence[int]], nrows: int, ncols: int) -> Matrix:
    return Matrix(nrows, ncols, [int(x) for row in rows for x in row])


def _to_tuple(m: Matrix) -> IntMatrix:
    return tuple(tuple(int(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


@dataclass(frozen=True)
class HypertoricData:
    """Exact sequence 0 -> g -> d -> a -> 0 of lattices with GIT character eta and chamber zeta"""
    E: Tuple[str, ...]
    partial: IntMatrix  # n x k, rows are the characters of G on each coordinate
    beta: IntMatrix  # (n-k) x n
    eta: Tuple[int, ...]
    zeta: Tuple[int, ...]
    name: str = "arrangement"
    a_prefix: str = "a"
    dual_prefix: str = "z"

    def __post_init__(self):
        object.__setattr__(self, 'E', tuple(self.E))
        object.__setattr__(self, 'partial', tuple(tuple(int(x) for x in r) for r in self.partial))
        object.__setattr__(self, 'beta', tuple(tuple(int(x) for x in r) for r in self.beta))
        object.__setattr__(self, 'eta', tuple(int(x) for x in self.eta))
        object.__setattr__(self, 'zeta', tuple(int(x) for x in self.zeta))
        self._check_dimensions()

    def _check_dimensions(self):
        n = len(self.E)
        if len(set(self.E)) != n:
            raise DimensionMismatchError(f"Index labels are not unique: {self.E}")
        if len(self.partial) != n:
            raise DimensionMismatchError(f"partial has {len(self.partial)} rows, expected n={n}")
        k = len(self.eta)
        if any(len(r) != k for r in self.partial):
            raise DimensionMismatchError(f"partial rows must have length k={k} (length of eta)")
        if len(self.beta) != n - k:
            raise DimensionMismatchError(f"beta has {len(self.beta)} rows, expected n-k={n - k}")
        if any(len(r) != n for r in self.beta):
            raise DimensionMismatchError(f"beta rows must have length n={n}")
        if len(self.zeta) != n - k:
            raise DimensionMismatchError(f"zeta has length {len(self.zeta)}, expected n-k={n - k}")

    # Shapes and axes

    @property
    def n(self) -> int:
        return len(self.E)

    @property
    def k(self) -> int:
        return len(self.eta)

    @property
    def rank_a(self) -> int:
        return self.n - self.k

    @property
    def partial_matrix(self) -> Matrix:
        return _matrix(self.partial, self.n, self.k)

    @property
    def beta_matrix(self) -> Matrix:
        return _matrix(self.beta, self.rank_a, self.n)

    @property
    def a_axes(self) -> Tuple[str, ...]:
        return tuple(f"{self.a_prefix}{i + 1}" for i in range(self.rank_a))

    @property
    def dual_axes(self) -> Tuple[str, ...]:
        return tuple(f"{self.dual_prefix}{i + 1}" for i in range(self.k))

    @property
    def hbar_axis(self) -> str:
        return HBAR_AXIS

    def beta_column(self, e: int) -> Tuple[int, ...]:
        return tuple(self.beta[i][e] for i in range(self.rank_a))

    def label(self, indices) -> str:
        return '{' + ','.join(self.E[i] for i in sorted(indices)) + '}'

    # Derived structure

    @cached_property
    def fixed_points(self) -> List['FixedPoint']:
        return enumerate_bases(self)

    @cached_property
    def dual(self) -> 'HypertoricData':
        return gale_dual(self)

    def point(self, base) -> 'FixedPoint':
        base = tuple(sorted(base))
        for p in self.fixed_points:
            if p.base == base:
                return p
        raise KeyError(f"{self.label(base)} is not a base of {self.name}")

    # Documents

    @classmethod
    def from_document(cls, doc: Dict[str, Any]) -> 'HypertoricData':
        parsed = ArrangementInput(**doc)
        return cls(E=tuple(parsed.E), partial=tuple(map(tuple, parsed.partial)),
                   beta=tuple(map(tuple, parsed.beta)), eta=tuple(parsed.eta),
                   zeta=tuple(parsed.zeta), name=parsed.name or "arrangement")

    def to_document(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'E': list(self.E),
            'partial': [list(r) for r in self.partial],
            'beta': [list(r) for r in self.beta],
            'eta': list(self.eta),
            'zeta': list(self.zeta),
        }

    def with_zeta(self, zeta: Sequence[int]) -> 'HypertoricData':
        return HypertoricData(self.E, self.partial, self.beta, self.eta, tuple(zeta),
                              self.name, self.a_prefix, self.dual_prefix)

    def with_eta(self, eta: Sequence[int]) -> 'HypertoricData':
        return HypertoricData(self.E, self.partial, self.beta, tuple(eta), self.zeta,
                              self.name, self.a_prefix, self.dual_prefix)


@dataclass(frozen=True, eq=False)
class FixedPoint:
    """Torus fixed point indexed by a base b of the beta matroid"""
    base: Tuple[int, ...]
    alpha: Dict[int, Tuple[int, ...]]  # e in b -> vector in a^dual
    beta_p: Dict[int, Tuple[int, ...]]  # e not in b -> vector in g
    parent: HypertoricData = field(repr=False)

    @property
    def label(self) -> str:
        return self.parent.label(self.base)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(e for e in range(self.parent.n) if e not in self.base)

    def alpha_pairing(self, e: int, cochar: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.alpha[e], cochar))

    def beta_pairing(self, e: int, char: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.beta_p[e], char))

    def __eq__(self, other) -> bool:
        return isinstance(other, FixedPoint) and self.base == other.base and self.parent == other.parent

    def __hash__(self):
        return hash((self.base, self.parent.E, self.parent.beta))

    def __repr__(self) -> str:
        return f"FixedPoint({self.label} of {self.parent.name})"


@dataclass
class ValidationReport:
    """Pass/fail per hypertoric data invariant"""
    arrangement: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.informational]


def _fixed_point(data: HypertoricData, base: Tuple[int, ...]) -> Optional[FixedPoint]:
    beta_b = data.beta_matrix.extract(list(range(data.rank_a)), list(base))
    if abs(beta_b.det()) != 1:
        return None
    inv = beta_b.inv() if data.rank_a else beta_b
    alpha = {e: tuple(int(x) for x in inv.row(i)) for i, e in enumerate(base)}
    comp = [e for e in range(data.n) if e not in base]
    rows = data.partial_matrix.extract(comp, list(range(data.k)))
    inv_rows = rows.inv() if data.k else rows
    beta_p = {e: tuple(int(inv_rows[j, i]) for j in range(data.k)) for i, e in enumerate(comp)}
    return FixedPoint(tuple(base), alpha, beta_p, data)


def enumerate_bases(data: HypertoricData) -> List[FixedPoint]:
    """All bases b (|b| = n-k, det beta|_b = +-1) in lexicographic order"""
    points = []
    for base in combinations(range(data.n), data.rank_a):
        p = _fixed_point(data, base)
        if p is not None:
            points.append(p)
    logger.debug(f"{data.name}: {len(points)} fixed points")
    return points


def gale_dual(data: HypertoricData) -> HypertoricData:
    """Transpose the sequence; eta^! = -zeta and zeta^! = -eta"""
    return HypertoricData(
        E=data.E,
        partial=_to_tuple(data.beta_matrix.T),
        beta=_to_tuple(data.partial_matrix.T),
        eta=tuple(-x for x in data.zeta),
        zeta=tuple(-x for x in data.eta),
        name=data.name[:-1] if data.name.endswith('!') else f"{data.name}!",
        a_prefix=data.dual_prefix,
        dual_prefix=data.a_prefix,
    )


def dual_point(p: FixedPoint) -> FixedPoint:
    """The fixed point of the Gale dual indexed by the complement of b"""
    return p.parent.dual.point(p.complement)


def _check_exactness(data: HypertoricData) -> CheckResult:
    partial, beta = data.partial_matrix, data.beta_matrix
    product = beta * partial
    if any(product):
        return CheckResult("exactness", False, "beta * partial is not zero",
                           {'product': [list(r) for r in _to_tuple(product)]})
    if partial.rank() != data.k or beta.rank() != data.rank_a:
        return CheckResult("exactness", False,
                           f"rank partial = {partial.rank()} (want {data.k}), "
                           f"rank beta = {beta.rank()} (want {data.rank_a})")
    for name, m in (('partial', partial), ('beta', beta)):
        if m.rows == 0 or m.cols == 0:
            continue
        snf = smith_normal_form(m, domain=ZZ)
        diagonal = [abs(int(snf[i, i])) for i in range(min(snf.rows, snf.cols))]
        if any(d != 1 for d in diagonal):
            return CheckResult("exactness", False,
                               f"{name} has Smith invariants {diagonal}; the sequence has torsion",
                               {'matrix': name, 'invariants': diagonal})
    return CheckResult("exactness", True, "beta * partial = 0, ranks correct, torsion free")


def _check_unimodularity(data: HypertoricData) -> CheckResult:
    beta = data.beta_matrix
    for size in range(1, data.rank_a + 1):
        for rows in combinations(range(data.rank_a), size):
            for cols in combinations(range(data.n), size):
                det = beta.extract(list(rows), list(cols)).det()
                if det not in (-1, 0, 1):
                    return CheckResult("unimodularity", False,
                                       f"submatrix rows {list(rows)} cols {list(cols)} has determinant {det}",
                                       {'rows': list(rows), 'cols': list(cols), 'det': int(det)})
    return CheckResult("unimodularity", True, "every square submatrix of beta has determinant in {-1, 0, 1}")


def _check_no_fixed_coordinate(data: HypertoricData) -> CheckResult:
    partial = data.partial_matrix
    for e in range(data.n):
        rest = [i for i in range(data.n) if i != e]
        if partial.extract(rest, list(range(data.k))).rank() < data.k:
            return CheckResult("no_fixed_coordinate", False,
                               f"a cocharacter of G moves only coordinate {data.E[e]}",
                               {'coordinate': data.E[e]})
    return CheckResult("no_fixed_coordinate", True, "no cocharacter of G acts on a single coordinate")


def _check_eta_generic(data: HypertoricData) -> CheckResult:
    if data.k == 0:
        return CheckResult("eta_generic", True, "G is trivial")
    eta = Matrix([list(data.eta)])
    for subset in combinations(range(data.n), data.k - 1):
        rows = data.partial_matrix.extract(list(subset), list(range(data.k))) if subset else Matrix(0, data.k, [])
        if rows.rank() != data.k - 1:
            continue
        if rows.col_join(eta).det() == 0:
            return CheckResult("eta_generic", False,
                               f"eta lies on the wall spanned by {data.label(subset)}",
                               {'wall': [data.E[i] for i in subset]})
    return CheckResult("eta_generic", True, "eta avoids every wall")


def _check_zeta_generic(data: HypertoricData) -> CheckResult:
    for p in data.fixed_points:
        for e in p.base:
            if p.alpha_pairing(e, data.zeta) == 0:
                return CheckResult("zeta_generic", False,
                                   f"<alpha^p_{data.E[e]}, zeta> = 0 at {p.label}",
                                   {'point': p.label, 'index': data.E[e]})
    return CheckResult("zeta_generic", True, "zeta pairs nonzero with every alpha")


def _check_dual_bases(data: HypertoricData) -> CheckResult:
    partial = data.partial_matrix
    for p in data.fixed_points:
        for e in p.base:
            for f in p.base:
                if sum(a * b for a, b in zip(p.alpha[e], data.beta_column(f))) != int(e == f):
                    return CheckResult("dual_bases", False, f"alpha dual basis fails at {p.label}")
        for e in p.complement:
            for f in p.complement:
                pairing = sum(int(partial[f, j]) * p.beta_p[e][j] for j in range(data.k))
                if pairing != int(e == f):
                    return CheckResult("dual_bases", False, f"beta^p dual basis fails at {p.label}")
    return CheckResult("dual_bases", True, "alpha and beta^p are dual bases at every fixed point")


def validate(data: HypertoricData) -> ValidationReport:
    report = ValidationReport(data.name)
    report.checks.append(_check_exactness(data))
    report.checks.append(_check_unimodularity(data))
    report.checks.append(_check_no_fixed_coordinate(data))
    report.checks.append(_check_eta_generic(data))
    if report.passed:
        if not data.fixed_points:
            report.checks.append(CheckResult("fixed_points", False, "no bases found"))
        else:
            report.checks.append(_check_dual_bases(data))
            report.checks.append(_check_zeta_generic(data))
    if report.passed:
        logger.info(f"✅ {data.name}: {len(data.fixed_points)} fixed points, all checks pass")
    else:
        for failure in report.failures():
            logger.warning(f"❌ {data.name}: {failure.name}: {failure.detail}")
    return report


def require_valid(data: HypertoricData) -> HypertoricData:
    report = validate(data)
    if not report.passed:
        failure = report.failures()[0]
        error = GenericityError if failure.name in GENERICITY_CHECKS else ValidationError
        raise error(f"{data.name}: {failure.name}: {failure.detail}")
    return data


# Presets

def cotangent_projective_space(n: int) -> HypertoricData:
    """T*P^(n-1): G = C^x acting diagonally on C^n"""
    if n < 2:
        raise DimensionMismatchError("T*P^(n-1) needs n >= 2")
    beta = tuple(tuple(1 if j == i else (-1 if j == n - 1 else 0) for j in range(n)) for i in range(n - 1))
    return HypertoricData(
        E=tuple(f"e{i + 1}" for i in range(n)),
        partial=tuple((1,) for _ in range(n)),
        beta=beta,
        eta=(1,),
        zeta=tuple(range(n - 1, 0, -1)),
        name=f"T*P{n - 1}",
    )


def rank_two_arrangement() -> HypertoricData:
    """Four hyperplanes in a plane; five fixed points"""
    return HypertoricData(
        E=('e1', 'e2', 'e3', 'e4'),
        partial=((1, 0), (1, 0), (1, 1), (0, 1)),
        beta=((1, -1, 0, 0), (0, 1, -1, 1)),
        eta=(2, 1),
        zeta=(1, 2),
        name="rank2",
    )


PRESETS = {
    'tp1': lambda: cotangent_projective_space(2),
    'tp2': lambda: cotangent_projective_space(3),
    'rank2': rank_two_arrangement,
}
