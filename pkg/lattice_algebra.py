"""
Hypertoric Duality Engine - Lattice Algebra Module
Exact characters, Laurent polynomials, rational characters, degree polytopes,
the wedge map and limits along cocharacters
"""

import logging
import re
from dataclasses import dataclass
from functools import reduce
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix, Rational, Symbol
from sympy.polys.domains import QQ
from sympy.solvers.simplex import InfeasibleLPError, lpmax

from config import LATTICE_BASE_SCALE
from models import (Boundedness, DegreeOfZeroError, LatticeMismatchError,
                    LimitDivergesError)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Cocharacter = Mapping[str, object]

_NUMBER = re.compile(r'^-?\d+(/\d+)?$')
_FACTOR = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)(?:\^(?:\((-?\d+(?:/\d+)?)\)|(-?\d+)))?$')


def to_qq(value):
    """Coerce ints, fractions, sympy rationals and 'p/q' strings to QQ"""
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, str):
        num, _, den = value.strip().partition('/')
        return QQ(int(num), int(den) if den else 1)
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return QQ(int(value.p), int(value.q))
    if hasattr(value, 'numerator'):
        return QQ(int(value.numerator), int(value.denominator))
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def format_qq(value) -> str:
    value = to_qq(value)
    if value.denominator == 1:
        return str(int(value.numerator))
    return f"{int(value.numerator)}/{int(value.denominator)}"


def to_sympy(value) -> Rational:
    value = to_qq(value)
    return Rational(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class CharLattice:
    """Character lattice with named axes; exponents are stored multiplied by scale"""
    axis_labels: Tuple[str, ...]
    scale: int = LATTICE_BASE_SCALE

    def __post_init__(self):
        object.__setattr__(self, 'axis_labels', tuple(self.axis_labels))
        if self.scale < 1:
            raise ValueError(f"Lattice scale must be positive, got {self.scale}")
        if len(set(self.axis_labels)) != len(self.axis_labels):
            raise ValueError(f"Duplicate axis labels: {self.axis_labels}")

    @property
    def rank(self) -> int:
        return len(self.axis_labels)

    def index(self, label: str) -> int:
        try:
            return self.axis_labels.index(label)
        except ValueError:
            raise LatticeMismatchError(f"Unknown axis {label!r} on lattice {self.axis_labels}")

    def zero(self) -> Exponent:
        return (0,) * self.rank

    def rescaled(self, scale: int) -> 'CharLattice':
        return CharLattice(self.axis_labels, scale)

    def encode(self, exponents: Mapping[str, object]) -> Exponent:
        vec = [0] * self.rank
        for label, value in exponents.items():
            scaled = to_qq(value) * self.scale
            if scaled.denominator != 1:
                raise LatticeMismatchError(
                    f"Exponent {format_qq(value)} on {label} needs a scale finer than {self.scale}")
            vec[self.index(label)] += int(scaled.numerator)
        return tuple(vec)

    def value(self, vec: Exponent, label: str):
        return QQ(vec[self.index(label)], self.scale)

    def decode(self, vec: Exponent, axes: Optional[Sequence[str]] = None) -> Tuple:
        labels = self.axis_labels if axes is None else axes
        return tuple(QQ(vec[self.index(l)], self.scale) for l in labels)

    def pairing(self, vec: Exponent, sigma: Cocharacter):
        return sum((QQ(vec[self.index(l)], self.scale) * to_qq(v) for l, v in sigma.items()), QQ(0))


def _common_scale(a: CharLattice, b: CharLattice) -> CharLattice:
    if a.axis_labels != b.axis_labels:
        raise LatticeMismatchError(f"Lattices differ: {a.axis_labels} vs {b.axis_labels}")
    if a.scale == b.scale:
        return a
    return a.rescaled(lcm(a.scale, b.scale))


class LaurentPoly:
    """Sparse exact Laurent polynomial; terms map scaled exponent vectors to QQ coefficients"""

    __slots__ = ('lattice', 'terms')

    def __init__(self, lattice: CharLattice, terms: Optional[Mapping[Exponent, object]] = None):
        self.lattice = lattice
        clean = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != lattice.rank:
                raise LatticeMismatchError(f"Exponent {exp} has wrong length for {lattice.axis_labels}")
            c = to_qq(coeff)
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), QQ(0)) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _clean(cls, lattice: CharLattice, terms: Dict[Exponent, object]) -> 'LaurentPoly':
        poly = cls.__new__(cls)
        poly.lattice = lattice
        poly.terms = {k: v for k, v in terms.items() if v}
        return poly

    @classmethod
    def zero(cls, lattice: CharLattice) -> 'LaurentPoly':
        return cls._clean(lattice, {})

    @classmethod
    def constant(cls, lattice: CharLattice, value=1) -> 'LaurentPoly':
        return cls._clean(lattice, {lattice.zero(): to_qq(value)})

    @classmethod
    def monomial(cls, lattice: CharLattice, exponents: Optional[Mapping[str, object]] = None,
                 coeff=1) -> 'LaurentPoly':
        return cls._clean(lattice, {lattice.encode(exponents or {}): to_qq(coeff)})

    @classmethod
    def from_terms(cls, lattice: CharLattice, terms: Iterable[Tuple[Mapping[str, object], object]]) -> 'LaurentPoly':
        out: Dict[Exponent, object] = {}
        for exps, coeff in terms:
            key = lattice.encode(exps)
            out[key] = out.get(key, QQ(0)) + to_qq(coeff)
        return cls._clean(lattice, out)

    # Structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def rescaled(self, scale: int) -> 'LaurentPoly':
        if scale == self.lattice.scale:
            return self
        if scale % self.lattice.scale:
            raise LatticeMismatchError(f"Cannot rescale from {self.lattice.scale} to {scale}")
        factor = scale // self.lattice.scale
        return LaurentPoly._clean(self.lattice.rescaled(scale),
                                  {tuple(x * factor for x in e): c for e, c in self.terms.items()})

    def _align(self, other) -> Tuple['LaurentPoly', 'LaurentPoly']:
        if isinstance(other, Monomial):
            other = other.as_poly()
        if not isinstance(other, LaurentPoly):
            return self, LaurentPoly.constant(self.lattice, other)
        lattice = _common_scale(self.lattice, other.lattice)
        return self.rescaled(lattice.scale), other.rescaled(lattice.scale)

    # Arithmetic

    def __add__(self, other) -> 'LaurentPoly':
        if isinstance(other, RationalChar):
            return NotImplemented
        a, b = self._align(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, QQ(0)) + c
        return LaurentPoly._clean(a.lattice, out)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly._clean(self.lattice, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> 'LaurentPoly':
        if isinstance(other, RationalChar):
            return NotImplemented
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other) -> 'LaurentPoly':
        return (-self) + other

    def __mul__(self, other) -> 'LaurentPoly':
        if isinstance(other, RationalChar):
            return NotImplemented
        a, b = self._align(other)
        out: Dict[Exponent, object] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                out[key] = out.get(key, QQ(0)) + c1 * c2
        return LaurentPoly._clean(a.lattice, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'LaurentPoly':
        if n < 0:
            if not self.is_monomial():
                raise ValueError("Negative powers exist only for monomials")
            return self.monomial_inverse() ** (-n)
        result = LaurentPoly.constant(self.lattice)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monomial_inverse(self) -> 'LaurentPoly':
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        (e, c), = self.terms.items()
        return LaurentPoly._clean(self.lattice, {tuple(-x for x in e): 1 / c})

    def __truediv__(self, other) -> 'RationalChar':
        return RationalChar(self) / other

    def dual(self) -> 'LaurentPoly':
        """Character-wise inverse, V -> V^dual"""
        return LaurentPoly._clean(self.lattice, {tuple(-x for x in e): c for e, c in self.terms.items()})

    def exact_monomial_quotient(self, other: 'LaurentPoly') -> Optional['LaurentPoly']:
        """Return m with self = m * other when m is a monomial, else None"""
        a, b = self._align(other)
        if b.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if a.is_zero():
            return LaurentPoly.zero(a.lattice)
        if len(a) != len(b):
            return None
        ea = max(a.terms)
        eb = max(b.terms)
        m = LaurentPoly._clean(a.lattice, {tuple(x - y for x, y in zip(ea, eb)): a.terms[ea] / b.terms[eb]})
        return m if m * b == a else None

    # Comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalChar):
            return other == self
        try:
            a, b = self._align(other)
        except LatticeMismatchError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        return hash((self.lattice.axis_labels,
                     frozenset((self.lattice.decode(e), c) for e, c in self.terms.items())))

    # Gradings and supports

    def support(self, axes: Optional[Sequence[str]] = None) -> List[Tuple]:
        return sorted({self.lattice.decode(e, axes) for e in self.terms})

    def grades(self, sigma: Cocharacter) -> Dict[Exponent, object]:
        return {e: self.lattice.pairing(e, sigma) for e in self.terms}

    def max_grade(self, sigma: Cocharacter):
        return max(self.grades(sigma).values())

    def leading_part(self, sigma: Cocharacter) -> Tuple[object, 'LaurentPoly']:
        grades = self.grades(sigma)
        top = max(grades.values())
        return top, LaurentPoly._clean(self.lattice, {e: c for e, c in self.terms.items() if grades[e] == top})

    def coefficient(self, exponents: Optional[Mapping[str, object]] = None):
        key = self.lattice.encode(exponents or {})
        return self.terms.get(key, QQ(0))

    def drop_axes(self, labels: Iterable[str]) -> 'LaurentPoly':
        labels = list(labels)
        idx = [self.lattice.index(l) for l in labels]
        keep = [i for i in range(self.lattice.rank) if i not in idx]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in idx):
                raise LatticeMismatchError(f"Cannot drop axes {labels}: {self} depends on them")
            out[tuple(e[i] for i in keep)] = c
        lattice = CharLattice(tuple(self.lattice.axis_labels[i] for i in keep), self.lattice.scale)
        return LaurentPoly._clean(lattice, out)

    # Canonical text

    def _term_text(self, e: Exponent, c) -> str:
        factors = []
        for label, x in zip(self.lattice.axis_labels, e):
            if not x:
                continue
            v = QQ(x, self.lattice.scale)
            if v == 1:
                factors.append(label)
            elif v.denominator == 1:
                factors.append(f"{label}^{format_qq(v)}")
            else:
                factors.append(f"{label}^({format_qq(v)})")
        if not factors:
            return format_qq(c)
        body = '*'.join(factors)
        if c == 1:
            return body
        if c == -1:
            return f"-{body}"
        return f"{format_qq(c)}*{body}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return ' + '.join(self._term_text(e, self.terms[e]) for e in sorted(self.terms))

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    @classmethod
    def parse(cls, text: str, lattice: CharLattice) -> 'LaurentPoly':
        text = text.strip()
        if text == "0":
            return cls.zero(lattice)
        terms = []
        for raw in text.split(' + '):
            raw = raw.strip()
            coeff = QQ(1)
            if raw.startswith('-') and not _NUMBER.match(raw.split('*')[0]):
                coeff = QQ(-1)
                raw = raw[1:]
            exps: Dict[str, object] = {}
            for token in raw.split('*'):
                if _NUMBER.match(token):
                    coeff *= to_qq(token)
                    continue
                match = _FACTOR.match(token)
                if not match:
                    raise ValueError(f"Cannot parse factor {token!r} in {text!r}")
                label, frac, integer = match.groups()
                power = to_qq(frac or integer or '1')
                exps[label] = to_qq(exps.get(label, 0)) + power
            terms.append((exps, coeff))
        return cls.from_terms(lattice, terms)


@dataclass(frozen=True)
class Monomial:
    """A single character with exact coefficient"""
    lattice: CharLattice
    exponents: Exponent
    coeff: object = QQ(1)

    def __post_init__(self):
        object.__setattr__(self, 'exponents', tuple(self.exponents))
        object.__setattr__(self, 'coeff', to_qq(self.coeff))
        if not self.coeff:
            raise ValueError("Monomial coefficient must be nonzero")

    @classmethod
    def one(cls, lattice: CharLattice) -> 'Monomial':
        return cls(lattice, lattice.zero())

    @classmethod
    def from_dict(cls, lattice: CharLattice, exponents: Mapping[str, object], coeff=1) -> 'Monomial':
        return cls(lattice, lattice.encode(exponents), coeff)

    @classmethod
    def from_poly(cls, poly: LaurentPoly) -> 'Monomial':
        if not poly.is_monomial():
            raise ValueError(f"{poly} is not a monomial")
        (e, c), = poly.terms.items()
        return cls(poly.lattice, e, c)

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly._clean(self.lattice, {self.exponents: self.coeff})

    def rescaled(self, scale: int) -> 'Monomial':
        return Monomial.from_poly(self.as_poly().rescaled(scale))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def value(self, label: str):
        return self.lattice.value(self.exponents, label)

    def grade(self, sigma: Cocharacter):
        return self.lattice.pairing(self.exponents, sigma)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial.from_poly(self.as_poly() * other.as_poly())
        return self.as_poly() * other

    __rmul__ = __mul__

    def inverse(self) -> 'Monomial':
        return Monomial(self.lattice, tuple(-x for x in self.exponents), 1 / self.coeff)

    def __truediv__(self, other: 'Monomial') -> 'Monomial':
        return self * other.inverse()

    def __pow__(self, power) -> 'Monomial':
        r = to_qq(power)
        if r.denominator == 1:
            return Monomial.from_poly(self.as_poly() ** int(r.numerator))
        if self.coeff != 1:
            raise ValueError(f"Fractional power of a monomial with coefficient {format_qq(self.coeff)}")
        raw = [QQ(x) * r for x in self.exponents]
        factor = reduce(lcm, (int(v.denominator) for v in raw), 1)
        lattice = self.lattice.rescaled(self.lattice.scale * factor)
        return Monomial(lattice, tuple(int((v * factor).numerator) for v in raw))

    def __eq__(self, other) -> bool:
        if isinstance(other, Monomial):
            return self.as_poly() == other.as_poly()
        return self.as_poly() == other

    def __hash__(self):
        return hash(self.as_poly())

    def __str__(self) -> str:
        return str(self.as_poly())


class RationalChar:
    """Ratio num/den of Laurent polynomials; equality by cross-multiplication"""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        if isinstance(num, Monomial):
            num = num.as_poly()
        if den is None:
            den = LaurentPoly.constant(num.lattice)
        elif isinstance(den, Monomial):
            den = den.as_poly()
        num, den = num._align(den)
        if den.is_zero():
            raise ZeroDivisionError("RationalChar with zero denominator")
        self.num = num
        self.den = den

    @property
    def lattice(self) -> CharLattice:
        return self.num.lattice

    @classmethod
    def coerce(cls, value, lattice: Optional[CharLattice] = None) -> 'RationalChar':
        if isinstance(value, RationalChar):
            return value
        if isinstance(value, (LaurentPoly, Monomial)):
            return cls(value)
        return cls(LaurentPoly.constant(lattice, value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> 'RationalChar':
        other = RationalChar.coerce(other, self.lattice)
        if self.den == other.den:
            return RationalChar(self.num + other.num, self.den)
        return RationalChar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> 'RationalChar':
        return RationalChar(-self.num, self.den)

    def __sub__(self, other) -> 'RationalChar':
        return self + (-RationalChar.coerce(other, self.lattice))

    def __rsub__(self, other) -> 'RationalChar':
        return (-self) + other

    def __mul__(self, other) -> 'RationalChar':
        other = RationalChar.coerce(other, self.lattice)
        return RationalChar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> 'RationalChar':
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalChar(self.den, self.num)

    def __truediv__(self, other) -> 'RationalChar':
        return self * RationalChar.coerce(other, self.lattice).inverse()

    def __pow__(self, n: int) -> 'RationalChar':
        if n < 0:
            return self.inverse() ** (-n)
        return RationalChar(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        try:
            other = RationalChar.coerce(other, self.lattice)
            return self.num * other.den == other.num * self.den
        except LatticeMismatchError:
            return False

    __hash__ = None

    def as_polynomial(self) -> LaurentPoly:
        """Exact quotient when the denominator is a monomial"""
        if not self.den.is_monomial():
            raise ValueError(f"{self} does not have a monomial denominator")
        return self.num * self.den.monomial_inverse()

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalChar({self})"


class LatticeMap:
    """Monomial substitution: each source axis maps to an exponent vector on the target lattice"""

    def __init__(self, source: CharLattice, target: CharLattice,
                 images: Optional[Mapping[str, Mapping[str, object]]] = None):
        images = images or {}
        self.source = source
        self.target = target
        self._rows = []
        for label in source.axis_labels:
            if label in images:
                image = images[label]
            elif label in target.axis_labels:
                image = {label: 1}
            else:
                raise LatticeMismatchError(f"No image for axis {label!r}")
            row = [QQ(0)] * target.rank
            for tl, v in image.items():
                row[target.index(tl)] += to_qq(v)
            self._rows.append(row)

    def map_exponent(self, vec: Exponent, scale: int) -> Exponent:
        out = []
        for j in range(self.target.rank):
            total = QQ(0)
            for i, x in enumerate(vec):
                if x and self._rows[i][j]:
                    total += QQ(x, scale) * self._rows[i][j]
            scaled = total * self.target.scale
            if scaled.denominator != 1:
                raise LatticeMismatchError(
                    f"Image exponent {format_qq(total)} needs a scale finer than {self.target.scale}")
            out.append(int(scaled.numerator))
        return tuple(out)

    def __call__(self, value):
        if isinstance(value, RationalChar):
            return RationalChar(self(value.num), self(value.den))
        if isinstance(value, Monomial):
            return Monomial.from_poly(self(value.as_poly()))
        if value.lattice.axis_labels != self.source.axis_labels:
            raise LatticeMismatchError(f"Map source {self.source.axis_labels} vs {value.lattice.axis_labels}")
        out: Dict[Exponent, object] = {}
        for e, c in value.terms.items():
            key = self.map_exponent(e, value.lattice.scale)
            out[key] = out.get(key, QQ(0)) + c
        return LaurentPoly._clean(self.target, out)


def wedge_star(v: LaurentPoly, omit_trivial: bool = False) -> RationalChar:
    """Product over nonzero characters mu of (1 - t^mu)^{c_mu}"""
    if not v.has_integer_coefficients():
        raise ValueError(f"wedge_star needs integer coefficients, got {v}")
    one = LaurentPoly.constant(v.lattice)
    num, den = one, one
    for e, c in sorted(v.terms.items()):
        if not any(e):
            if omit_trivial:
                continue
            raise ValueError(f"wedge_star of a class with trivial-character coefficient {format_qq(c)}")
        factor = one - LaurentPoly._clean(v.lattice, {e: QQ(1)})
        power = int(c.numerator)
        if power > 0:
            num = num * factor ** power
        else:
            den = den * factor ** (-power)
    return RationalChar(num, den)


@dataclass(frozen=True)
class DegreePolytope:
    """Support points projected to the A-axes; the hull is implicit"""
    axes: Tuple[str, ...]
    points: frozenset

    def minkowski_sum(self, other: 'DegreePolytope') -> 'DegreePolytope':
        return DegreePolytope(self.axes, frozenset(tuple(x + y for x, y in zip(p, q))
                                                   for p in self.points for q in other.points))

    def shifted(self, vector: Sequence) -> 'DegreePolytope':
        vector = [to_qq(v) for v in vector]
        return DegreePolytope(self.axes, frozenset(tuple(x + y for x, y in zip(p, vector))
                                                   for p in self.points))

    def max_along(self, sigma: Sequence):
        sigma = [to_qq(s) for s in sigma]
        return max(sum((x * s for x, s in zip(p, sigma)), QQ(0)) for p in self.points)

    def affine_rank(self) -> int:
        pts = sorted(self.points)
        if len(pts) < 2:
            return 0
        base = pts[0]
        return Matrix([[to_sympy(x - y) for x, y in zip(p, base)] for p in pts[1:]]).rank()

    def contains_point(self, point: Sequence, strict: bool = False) -> bool:
        return _hull_contains(tuple(to_qq(x) for x in point), sorted(self.points), strict)

    def contains(self, other: 'DegreePolytope', strict: bool = False) -> bool:
        if strict and self.affine_rank() < len(self.axes):
            return False
        return all(self.contains_point(p, strict) for p in other.points)

    def __str__(self) -> str:
        pts = ', '.join('(' + ', '.join(format_qq(x) for x in p) + ')' for p in sorted(self.points))
        return f"hull{{{pts}}}"


def _hull_contains(point: Tuple, generators: List[Tuple], strict: bool) -> bool:
    if not generators:
        return False
    dim = len(point)
    if dim == 0:
        return True
    if dim == 1:
        lo = min(g[0] for g in generators)
        hi = max(g[0] for g in generators)
        if strict:
            return lo < point[0] < hi
        return lo <= point[0] <= hi
    if point in generators and not strict:
        return True
    lam = [Symbol(f'lam{i}') for i in range(len(generators))]
    eps = Symbol('eps')
    constraints = []
    for l in lam:
        constraints.append(l >= 0)
        constraints.append(l >= eps)
    for j in range(dim):
        row = sum(l * to_sympy(g[j]) for l, g in zip(lam, generators))
        constraints.append(row <= to_sympy(point[j]))
        constraints.append(row >= to_sympy(point[j]))
    constraints.append(sum(lam) <= 1)
    constraints.append(sum(lam) >= 1)
    try:
        optimum, _ = lpmax(eps, constraints)
    except InfeasibleLPError:
        return False
    return bool(optimum > 0) if strict else True


def deg_A(f: LaurentPoly, a_axes: Sequence[str]) -> DegreePolytope:
    if f.is_zero():
        raise DegreeOfZeroError("degree of zero undefined")
    return DegreePolytope(tuple(a_axes), frozenset(f.support(a_axes)))


def is_bounded(F: LaurentPoly, G: LaurentPoly, a_axes: Sequence[str],
               along: Optional[Cocharacter] = None) -> Boundedness:
    """Compare A-degrees of F and G; along restricts the comparison to one cocharacter"""
    if G.is_zero():
        raise DegreeOfZeroError("degree of zero undefined")
    if F.is_zero():
        return Boundedness.BOUNDED
    if along is not None:
        top_f, top_g = F.max_grade(along), G.max_grade(along)
        if top_f < top_g:
            return Boundedness.STRICTLY_BOUNDED
        return Boundedness.BOUNDED if top_f == top_g else Boundedness.UNBOUNDED
    deg_f, deg_g = deg_A(F, a_axes), deg_A(G, a_axes)
    if deg_g.contains(deg_f, strict=True):
        return Boundedness.STRICTLY_BOUNDED
    if deg_g.contains(deg_f):
        return Boundedness.BOUNDED
    return Boundedness.UNBOUNDED


def limit_along(Q: RationalChar, sigma: Cocharacter) -> RationalChar:
    """Restriction of Q to the boundary divisor of the partial compactification along sigma"""
    if not any(to_qq(v) for v in sigma.values()):
        raise ValueError("limit along the zero cocharacter")
    if Q.num.is_zero():
        return Q
    top_num, lead_num = Q.num.leading_part(sigma)
    top_den, lead_den = Q.den.leading_part(sigma)
    if top_num > top_den:
        raise LimitDivergesError(f"limit diverges along {dict(sigma)}: grade {format_qq(top_num)} > {format_qq(top_den)}")
    if top_num < top_den:
        return RationalChar(LaurentPoly.zero(Q.lattice), LaurentPoly.constant(Q.lattice))
    pivot = LaurentPoly._clean(Q.lattice, {min(lead_den.terms): QQ(1)}).monomial_inverse()
    return RationalChar(lead_num * pivot, lead_den * pivot)
