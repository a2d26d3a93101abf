"""
Hypertoric Duality Engine - q-Series Module
Truncated power series in q with Laurent polynomial coefficients, and theta expansion
"""

import logging
from math import lcm
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import QQ

from lattice_algebra import (CharLattice, LaurentPoly, LatticeMismatchError, Monomial,
                             format_qq, to_qq)
from models import TruncationError

logger = logging.getLogger(__name__)


class QSeries:
    """Series sum_k c_k q^k known exactly for all exponents k <= order"""

    __slots__ = ('lattice', 'coeffs', 'order')

    def __init__(self, lattice: CharLattice, coeffs: Optional[Dict[object, LaurentPoly]] = None,
                 order=0):
        self.lattice = lattice
        self.order = to_qq(order)
        clean: Dict[object, LaurentPoly] = {}
        for k, c in (coeffs or {}).items():
            k = to_qq(k)
            if k > self.order:
                continue
            if not isinstance(c, LaurentPoly):
                c = LaurentPoly.constant(lattice, c)
            elif c.lattice != lattice:
                c = c.rescaled(lattice.scale) if c.lattice.axis_labels == lattice.axis_labels else None
                if c is None:
                    raise LatticeMismatchError(f"Coefficient lattice differs from {lattice.axis_labels}")
            if k in clean:
                c = clean[k] + c
            if c.is_zero():
                clean.pop(k, None)
            else:
                clean[k] = c
        self.coeffs = clean

    @classmethod
    def constant(cls, value: LaurentPoly, order) -> 'QSeries':
        return cls(value.lattice, {QQ(0): value}, order)

    @classmethod
    def one(cls, lattice: CharLattice, order) -> 'QSeries':
        return cls(lattice, {QQ(0): LaurentPoly.constant(lattice)}, order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self):
        """Smallest exponent with nonzero coefficient; order for the zero series"""
        return min(self.coeffs) if self.coeffs else self.order

    def coefficient(self, k) -> LaurentPoly:
        k = to_qq(k)
        if k > self.order:
            raise TruncationError(f"q^{format_qq(k)} is beyond the truncation order {format_qq(self.order)}")
        return self.coeffs.get(k, LaurentPoly.zero(self.lattice))

    def leading(self) -> Tuple[object, LaurentPoly]:
        if not self.coeffs:
            raise TruncationError(f"series vanishes through order {format_qq(self.order)}")
        k = min(self.coeffs)
        return k, self.coeffs[k]

    def truncate(self, order) -> 'QSeries':
        order = to_qq(order)
        if order > self.order:
            raise TruncationError(f"cannot extend a series known through {format_qq(self.order)} to {format_qq(order)}")
        return QSeries(self.lattice, self.coeffs, order)

    def _align(self, other: 'QSeries') -> Tuple['QSeries', 'QSeries']:
        if self.lattice == other.lattice:
            return self, other
        if self.lattice.axis_labels != other.lattice.axis_labels:
            raise LatticeMismatchError(f"Series lattices differ: {self.lattice.axis_labels} vs {other.lattice.axis_labels}")
        scale = lcm(self.lattice.scale, other.lattice.scale)
        return self.rescaled(scale), other.rescaled(scale)

    def rescaled(self, scale: int) -> 'QSeries':
        lattice = self.lattice.rescaled(scale)
        return QSeries(lattice, {k: c.rescaled(scale) for k, c in self.coeffs.items()}, self.order)

    def __add__(self, other: 'QSeries') -> 'QSeries':
        a, b = self._align(other)
        coeffs = dict(a.coeffs)
        for k, c in b.coeffs.items():
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        return QSeries(a.lattice, coeffs, min(a.order, b.order))

    def __neg__(self) -> 'QSeries':
        return QSeries(self.lattice, {k: -c for k, c in self.coeffs.items()}, self.order)

    def __sub__(self, other: 'QSeries') -> 'QSeries':
        return self + (-other)

    def __mul__(self, other) -> 'QSeries':
        if not isinstance(other, QSeries):
            return series_scale(self, other)
        return series_mul(self, other)

    __rmul__ = __mul__

    def shifted(self, k) -> 'QSeries':
        """Multiply by q^k"""
        k = to_qq(k)
        return QSeries(self.lattice, {e + k: c for e, c in self.coeffs.items()}, self.order + k)

    def agrees_with(self, other: 'QSeries', through=None) -> bool:
        a, b = self._align(other)
        limit = min(a.order, b.order) if through is None else to_qq(through)
        if limit > min(a.order, b.order):
            raise TruncationError(f"comparison through {format_qq(limit)} exceeds known precision")
        keys = {k for k in list(a.coeffs) + list(b.coeffs) if k <= limit}
        zero = LaurentPoly.zero(a.lattice)
        return all(a.coeffs.get(k, zero) == b.coeffs.get(k, zero) for k in keys)

    def first_difference(self, other: 'QSeries'):
        a, b = self._align(other)
        limit = min(a.order, b.order)
        zero = LaurentPoly.zero(a.lattice)
        for k in sorted({k for k in list(a.coeffs) + list(b.coeffs) if k <= limit}):
            if a.coeffs.get(k, zero) != b.coeffs.get(k, zero):
                return k
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.order != other.order:
            logger.warning(f"⚠️ Comparing series at orders {format_qq(self.order)} and "
                           f"{format_qq(other.order)}; using the smaller")
        return self.agrees_with(other)

    __hash__ = None

    def __str__(self) -> str:
        parts = []
        for k in sorted(self.coeffs):
            body = f"({self.coeffs[k]})"
            if k == 0:
                parts.append(body)
            elif k == 1:
                parts.append(f"{body}*q")
            elif k.denominator == 1:
                parts.append(f"{body}*q^{format_qq(k)}")
            else:
                parts.append(f"{body}*q^({format_qq(k)})")
        tail = self.order + 1
        parts.append(f"O(q^{format_qq(tail)})" if tail.denominator == 1 else f"O(q^({format_qq(tail)}))")
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f"QSeries({self})"


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated product; exact through min(N_a + v_b, N_b + v_a)"""
    a, b = a._align(b)
    order = min(a.order + b.valuation(), b.order + a.valuation())
    coeffs: Dict[object, LaurentPoly] = {}
    for k1, c1 in a.coeffs.items():
        for k2, c2 in b.coeffs.items():
            k = k1 + k2
            if k > order:
                continue
            term = c1 * c2
            coeffs[k] = coeffs[k] + term if k in coeffs else term
    return QSeries(a.lattice, coeffs, order)


def series_scale(a: QSeries, factor) -> QSeries:
    """Multiply every coefficient by a monomial, polynomial or scalar"""
    if isinstance(factor, Monomial):
        factor = factor.as_poly()
    if isinstance(factor, LaurentPoly):
        lattice = a.lattice.rescaled(lcm(a.lattice.scale, factor.lattice.scale))
        return QSeries(lattice, {k: c * factor for k, c in a.coeffs.items()}, a.order)
    factor = to_qq(factor)
    return QSeries(a.lattice, {k: c * factor for k, c in a.coeffs.items()}, a.order)


def product_of_binomials(lattice: CharLattice, start: Dict[object, LaurentPoly],
                         factors: List[Tuple[object, LaurentPoly]], order) -> QSeries:
    """Exact expansion of start * prod (1 - q^a m) through q^order; start is a finite sum"""
    order = to_qq(order)
    pending = sum((to_qq(a) for a, _ in factors if to_qq(a) < 0), QQ(0))
    current = {to_qq(k): c for k, c in start.items()}
    for a, m in sorted(((to_qq(a), m) for a, m in factors), key=lambda f: f[0]):
        if a < 0:
            pending -= a
        bound = order - pending
        product: Dict[object, LaurentPoly] = {}
        for k, c in current.items():
            for shift, term in ((QQ(0), c), (a, -(c * m))):
                e = k + shift
                if e > bound:
                    continue
                product[e] = product[e] + term if e in product else term
        current = {k: c for k, c in product.items() if not c.is_zero()}
    return QSeries(lattice, current, order)


def theta_expand(x, order, q_shift=0) -> QSeries:
    """Expansion of theta(q^g x) = (y^1/2 - y^-1/2) prod_{n>=1} (1 - q^n y)(1 - q^n / y), y = q^g x"""
    order = to_qq(order)
    if order < 1:
        raise TruncationError(f"theta expansion needs order >= 1, got {format_qq(order)}")
    if isinstance(x, LaurentPoly):
        x = Monomial.from_poly(x)
    if x.coeff != 1:
        raise ValueError(f"theta argument must be a character, got {x}")
    g = to_qq(q_shift)
    half = x ** QQ(1, 2)
    lattice = half.lattice
    x = x.rescaled(lattice.scale)
    start = {g / 2: half.as_poly()}
    start[-g / 2] = start[-g / 2] - half.inverse().as_poly() if -g / 2 in start else -half.inverse().as_poly()

    # lowest q-exponent the full product can reach
    floor = -abs(g) / 2
    n = 1
    while n < abs(g) + 1:
        floor += min(QQ(0), n + g) + min(QQ(0), n - g)
        n += 1

    factors: List[Tuple[object, LaurentPoly]] = []
    n = 1
    while n - abs(g) + floor <= order:
        for a, m in ((n + g, x), (n - g, x.inverse())):
            if a <= 0 or a + floor <= order:
                factors.append((a, m.as_poly()))
        n += 1
    return product_of_binomials(lattice, start, factors, order)
