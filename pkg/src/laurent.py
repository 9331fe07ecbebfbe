"""Exact sparse Laurent polynomials over the rationals"""
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from curve_data import Exponent
from errors import (
    DivisionByZeroCoordinateError,
    GKZError,
    NotInKernelError,
    SupportMismatchError,
)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


class LaurentPoly:
    """
    Laurent polynomial in variables indexed by a support (0, k1, ..., km, d).

    Values are treated as immutable. Zero coefficients are never stored and
    terms iterate in ascending lexicographic order of their exponent vectors.
    """

    __slots__ = ('support', '_terms')

    def __init__(self, support: Sequence[int], terms: Mapping[Monomial, Scalar] = None):
        self.support: Tuple[int, ...] = tuple(support)
        self._terms: Dict[Monomial, Fraction] = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(exponents)
            if len(exponents) != len(self.support):
                raise SupportMismatchError(
                    f"Exponent vector {exponents} does not match support {self.support}"
                )
            coefficient = Fraction(coefficient)
            if coefficient != 0:
                self._terms[exponents] = self._terms.get(exponents, Fraction(0)) + coefficient
                if self._terms[exponents] == 0:
                    del self._terms[exponents]

    @classmethod
    def zero(cls, support: Sequence[int]) -> 'LaurentPoly':
        return cls(support)

    @classmethod
    def constant(cls, support: Sequence[int], value: Scalar) -> 'LaurentPoly':
        return cls(support, {(0,) * len(support): value})

    @classmethod
    def monomial(cls, support: Sequence[int], exponents: Sequence[int], coefficient: Scalar = 1) -> 'LaurentPoly':
        return cls(support, {tuple(exponents): coefficient})

    @classmethod
    def variable(cls, support: Sequence[int], label: int, power: int = 1) -> 'LaurentPoly':
        exponents = [0] * len(support)
        exponents[_position(support, label)] = power
        return cls(support, {tuple(exponents): 1})

    def terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: 'LaurentPoly'):
        if self.support != other.support:
            raise SupportMismatchError(f"Supports differ: {self.support} vs {other.support}")

    def _coerce(self, other) -> Optional['LaurentPoly']:
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, Rational):
            return LaurentPoly.constant(self.support, other)
        return None

    def __add__(self, other) -> 'LaurentPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        combined = dict(self._terms)
        for exponents, coefficient in other._terms.items():
            combined[exponents] = combined.get(exponents, Fraction(0)) + coefficient
        return LaurentPoly(self.support, combined)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly(self.support, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> 'LaurentPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'LaurentPoly':
        return (-self) + other

    def __mul__(self, other) -> 'LaurentPoly':
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        product: Dict[Monomial, Fraction] = {}
        for left, a in self._terms.items():
            for right, b in other._terms.items():
                exponents = tuple(x + y for x, y in zip(left, right))
                product[exponents] = product.get(exponents, Fraction(0)) + a * b
        return LaurentPoly(self.support, product)

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> 'LaurentPoly':
        factor = Fraction(factor)
        return LaurentPoly(self.support, {e: c * factor for e, c in self._terms.items()})

    def __pow__(self, power: int) -> 'LaurentPoly':
        if power < 0:
            raise GKZError("Only nonnegative powers of a Laurent polynomial are supported")
        result = LaurentPoly.constant(self.support, 1)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.support == other.support and self._terms == other._terms
        if isinstance(other, Rational):
            return self == LaurentPoly.constant(self.support, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.support, tuple(self.terms())))

    def __repr__(self) -> str:
        return f"LaurentPoly({render(self)})"

    def __str__(self) -> str:
        return render(self)


def _position(support: Sequence[int], label: int) -> int:
    try:
        return tuple(support).index(label)
    except ValueError:
        raise SupportMismatchError(f"x{label} is not a variable of support {tuple(support)}") from None


def _falling(value: int, steps: int) -> int:
    result = 1
    for offset in range(steps):
        result *= value - offset
    return result


def derivative(p: LaurentPoly, label: int, order: int = 1) -> LaurentPoly:
    """order-th partial derivative in x_label"""
    position = _position(p.support, label)
    result: Dict[Monomial, Fraction] = {}
    for exponents, coefficient in p.terms():
        factor = _falling(exponents[position], order)
        if factor:
            shifted = list(exponents)
            shifted[position] -= order
            result[tuple(shifted)] = coefficient * factor
    return LaurentPoly(p.support, result)


def multi_derivative(p: LaurentPoly, u: Sequence[int]) -> LaurentPoly:
    """D_u p for u >= 0 indexed by the support."""
    if len(u) != len(p.support):
        raise SupportMismatchError(f"Derivative multi-index {tuple(u)} does not match support {p.support}")
    if any(order < 0 for order in u):
        raise GKZError(f"Derivative orders must be nonnegative, got {tuple(u)}")
    result: Dict[Monomial, Fraction] = {}
    for exponents, coefficient in p.terms():
        factor = 1
        for e, order in zip(exponents, u):
            factor *= _falling(e, order)
            if not factor:
                break
        if factor:
            result[tuple(e - order for e, order in zip(exponents, u))] = coefficient * factor
    return LaurentPoly(p.support, result)


def _bidegree_of(support: Sequence[int], exponents: Sequence[int]) -> Exponent:
    return Exponent(sum(exponents), sum(w * e for w, e in zip(support, exponents)))


def apply_box(p: LaurentPoly, v: Sequence[int]) -> LaurentPoly:
    """
    Box operator of a kernel vector v applied to p.

    Raises:
        NotInKernelError: A . v != 0
    """
    if len(v) != len(p.support):
        raise SupportMismatchError(f"Vector {tuple(v)} does not match support {p.support}")
    if _bidegree_of(p.support, v) != Exponent(0, 0):
        raise NotInKernelError(f"{tuple(v)} is not in the kernel lattice of support {p.support}")
    positive = [max(entry, 0) for entry in v]
    negative = [max(-entry, 0) for entry in v]
    return multi_derivative(p, positive) - multi_derivative(p, negative)


def apply_euler(p: LaurentPoly, alpha: Exponent) -> Tuple[LaurentPoly, LaurentPoly]:
    """Residuals (sum x_j d_j p - a1 p, sum j x_j d_j p - a2 p)."""
    first: Dict[Monomial, Fraction] = {}
    second: Dict[Monomial, Fraction] = {}
    for exponents, coefficient in p.terms():
        degree = _bidegree_of(p.support, exponents)
        first[exponents] = coefficient * (degree.a1 - alpha.a1)
        second[exponents] = coefficient * (degree.a2 - alpha.a2)
    return LaurentPoly(p.support, first), LaurentPoly(p.support, second)


def bidegree(p: LaurentPoly) -> Optional[Exponent]:
    """Common bidegree of all terms; None for zero or mixed polynomials."""
    degrees = {_bidegree_of(p.support, exponents) for exponents, _ in p.terms()}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def evaluate_exact(p: LaurentPoly, values: Mapping[int, Scalar]) -> Fraction:
    """
    Exact substitution x_label -> values[label].

    Raises:
        DivisionByZeroCoordinateError: a negative power hits a zero coordinate
    """
    missing = [label for label in p.support if label not in values]
    if missing:
        raise SupportMismatchError(f"No value supplied for x{missing[0]}")
    coords = [Fraction(values[label]) for label in p.support]
    total = Fraction(0)
    for exponents, coefficient in p.terms():
        term = coefficient
        for label, value, e in zip(p.support, coords, exponents):
            if e < 0 and value == 0:
                raise DivisionByZeroCoordinateError(f"x{label} = 0 appears with exponent {e}")
            term *= value ** e
        total += term
    return total


def substitute_dual(p: LaurentPoly) -> LaurentPoly:
    """Rename x_i -> x_(d-i); the result lives on the dual support."""
    d = p.support[-1]
    dual_support = tuple(d - label for label in reversed(p.support))
    return LaurentPoly(dual_support, {tuple(reversed(e)): c for e, c in p.terms()})


def to_json(p: LaurentPoly) -> Dict[str, object]:
    return {
        "support": list(p.support),
        "terms": [{"e": list(exponents), "c": str(coefficient)} for exponents, coefficient in p.terms()],
    }


def from_json(data: Mapping[str, object]) -> LaurentPoly:
    try:
        support = [int(label) for label in data['support']]
        terms = {tuple(int(e) for e in term['e']): Fraction(str(term['c'])) for term in data['terms']}
    except (KeyError, TypeError, ValueError) as e:
        raise GKZError(f"Malformed polynomial JSON: {e}") from e
    return LaurentPoly(support, terms)


def _render_monomial(support: Sequence[int], exponents: Sequence[int]) -> List[str]:
    factors = []
    for label, e in zip(support, exponents):
        if e == 1:
            factors.append(f"x{label}")
        elif e != 0:
            factors.append(f"x{label}^{e}")
    return factors


def render(p: LaurentPoly) -> str:
    """Human readable form, e.g. '-1/2 * x3^2 * x4^-1'."""
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for exponents, coefficient in p.terms():
        factors = _render_monomial(p.support, exponents)
        magnitude = abs(coefficient)
        if magnitude != 1 or not factors:
            factors.insert(0, str(magnitude))
        body = " * ".join(factors)
        if not pieces:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(f"- {body}" if coefficient < 0 else f"+ {body}")
    return " ".join(pieces)


def sum_polys(support: Sequence[int], polys: Iterable[LaurentPoly]) -> LaurentPoly:
    total = LaurentPoly.zero(support)
    for p in polys:
        total = total + p
    return total
