"""Monomial curve matrix, its kernel lattice and the duality transform"""
from dataclasses import dataclass
from functools import lru_cache, partial, reduce
from itertools import product
from math import gcd
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

from errors import (
    CurveError,
    EmptyGeneratorsError,
    GcdNotOneError,
    NotStrictlyIncreasingError,
)


LatticeVector = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Exponent:
    """Integer parameter alpha = (a1, a2) of the system"""
    a1: int
    a2: int

    def s(self, d: int) -> int:
        """s(alpha) = d*a1 - a2"""
        return d * self.a1 - self.a2

    def hat(self, d: int) -> 'Exponent':
        return Exponent(self.a1, d * self.a1 - self.a2)

    def __add__(self, other: 'Exponent') -> 'Exponent':
        return Exponent(self.a1 + other.a1, self.a2 + other.a2)

    def __sub__(self, other: 'Exponent') -> 'Exponent':
        return Exponent(self.a1 - other.a1, self.a2 - other.a2)

    def to_json(self) -> List[int]:
        return [self.a1, self.a2]

    @classmethod
    def from_json(cls, data: Sequence[int]) -> 'Exponent':
        if len(data) != 2 or not all(_is_int(value) for value in data):
            raise CurveError(f"Exponent must be a pair of integers, got {data!r}")
        return cls(int(data[0]), int(data[1]))

    def __str__(self) -> str:
        return f"({self.a1},{self.a2})"


@dataclass(frozen=True)
class CurveMatrix:
    """
    The 2 x (m+2) matrix with rows (1,...,1) and (0, k1, ..., km, d).

    Vectors of length m+2 are indexed by the support (0, k1, ..., km, d).
    Build instances through new_curve so the generators are validated.
    """
    ks: Tuple[int, ...]
    d: int

    @property
    def m(self) -> int:
        return len(self.ks)

    @property
    def support(self) -> Tuple[int, ...]:
        return (0,) + self.ks + (self.d,)

    @property
    def b_weights(self) -> Tuple[int, ...]:
        """Second row of the submatrix on columns 0, k1, ..., km"""
        return (0,) + self.ks

    @property
    def c_weights(self) -> Tuple[int, ...]:
        """Second row of the submatrix on columns k1, ..., km, d"""
        return self.ks + (self.d,)

    @property
    def is_normal(self) -> bool:
        return self.ks == tuple(range(1, self.d))

    def position(self, label: int) -> int:
        """Position of a support label inside length m+2 vectors."""
        try:
            return self.support.index(label)
        except ValueError:
            raise CurveError(f"{label} is not a column of curve {self}") from None

    def unit(self, label: int) -> LatticeVector:
        vector = [0] * (self.m + 2)
        vector[self.position(label)] = 1
        return tuple(vector)

    def apply(self, u: Sequence[int]) -> Exponent:
        """A . u"""
        if len(u) != self.m + 2:
            raise CurveError(f"Vector {tuple(u)} does not have {self.m + 2} entries")
        return Exponent(sum(u), sum(w * value for w, value in zip(self.support, u)))

    def annihilates(self, v: Sequence[int]) -> bool:
        return self.apply(v) == Exponent(0, 0)

    def to_json(self) -> Dict[str, object]:
        return {"k": list(self.ks), "d": self.d}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> 'CurveMatrix':
        if not isinstance(data, dict) or 'k' not in data or 'd' not in data:
            raise CurveError(f"Curve JSON must look like {{\"k\": [...], \"d\": n}}, got {data!r}")
        return new_curve(data['k'], data['d'])

    @classmethod
    def normal(cls, d: int) -> 'CurveMatrix':
        """The normal curve with every middle column 1..d-1."""
        return new_curve(list(range(1, d)), d)

    def __str__(self) -> str:
        return f"({list(self.ks)},{self.d})"


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def new_curve(ks: Sequence[int], d: int) -> CurveMatrix:
    """
    Validate generators and build the curve matrix.

    Args:
        ks: Middle exponents k1 < ... < km
        d: Degree of the curve

    Raises:
        EmptyGeneratorsError: ks is empty
        NotStrictlyIncreasingError: ks not strictly increasing inside (0, d)
        GcdNotOneError: gcd(k1, ..., km, d) > 1
    """
    if not _is_int(d) or not all(_is_int(k) for k in ks):
        raise CurveError(f"Curve generators must be integers, got ks={list(ks)!r}, d={d!r}")
    if len(ks) == 0:
        raise EmptyGeneratorsError("At least one middle exponent is required (m >= 1)")

    chain = [0] + list(ks) + [d]
    if any(left >= right for left, right in zip(chain, chain[1:])):
        raise NotStrictlyIncreasingError(f"Need 0 < k1 < ... < km < d, got ks={list(ks)}, d={d}")

    divisor = reduce(gcd, ks, d)
    if divisor != 1:
        raise GcdNotOneError(f"gcd{tuple(ks) + (d,)} = {divisor}, expected 1")

    return CurveMatrix(tuple(ks), d)


def reduce_by_gcd(ks: Sequence[int], d: int) -> CurveMatrix:
    """Divide all generators by their common divisor, then validate."""
    if len(ks) == 0:
        raise EmptyGeneratorsError("At least one middle exponent is required (m >= 1)")
    divisor = reduce(gcd, ks, d)
    return new_curve([k // divisor for k in ks], d // divisor)


def _sign_normalize(v: LatticeVector) -> LatticeVector:
    for entry in v:
        if entry != 0:
            return v if entry > 0 else tuple(-value for value in v)
    return v


def lattice_points(curve: CurveMatrix, bound: int) -> Iterator[LatticeVector]:
    """
    All v with A . v = 0 and max |v_i| <= bound, zero and both signs included.

    The middle entries are free; the end entries are then forced by the two rows.
    """
    return columns_lattice_points(curve.ks, curve.d, bound)


def columns_lattice_points(ks: Sequence[int], d: int, bound: int) -> Iterator[LatticeVector]:
    """lattice_points for the columns (0, ks..., d) without the generator checks of new_curve."""
    for middle in product(range(-bound, bound + 1), repeat=len(ks)):
        weighted = sum(k * w for k, w in zip(ks, middle))
        if weighted % d:
            continue
        last = -weighted // d
        first = -sum(middle) - last
        if abs(first) <= bound and abs(last) <= bound:
            yield (first,) + middle + (last,)


@lru_cache(maxsize=128)
def _kernel_vectors(curve: CurveMatrix, bound: int) -> Tuple[LatticeVector, ...]:
    found = {
        _sign_normalize(v)
        for v in lattice_points(curve, bound)
        if any(v)
    }
    return tuple(sorted(found))


def kernel_vectors(curve: CurveMatrix, bound: int) -> List[LatticeVector]:
    """
    Nonzero kernel vectors with max |v_i| <= bound, one per sign pair.

    Each representative has its first nonzero entry positive; output is sorted.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    return list(_kernel_vectors(curve, bound))


def omega(curve: CurveMatrix, k: int) -> LatticeVector:
    """(d-k) e_0 - d e_k + k e_d"""
    vector = [0] * (curve.m + 2)
    vector[0] = curve.d - k
    vector[curve.position(k)] = -curve.d
    vector[-1] = k
    return tuple(vector)


def dual_exponent(alpha: Exponent, d: int) -> Exponent:
    return alpha.hat(d)


def dualize(curve: CurveMatrix) -> Tuple[CurveMatrix, Callable[[Exponent], Exponent]]:
    """
    Dual curve under i -> d - i, with the exponent map alpha -> (a1, d*a1 - a2).

    Both maps are involutions.
    """
    dual_ks = [curve.d - k for k in reversed(curve.ks)]
    return new_curve(dual_ks, curve.d), partial(dual_exponent, d=curve.d)
