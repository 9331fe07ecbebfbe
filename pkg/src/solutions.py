"""Rational solutions of the system: Phi, Psi_0, Psi_d, power sums and basis descriptors"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple, Union

from constants import (
    TAG_E0_ONLY,
    TAG_E_BOTH,
    TAG_ED_ONLY,
    TAG_IN_I,
    TAG_J,
)
from curve_data import CurveMatrix, Exponent
from errors import ExponentInIError, GKZError, ZeroPowerError
from laurent import LaurentPoly, render, sum_polys, to_json as poly_to_json
from semigroup import classify, compositions, in_I

Monomial = Tuple[int, ...]


@lru_cache(maxsize=4096)
def _phi_terms(weights: Tuple[int, ...], n: int, target: int) -> Tuple[Tuple[Monomial, Fraction], ...]:
    """(u, 1/u!) for every u with sum(u) = n and weights . u = target"""
    terms = []
    for counts in compositions(weights, n, target):
        denominator = 1
        for count in counts:
            denominator *= factorial(count)
        terms.append((counts, Fraction(1, denominator)))
    return tuple(terms)


def phi(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """Sum of x^u / u! over u in N^(m+2) with A . u = alpha; zero off I(A)."""
    return LaurentPoly(curve.support, dict(_phi_terms(curve.support, alpha.a1, alpha.a2)))


def psi_d(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """
    Laurent solution with denominators x_d^r.

    sum_r (-1)^r (r-1)! Phi^B(alpha + r(1,d)) / x_d^r, where r stops at
    (km*a1 - a2)/(d - km) since Phi^B vanishes beyond it.
    """
    d, km = curve.d, curve.ks[-1]
    top = (km * alpha.a1 - alpha.a2) // (d - km)
    terms: Dict[Monomial, Fraction] = {}
    for r in range(1, top + 1):
        weight = (-1) ** r * factorial(r - 1)
        for counts, coefficient in _phi_terms(curve.b_weights, alpha.a1 + r, alpha.a2 + r * d):
            terms[counts + (-r,)] = weight * coefficient
    return LaurentPoly(curve.support, terms)


def psi_0(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """
    Laurent solution with denominators x_0^r.

    sum_r (-1)^r (r-1)! Phi^C(alpha + r(1,0)) / x_0^r for 1 <= r <= a2/k1 - a1.
    """
    top = alpha.a2 // curve.ks[0] - alpha.a1
    terms: Dict[Monomial, Fraction] = {}
    for r in range(1, top + 1):
        weight = (-1) ** r * factorial(r - 1)
        for counts, coefficient in _phi_terms(curve.c_weights, alpha.a1 + r, alpha.a2):
            terms[(-r,) + counts] = weight * coefficient
    return LaurentPoly(curve.support, terms)


def psi_total(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """
    Psi_d - Psi_0, the sum of all psi_rho.

    Psi_0 enters with a minus sign, matching p_s = |s| Psi_0((0,-s)) for s < 0.

    Raises:
        ExponentInIError: alpha lies in I(A), where the sum is not rational
    """
    if in_I(curve, alpha) is not None:
        raise ExponentInIError(f"{alpha} lies in I(A) for curve {curve}")
    return psi_d(curve, alpha) - psi_0(curve, alpha)


def power_sum(curve: CurveMatrix, s: int) -> LaurentPoly:
    """
    rho_1^s + ... + rho_d^s as a Laurent polynomial.

    s > 0 gives s * Psi_d((0,-s)); s < 0 gives |s| * Psi_0((0,-s)), the image of
    the positive case under the root inversion t -> 1/t.
    """
    if s == 0:
        raise ZeroPowerError("Power sums are defined here for s != 0 only")
    if s > 0:
        return psi_d(curve, Exponent(0, -s)).scale(s)
    return psi_0(curve, Exponent(0, -s)).scale(-s)


def total_residue_symbolic(curve: CurveMatrix, b: int) -> LaurentPoly:
    """Sum over roots of Res t^b/f dt/t: zero for b < d, else -Psi_d((-1,-b))."""
    if b < 1:
        raise GKZError(f"b must be positive, got {b}")
    if b < curve.d:
        return LaurentPoly.zero(curve.support)
    return -psi_d(curve, Exponent(-1, -b))


def newton_power_sum(d: int, s: int) -> LaurentPoly:
    """
    Power sum on the normal curve of degree d from Newton's identities.

    Uses e_j = (-1)^j x_(d-j)/x_d for s > 0 and the reversed polynomial,
    e_j = (-1)^j x_j/x_0, for s < 0.
    """
    if s == 0:
        raise ZeroPowerError("Power sums are defined here for s != 0 only")
    support = tuple(range(d + 1))
    if s > 0:
        elementary = [
            LaurentPoly.variable(support, d - j) * LaurentPoly.variable(support, d, -1) * (-1) ** j
            for j in range(1, d + 1)
        ]
    else:
        elementary = [
            LaurentPoly.variable(support, j) * LaurentPoly.variable(support, 0, -1) * (-1) ** j
            for j in range(1, d + 1)
        ]

    def e(i: int) -> LaurentPoly:
        return elementary[i - 1] if i <= d else LaurentPoly.zero(support)

    sums: List[LaurentPoly] = []
    for k in range(1, abs(s) + 1):
        p_k = e(k) * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            p_k = p_k + e(i) * sums[k - i - 1] * (-1) ** (i - 1)
        sums.append(p_k)
    return sums[-1]


def _check_convolution_input(curve: CurveMatrix, alpha: Exponent):
    if alpha.a1 <= 0:
        raise GKZError(f"Convolution identities need a1 > 0, got {alpha}")
    if in_I(curve, alpha) is not None:
        raise ExponentInIError(f"{alpha} lies in I(A) for curve {curve}")


def convolution_psi_0(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """sum_{0 <= i < a2} Phi((a1, i)) * Psi_0((0, a2 - i))"""
    _check_convolution_input(curve, alpha)
    top = min(alpha.a2 - 1, curve.d * alpha.a1)
    return sum_polys(curve.support, (
        phi(curve, Exponent(alpha.a1, i)) * psi_0(curve, Exponent(0, alpha.a2 - i))
        for i in range(0, top + 1)
    ))


def convolution_psi_d(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    """sum_{a2 < i <= d*a1} Phi((a1, i)) * Psi_d((0, a2 - i))"""
    _check_convolution_input(curve, alpha)
    bottom = max(alpha.a2 + 1, 0)
    return sum_polys(curve.support, (
        phi(curve, Exponent(alpha.a1, i)) * psi_d(curve, Exponent(0, alpha.a2 - i))
        for i in range(bottom, curve.d * alpha.a1 + 1)
    ))


@dataclass(frozen=True)
class LaurentPart:
    """Rational member of a basis, stored symbolically"""
    name: str
    poly: LaurentPoly

    def to_json(self) -> Dict[str, object]:
        return {"kind": "laurent", "name": self.name, "poly": poly_to_json(self.poly), "text": render(self.poly)}


@dataclass(frozen=True)
class PsiRho:
    alpha: Exponent
    j: int

    @property
    def name(self) -> str:
        return f"psi_{self.j + 1}"

    def to_json(self) -> Dict[str, object]:
        return {"kind": "psi", "name": self.name, "alpha": self.alpha.to_json(), "root": self.j}


@dataclass(frozen=True)
class TauRho:
    alpha: Exponent
    j: int
    j_hat: int

    @property
    def name(self) -> str:
        return f"tau_{self.j + 1}"

    def to_json(self) -> Dict[str, object]:
        return {"kind": "tau", "name": self.name, "alpha": self.alpha.to_json(), "root": self.j,
                "distinguished_root": self.j_hat}


@dataclass(frozen=True)
class Chi:
    alpha: Exponent

    @property
    def name(self) -> str:
        return "chi"

    def to_json(self) -> Dict[str, object]:
        return {"kind": "chi", "name": self.name, "alpha": self.alpha.to_json()}


BasisMember = Union[LaurentPart, PsiRho, TauRho, Chi]

# Roots are ordered by (argument, modulus), so index 0 is the root of smallest argument
DISTINGUISHED_ROOT = 0


@dataclass
class BasisDescriptor:
    curve: CurveMatrix
    alpha: Exponent
    scenario: str
    symbolic: List[LaurentPart] = field(default_factory=list)
    analytic: List[Union[PsiRho, TauRho, Chi]] = field(default_factory=list)

    @property
    def members(self) -> List[BasisMember]:
        return list(self.symbolic) + list(self.analytic)

    def __len__(self) -> int:
        return len(self.symbolic) + len(self.analytic)

    def to_json(self) -> Dict[str, object]:
        return {
            "curve": self.curve.to_json(),
            "alpha": self.alpha.to_json(),
            "scenario": self.scenario,
            "count": len(self),
            "members": [member.to_json() for member in self.members],
        }


def basis_descriptor(curve: CurveMatrix, alpha: Exponent) -> BasisDescriptor:
    """Names a basis of local solutions for each of the four scenarios."""
    d = curve.d
    tag = classify(curve, alpha).tag
    descriptor = BasisDescriptor(curve, alpha, tag)

    if tag == TAG_IN_I:
        descriptor.symbolic.append(LaurentPart("Phi", phi(curve, alpha)))
        descriptor.analytic.extend(
            TauRho(alpha, j, DISTINGUISHED_ROOT) for j in range(d) if j != DISTINGUISHED_ROOT
        )
    elif tag == TAG_E_BOTH:
        descriptor.analytic.extend(PsiRho(alpha, j) for j in range(d))
        descriptor.symbolic.append(LaurentPart("Psi_0", psi_0(curve, alpha)))
    elif tag in (TAG_E0_ONLY, TAG_ED_ONLY):
        descriptor.analytic.extend(PsiRho(alpha, j) for j in range(d))
    elif tag == TAG_J:
        descriptor.analytic.extend(PsiRho(alpha, j) for j in range(d - 1))
        descriptor.analytic.append(Chi(alpha))
    return descriptor
