"""Numeric engine: roots of f(x;t), residues and the analytic solutions psi, tau, chi"""
import cmath
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from curve_data import CurveMatrix, Exponent
from errors import (
    DivisionByZeroCoordinateError,
    GKZError,
    NearSingularError,
    NotBinomialCurveError,
    NumericError,
    QuadratureError,
    RootFindingError,
    SameRootError,
    SingularPointError,
    SupportMismatchError,
)
from laurent import LaurentPoly, derivative, multi_derivative
from semigroup import in_I
from settings import Settings, default_settings
from solutions import (
    BasisDescriptor,
    BasisMember,
    Chi,
    LaurentPart,
    PsiRho,
    TauRho,
    phi,
    psi_0,
    psi_d,
    psi_total,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point:
    """Complex coefficients x_i of f(x;t) = sum x_i t^i, indexed by the support"""
    support: Tuple[int, ...]
    coords: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.support) != len(self.coords):
            raise SupportMismatchError(f"{len(self.coords)} coordinates for support {self.support}")
        if self.coords[0] == 0 or self.coords[-1] == 0:
            raise SingularPointError("x_0 and x_d must be nonzero")

    @classmethod
    def on(cls, curve: CurveMatrix, coords: Sequence[complex]) -> 'Point':
        return cls(curve.support, tuple(complex(value) for value in coords))

    @property
    def d(self) -> int:
        return self.support[-1]

    def coord(self, label: int) -> complex:
        return self.coords[self.support.index(label)]

    def dense_coefficients(self) -> np.ndarray:
        """Coefficients of f in ascending powers of t, zeros in the gaps."""
        dense = np.zeros(self.d + 1, dtype=complex)
        for label, value in zip(self.support, self.coords):
            dense[label] = value
        return dense

    def scaled(self, t: complex) -> 'Point':
        """The torus action (t * x)_i = t^i x_i."""
        return Point(self.support, tuple(t ** label * value for label, value in zip(self.support, self.coords)))

    def to_json(self) -> List[List[float]]:
        return [[value.real, value.imag] for value in self.coords]

    @classmethod
    def from_json(cls, curve: CurveMatrix, data: Sequence) -> 'Point':
        coords = []
        for entry in data:
            if isinstance(entry, (list, tuple)):
                if len(entry) != 2:
                    raise GKZError(f"Complex coordinate must be [re, im], got {entry!r}")
                coords.append(complex(entry[0], entry[1]))
            else:
                coords.append(complex(entry))
        if len(coords) != curve.m + 2:
            raise SupportMismatchError(f"Point needs {curve.m + 2} coordinates for curve {curve}")
        return cls.on(curve, coords)


def f_value(point: Point, t: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    return np.polyval(point.dense_coefficients()[::-1], t)


def f_prime(point: Point, t: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    return np.polyval(np.polyder(point.dense_coefficients()[::-1]), t)


@dataclass(frozen=True)
class RootSet:
    """The d roots of f(x;t) at a point, ordered by (argument, modulus), with log branches"""
    point: Point
    roots: Tuple[complex, ...]
    logs: Tuple[complex, ...]
    residual: float
    separation: float

    @property
    def d(self) -> int:
        return len(self.roots)

    def derivative_at(self, j: int) -> complex:
        return complex(f_prime(self.point, self.roots[j]))

    def rescaled(self, t: complex) -> 'RootSet':
        """
        Roots of t * x continued from x: rho -> rho/t, log rho -> log rho - log t.

        log t is the principal branch.
        """
        log_t = cmath.log(t)
        return RootSet(
            point=self.point.scaled(t),
            roots=tuple(rho / t for rho in self.roots),
            logs=tuple(log - log_t for log in self.logs),
            residual=self.residual,
            separation=self.separation / abs(t),
        )

    def to_json(self) -> Dict[str, object]:
        return {
            "roots": [[rho.real, rho.imag] for rho in self.roots],
            "residual": self.residual,
            "separation": self.separation,
        }


def _min_separation(roots: Sequence[complex]) -> float:
    if len(roots) < 2:
        return float('inf')
    values = np.asarray(roots)
    gaps = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(gaps, np.inf)
    return float(gaps.min())


def find_roots(point: Point, settings: Settings = None) -> RootSet:
    """
    All d roots of f(x;t) by companion-matrix eigenvalues plus Newton polishing.

    Raises:
        NearSingularError: two roots closer than delta_sep
        RootFindingError: residual above eps_root (relative to the size of f's terms)
    """
    settings = settings or default_settings()
    descending = point.dense_coefficients()[::-1]
    derivative_coeffs = np.polyder(descending)
    roots = np.roots(descending).astype(complex)

    for _ in range(int(settings.newton_polish_steps)):
        slope = np.polyval(derivative_coeffs, roots)
        safe = slope != 0
        roots[safe] = roots[safe] - np.polyval(descending, roots[safe]) / slope[safe]

    separation = _min_separation(roots)
    if separation < settings.delta_sep:
        raise NearSingularError(
            f"Roots at distance {separation:.3e} < {settings.delta_sep:.1e}; point is too close to the discriminant"
        )

    magnitudes = np.abs(point.dense_coefficients())
    scale = max(
        1.0,
        max(float(np.sum(magnitudes * np.abs(rho) ** np.arange(point.d + 1))) for rho in roots),
    )
    residual = float(np.max(np.abs(np.polyval(descending, roots))))
    if residual > settings.eps_root * scale:
        raise RootFindingError(f"Root residual {residual:.3e} exceeds {settings.eps_root:.1e} (scale {scale:.3e})")

    ordered = sorted((complex(rho) for rho in roots), key=lambda rho: (round(cmath.phase(rho), 12), abs(rho)))
    return RootSet(
        point=point,
        roots=tuple(ordered),
        logs=tuple(cmath.log(rho) for rho in ordered),
        residual=residual,
        separation=separation,
    )


def discriminant_m1(curve: CurveMatrix, point: Point) -> complex:
    """d^d x_0^(d-k) x_d^k + (-1)^(d-1) k^k (d-k)^(d-k) x_k^d, up to powers of x_0 and x_d."""
    if curve.m != 1:
        raise NotBinomialCurveError(f"Closed-form discriminant needs m = 1, curve {curve} has m = {curve.m}")
    d, k = curve.d, curve.ks[0]
    x0, xk, xd = point.coords
    return d ** d * x0 ** (d - k) * xd ** k + (-1) ** (d - 1) * k ** k * (d - k) ** (d - k) * xk ** d


def eval_laurent(p: LaurentPoly, point: Point) -> complex:
    """
    Evaluate an exact polynomial at a complex point.

    Raises:
        DivisionByZeroCoordinateError: a negative power of a zero coordinate
    """
    if p.support != point.support:
        raise SupportMismatchError(f"Polynomial support {p.support} differs from point support {point.support}")
    total = 0j
    for exponents, coefficient in p.terms():
        term = complex(coefficient)
        for label, value, e in zip(point.support, point.coords, exponents):
            if e == 0:
                continue
            if value == 0:
                if e < 0:
                    raise DivisionByZeroCoordinateError(f"x{label} = 0 appears with exponent {e}")
                term = 0j
                break
            term *= value ** e
        total += term
    return total


def power_sum_numeric(roots: RootSet, s: int) -> complex:
    return complex(sum(rho ** s for rho in roots.roots))


def root_derivative(roots: RootSet, j: int, label: int) -> complex:
    """d rho_j / d x_label = -rho^label / f'(rho)"""
    rho = roots.roots[j]
    return -rho ** label / roots.derivative_at(j)


def _contour_radius(roots: RootSet, j: int) -> float:
    rho = roots.roots[j]
    others = [abs(rho - other) for index, other in enumerate(roots.roots) if index != j]
    nearest = min(others) if others else abs(rho)
    return 0.5 * min(nearest, abs(rho))


def local_residue(roots: RootSet, j: int, power: int, order: int, log_weight: bool = False,
                  log_offset: complex = 0.0, settings: Settings = None) -> complex:
    """
    Res_{t = rho_j} of t^power * w(t) / f^order dt with w = log t + log_offset or w = 1.

    Simple poles use rho^power w(rho) / f'(rho); higher orders use the trapezoidal
    rule on a circle around rho_j, doubling nodes until two estimates agree.

    Raises:
        QuadratureError: quad_max_nodes reached without agreement
    """
    settings = settings or default_settings()
    rho = roots.roots[j]
    log_rho = roots.logs[j]

    if order == 1:
        weight = log_rho + log_offset if log_weight else 1.0
        return rho ** power * weight / roots.derivative_at(j)

    radius = _contour_radius(roots, j)
    descending = roots.point.dense_coefficients()[::-1]

    def estimate(nodes: int) -> complex:
        angles = 2.0 * np.pi * np.arange(nodes) / nodes
        turns = np.exp(1j * angles)
        z = rho + radius * turns
        values = z ** power / np.polyval(descending, z) ** order
        if log_weight:
            values = values * (log_rho + np.log(z / rho) + log_offset)
        return complex(radius * np.sum(values * turns) / nodes)

    nodes = int(settings.quad_nodes)
    previous = estimate(nodes)
    while nodes < settings.quad_max_nodes:
        nodes *= 2
        current = estimate(nodes)
        if abs(current - previous) <= settings.eps_check * max(1.0, abs(current)):
            logger.debug("Residue at root %d (order %d) converged with %d nodes", j, order, nodes)
            return current
        previous = current
    raise QuadratureError(
        f"Contour quadrature at root {j} did not converge within {settings.quad_max_nodes} nodes"
    )


def residue_total_numeric(roots: RootSet, a: int, b: int, settings: Settings = None,
                          workers: int = 1) -> complex:
    """Sum over all roots of Res t^b / f^a dt/t."""
    if a < 1:
        raise GKZError(f"Residue order a must be >= 1, got {a}")

    def one(j: int) -> complex:
        return local_residue(roots, j, b - 1, a, settings=settings)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(roots.d)))
    else:
        parts = [one(j) for j in range(roots.d)]
    return complex(sum(parts))


@lru_cache(maxsize=4096)
def _phi_cached(curve: CurveMatrix, alpha: Exponent) -> LaurentPoly:
    return phi(curve, alpha)


def _psi_rho_nonnegative(curve: CurveMatrix, alpha: Exponent, roots: RootSet, j: int) -> complex:
    rho = roots.roots[j]
    point = roots.point
    total = 0j
    for i in range(0, curve.d * alpha.a1 + 1):
        if i == alpha.a2:
            continue
        coefficient = _phi_cached(curve, Exponent(alpha.a1, i))
        if coefficient:
            total += eval_laurent(coefficient, point) * rho ** (i - alpha.a2) / (i - alpha.a2)
    logarithmic = _phi_cached(curve, alpha)
    if logarithmic:
        total += eval_laurent(logarithmic, point) * roots.logs[j]
    return total


def eval_psi_rho(curve: CurveMatrix, alpha: Exponent, roots: RootSet, j: int,
                 settings: Settings = None) -> complex:
    """
    psi_rho_j(alpha) at the point of the root set.

    For a1 >= 0 this is the finite sum over Phi((a1, i)) rho^(i-a2)/(i-a2) plus
    Phi(alpha) log rho. For a1 = -n < 0 it is (-1)^n (n-1)! Res t^(-a2-1)/f^n.
    """
    if alpha.a1 >= 0:
        return _psi_rho_nonnegative(curve, alpha, roots, j)
    n = -alpha.a1
    return (-1) ** n * factorial(n - 1) * local_residue(roots, j, -alpha.a2 - 1, n, settings=settings)


def psi_rho_partial(curve: CurveMatrix, alpha: Exponent, roots: RootSet, j: int, label: int) -> complex:
    """Analytic d psi_rho(alpha) / d x_label for a1 > 0, using the closed-form root derivative."""
    if alpha.a1 <= 0:
        raise GKZError(f"Analytic partials need a1 > 0, got {alpha}")
    rho = roots.roots[j]
    point = roots.point
    d_rho = root_derivative(roots, j, label)
    total = 0j
    for i in range(0, curve.d * alpha.a1 + 1):
        coefficient = _phi_cached(curve, Exponent(alpha.a1, i))
        if not coefficient:
            continue
        value = eval_laurent(coefficient, point)
        slope = eval_laurent(derivative(coefficient, label), point)
        if i == alpha.a2:
            total += slope * roots.logs[j] + value * d_rho / rho
        else:
            shift = i - alpha.a2
            total += slope * rho ** shift / shift + value * rho ** (shift - 1) * d_rho
    return total


def derivative_identity_check(curve: CurveMatrix, alpha: Exponent, roots: RootSet, j: int, label: int,
                              settings: Settings = None) -> float:
    """|d psi_rho(alpha)/d x_label - psi_rho(alpha - A e_label)|"""
    shifted = alpha - curve.apply(curve.unit(label))
    analytic = psi_rho_partial(curve, alpha, roots, j, label)
    return abs(analytic - eval_psi_rho(curve, shifted, roots, j, settings))


def eval_tau(curve: CurveMatrix, alpha: Exponent, roots: RootSet, j: int, j_hat: int,
             settings: Settings = None) -> complex:
    """
    tau_rho_j(alpha) = psi_j(alpha) - psi_jhat(alpha), i.e. the polynomial part
    difference plus Phi(alpha) log(rho_j / rho_jhat) on the chosen branches.

    Raises:
        SameRootError: j == j_hat
    """
    if j == j_hat:
        raise SameRootError(f"tau needs two different roots, got {j} twice")
    if in_I(curve, alpha) is None:
        raise GKZError(f"tau is defined for exponents in I(A); {alpha} is not")
    return eval_psi_rho(curve, alpha, roots, j, settings) - eval_psi_rho(curve, alpha, roots, j_hat, settings)


def eval_chi(curve: CurveMatrix, alpha: Exponent, roots: RootSet, settings: Settings = None) -> complex:
    """
    chi(alpha) = sum_j psi_j(alpha) log rho_j for a1 >= 0.

    For a1 = -n < 0, chi(alpha) = D_u chi((0,-s)) with u = n e_0 (s = -a2) when
    a2 != 0, and u = (n-1) e_0 + e_k1 (s = -k1) when a2 = 0. Each root contributes
    (-1)^n (n-1)! Res t^(s-1+b2) (log t + 1/s) / f^n where A u = (n, b2).
    """
    if alpha.a1 >= 0:
        return complex(sum(
            eval_psi_rho(curve, alpha, roots, j, settings) * roots.logs[j] for j in range(roots.d)
        ))
    n = -alpha.a1
    if alpha.a2 != 0:
        s, shift = -alpha.a2, 0
    else:
        s, shift = -curve.ks[0], curve.ks[0]
    total = 0j
    for j in range(roots.d):
        total += local_residue(roots, j, s - 1 + shift, n, log_weight=True, log_offset=1.0 / s,
                               settings=settings)
    return (-1) ** n * factorial(n - 1) * total


def multi_indices(size: int, order: int) -> List[Tuple[int, ...]]:
    """All u in N^size with |u| <= order, by total degree then lexicographically."""
    result = []
    for degree in range(order + 1):
        for chosen in combinations_with_replacement(range(size), degree):
            u = [0] * size
            for position in chosen:
                u[position] += 1
            result.append(tuple(u))
    return result


def member_jet(curve: CurveMatrix, member: BasisMember, roots: RootSet, u: Sequence[int],
               settings: Settings = None) -> complex:
    """D_u of one basis member at the point of the root set."""
    if isinstance(member, LaurentPart):
        return eval_laurent(multi_derivative(member.poly, u), roots.point)

    alpha = member.alpha - curve.apply(u)
    if isinstance(member, PsiRho):
        return eval_psi_rho(curve, alpha, roots, member.j, settings)
    if isinstance(member, TauRho):
        return (eval_psi_rho(curve, alpha, roots, member.j, settings)
                - eval_psi_rho(curve, alpha, roots, member.j_hat, settings))
    if isinstance(member, Chi):
        return eval_chi(curve, alpha, roots, settings)
    raise GKZError(f"Unknown basis member {member!r}")


def jet_matrix(curve: CurveMatrix, descriptor: BasisDescriptor, rootsets: Sequence[RootSet],
               order: int = None, settings: Settings = None) -> np.ndarray:
    """
    Rows D_u (|u| <= order) at every point, one column per basis member.

    Each row is divided by its largest entry so no single derivative dominates.
    """
    settings = settings or default_settings()
    order = int(settings.jet_order) if order is None else order
    members = descriptor.members
    rows = []
    for roots in rootsets:
        for u in multi_indices(curve.m + 2, order):
            rows.append([member_jet(curve, member, roots, u, settings) for member in members])
    matrix = np.array(rows, dtype=complex)
    peaks = np.max(np.abs(matrix), axis=1, keepdims=True)
    peaks[peaks == 0] = 1.0
    return matrix / peaks


def numeric_rank(values: np.ndarray, threshold: float = None) -> int:
    """Number of singular values above threshold * largest singular value."""
    if threshold is None:
        threshold = default_settings().rank_threshold
    matrix = np.asarray(values, dtype=complex)
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular / singular[0] > threshold))


def sample_point(curve: CurveMatrix, rng: np.random.Generator, settings: Settings = None,
                 positive_ends: bool = False) -> Tuple[Point, RootSet]:
    """
    Generic point: moduli uniform in [sample_min_modulus, sample_max_modulus],
    phases uniform. Points with nearly colliding roots or a root within
    branch_margin of the negative real axis are resampled.

    Args:
        positive_ends: draw x_0 and x_d positive real (stable fractional powers)
    """
    settings = settings or default_settings()
    size = curve.m + 2
    for attempt in range(int(settings.sample_attempts)):
        moduli = rng.uniform(settings.sample_min_modulus, settings.sample_max_modulus, size)
        phases = rng.uniform(0.0, 2.0 * np.pi, size)
        if positive_ends:
            phases[0] = phases[-1] = 0.0
        point = Point.on(curve, moduli * np.exp(1j * phases))
        try:
            roots = find_roots(point, settings)
        except (NearSingularError, RootFindingError) as e:
            logger.debug("Resampling point (attempt %d): %s", attempt + 1, e)
            continue
        if any(np.pi - abs(cmath.phase(rho)) < settings.branch_margin for rho in roots.roots):
            logger.debug("Resampling point (attempt %d): root near the branch cut", attempt + 1)
            continue
        return point, roots
    raise NumericError(f"No generic point found for curve {curve} after {settings.sample_attempts} attempts")


@dataclass
class CalibratedConstant:
    """Ratio of the numeric total residue to its symbolic reference across points"""
    a: int
    b: int
    reference: str
    values: List[complex]
    mean: complex
    spread: float
    tolerance: float

    @property
    def consistent(self) -> bool:
        return self.spread <= self.tolerance

    def to_json(self) -> Dict[str, object]:
        return {
            "a": self.a,
            "b": self.b,
            "reference": self.reference,
            "status": "calibrated",
            "constant": [self.mean.real, self.mean.imag],
            "spread": self.spread,
            "tolerance": self.tolerance,
            "consistent": self.consistent,
        }


def calibrate_residue_constant(curve: CurveMatrix, a: int, b: int, rootsets: Sequence[RootSet],
                               settings: Settings = None) -> CalibratedConstant:
    """
    Empirical constant c with total residue = c * Psi_d((-a,-b)) (b > 0) or c * Psi_0((-a,-b)).

    Raises:
        GKZError: the symbolic reference vanishes identically
    """
    settings = settings or default_settings()
    alpha = Exponent(-a, -b)
    if b > 0:
        name, reference = "Psi_d", psi_d(curve, alpha)
    else:
        name, reference = "Psi_0", psi_0(curve, alpha)
    if reference.is_zero():
        raise GKZError(f"{name}({alpha}) vanishes identically; no constant to calibrate")

    ratios = []
    for roots in rootsets:
        expected = eval_laurent(reference, roots.point)
        ratios.append(residue_total_numeric(roots, a, b, settings) / expected)
    mean = complex(np.mean(ratios))
    spread = float(max(abs(value - mean) for value in ratios))
    tolerance = settings.eps_check * max(1.0, abs(mean)) * 100
    return CalibratedConstant(a, b, name, ratios, mean, spread, tolerance)


def euler_jacobi_cone(d: int, alpha: Exponent) -> bool:
    """d*a1 < a2 < 0"""
    return d * alpha.a1 < alpha.a2 < 0


def psi_total_numeric(curve: CurveMatrix, alpha: Exponent, roots: RootSet, settings: Settings = None) -> complex:
    return complex(sum(eval_psi_rho(curve, alpha, roots, j, settings) for j in range(roots.d)))


def psi_total_symbolic_value(curve: CurveMatrix, alpha: Exponent, point: Point) -> complex:
    return eval_laurent(psi_total(curve, alpha), point)
