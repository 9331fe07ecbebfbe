"""Truncated Gamma-series for the roots of the generic polynomial"""
import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from curve_data import columns_lattice_points
from errors import DivisionByZeroCoordinateError, GKZError, OutsideRegionWarning
from numeric import Point, f_value
from settings import Settings, default_settings

logger = logging.getLogger(__name__)


def gamma_coeff(u: Fraction, v: int) -> Fraction:
    """
    Coefficient of x^(u+v) in the bracket [x^u].

    1 if v = 0; u(u-1)...(u+v+1) if v < 0; 0 if u is a negative integer with
    u >= -v; 1/((u+1)...(u+v)) otherwise.
    """
    u = Fraction(u)
    if v == 0:
        return Fraction(1)
    if v < 0:
        result = Fraction(1)
        for offset in range(-v):
            result *= u - offset
        return result
    if u.denominator == 1 and u < 0 and u >= -v:
        return Fraction(0)
    result = Fraction(1)
    for offset in range(1, v + 1):
        result *= u + offset
    return 1 / result


@dataclass(frozen=True)
class Bracket:
    """
    [x_0^u_0 ... x_d^u_d] truncated to lattice vectors of norm <= truncation.

    Only the coordinates in `labels` move; the others are taken to be zero.
    """
    u: Tuple[Fraction, ...]
    truncation: int
    labels: Tuple[int, ...]
    terms: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    @property
    def d(self) -> int:
        return len(self.u) - 1

    def coefficients(self) -> Dict[Tuple[int, ...], Fraction]:
        return dict(self.terms)

    def evaluate(self, coords: Sequence[complex]) -> complex:
        """
        Sum of coefficient * x^(u+v) with principal-branch fractional powers.

        A zero coordinate contributes 1 when its exponent is 0 and kills the term otherwise.
        """
        exponents, weights = _bracket_arrays(self.u, self.truncation, self.labels)
        coords = np.asarray(coords, dtype=complex)
        if len(coords) != len(self.u):
            raise GKZError(f"Bracket in {len(self.u)} variables evaluated at {len(coords)} coordinates")
        frozen = [j for j in range(len(coords)) if j not in self.labels and coords[j] != 0]
        if frozen:
            raise GKZError(f"Bracket over labels {self.labels} needs x_j = 0 for j in {frozen}")
        zero = coords == 0
        keep = np.ones(len(weights), dtype=bool)
        if np.any(zero):
            on_zero = exponents[:, zero]
            if np.any(on_zero < 0):
                raise DivisionByZeroCoordinateError("Negative bracket exponent on a zero coordinate")
            keep = np.all(on_zero == 0, axis=1)
        logs = np.log(coords[~zero])
        powers = np.exp(exponents[keep][:, ~zero] @ logs)
        return complex(np.sum(weights[keep] * powers))


@lru_cache(maxsize=256)
def _bracket_arrays(u: Tuple[Fraction, ...], truncation: int,
                    labels: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
    series = bracket(u, truncation, labels)
    shifts = np.array([v for v, _ in series.terms], dtype=float).reshape(len(series.terms), len(u))
    exponents = shifts + np.array([float(value) for value in u])
    weights = np.array([float(c) for _, c in series.terms])
    return exponents, weights


def _active_labels(u: Sequence[Fraction], labels: Optional[Sequence[int]]) -> Tuple[int, ...]:
    d = len(u) - 1
    if labels is None:
        return tuple(range(d + 1))
    active = set(labels) | {0, d} | {j for j, value in enumerate(u) if value != 0}
    if not all(0 <= j <= d for j in active):
        raise GKZError(f"Bracket labels must lie in 0..{d}, got {sorted(active)}")
    return tuple(sorted(active))


def lattice_size(labels: Sequence[int], truncation: int) -> int:
    """Number of middle-coordinate boxes the bracket enumeration visits."""
    return (2 * truncation + 1) ** (len(labels) - 2)


@lru_cache(maxsize=256)
def bracket(u: Tuple[Fraction, ...], truncation: int, labels: Tuple[int, ...] = None) -> Bracket:
    """
    Bracket over the kernel lattice of the normal curve of degree len(u) - 1.

    With `labels`, shifts are restricted to those coordinates (plus every index where
    u is nonzero). A coordinate with u_j = 0 at x_j = 0 contributes only through
    v_j = 0, so this is exact for points supported on `labels`.
    """
    labels = _active_labels(u, labels)
    d = len(u) - 1
    middle = labels[1:-1]
    terms = []
    for compact in columns_lattice_points(middle, d, truncation):
        v = [0] * (d + 1)
        for label, entry in zip(labels, compact):
            v[label] = entry
        coefficient = Fraction(1)
        for ui, vi in zip(u, v):
            coefficient *= gamma_coeff(ui, vi)
            if coefficient == 0:
                break
        if coefficient != 0:
            terms.append((tuple(v), coefficient))
    terms.sort()
    logger.debug("Bracket %s over labels %s truncated at %d has %d terms", u, labels, truncation, len(terms))
    return Bracket(tuple(u), truncation, labels, tuple(terms))


def sigma_exponent(a: int, d: int) -> Tuple[Fraction, ...]:
    """The bracket exponent u behind sigma_a."""
    if not 1 <= a <= d:
        raise GKZError(f"sigma index must lie in 1..{d}, got {a}")
    u = [Fraction(0)] * (d + 1)
    if a == 1:
        u[0], u[d] = Fraction(1, d), Fraction(-1, d)
    else:
        u[a - 1] += 1
        u[0] += Fraction(a - d, d)
        u[d] += Fraction(-a, d)
    return tuple(u)


def sigma_bracket(a: int, d: int, truncation: int, support: Sequence[int] = None) -> Tuple[Fraction, Bracket]:
    """(scalar, bracket) with sigma_a = scalar * bracket; `support` restricts the shifts."""
    u = sigma_exponent(a, d)
    labels = None if support is None else tuple(support)
    scalar = Fraction(1) if a == 1 else Fraction(1, d)
    return scalar, bracket(u, truncation, labels)


def check_lattice_size(point: Point, truncation: int, settings: Settings):
    """
    Raises:
        GKZError: the bracket enumeration for this point would exceed gamma_max_lattice
    """
    limit = int(settings.gamma_max_lattice)
    worst = max(
        lattice_size(_active_labels(sigma_exponent(a, point.d), point.support), truncation)
        for a in range(1, point.d + 1)
    )
    if worst > limit:
        raise GKZError(
            f"Series truncation {truncation} on support {point.support} visits {worst} lattice boxes "
            f"(gamma_max_lattice = {limit}); lower the truncation"
        )


def in_region(point: Point, constant: float = None) -> bool:
    """|x_0|^(d-j) |x_d|^j > M |x_j|^d for every middle j (gaps count as zero)."""
    if constant is None:
        constant = default_settings().region_constant
    coords = point.dense_coefficients()
    d = point.d
    x0, xd = abs(coords[0]), abs(coords[d])
    return all(x0 ** (d - j) * xd ** j > constant * abs(coords[j]) ** d for j in range(1, d))


def _warn_outside(point: Point, settings: Settings):
    if not in_region(point, settings.region_constant):
        warnings.warn(
            f"Point lies outside the series region for M = {settings.region_constant}",
            OutsideRegionWarning,
            stacklevel=3,
        )


def sigma(a: int, point: Point, truncation: int = None, settings: Settings = None) -> complex:
    settings = settings or default_settings()
    truncation = int(settings.gamma_truncation) if truncation is None else truncation
    _warn_outside(point, settings)
    check_lattice_size(point, truncation, settings)
    scalar, series = sigma_bracket(a, point.d, truncation, point.support)
    return complex(scalar) * series.evaluate(point.dense_coefficients())


def _sigmas(point: Point, truncation: int) -> np.ndarray:
    values = []
    for a in range(1, point.d + 1):
        scalar, series = sigma_bracket(a, point.d, truncation, point.support)
        values.append(complex(scalar) * series.evaluate(point.dense_coefficients()))
    return np.array(values)


def root_units(d: int) -> np.ndarray:
    """xi_i = exp(i pi (2i - 1) / d), the d-th roots of -1"""
    return np.exp(1j * np.pi * (2 * np.arange(1, d + 1) - 1) / d)


def series_roots(point: Point, truncation: int = None, settings: Settings = None) -> List[complex]:
    """rho_i = sum_a xi_i^a sigma_a for i = 1..d"""
    settings = settings or default_settings()
    truncation = int(settings.gamma_truncation) if truncation is None else truncation
    _warn_outside(point, settings)
    check_lattice_size(point, truncation, settings)
    sigmas = _sigmas(point, truncation)
    powers = np.arange(1, point.d + 1)
    return [complex(np.sum(xi ** powers * sigmas)) for xi in root_units(point.d)]


def root_series(i: int, point: Point, truncation: int = None, settings: Settings = None) -> complex:
    """The i-th series root, i in 1..d."""
    if not 1 <= i <= point.d:
        raise GKZError(f"Root index must lie in 1..{point.d}, got {i}")
    return series_roots(point, truncation, settings)[i - 1]


def theta(b: int, point: Point, s: int, truncation: int = None, settings: Settings = None) -> complex:
    """
    theta_b = sum over a_1 + ... + a_s = b + l*d of (-1)^l prod sigma_(a_j).

    Computed as the coefficient of xi^b in (sum_a sigma_a xi^a)^s modulo xi^d = -1,
    so that sum_i rho_i^s = -d theta_d.
    """
    settings = settings or default_settings()
    truncation = int(settings.gamma_truncation) if truncation is None else truncation
    d = point.d
    if not 1 <= b <= d:
        raise GKZError(f"theta index must lie in 1..{d}, got {b}")
    if s < 1:
        raise GKZError(f"theta needs a positive power, got {s}")
    _warn_outside(point, settings)
    check_lattice_size(point, truncation, settings)

    base = np.zeros(d + 1, dtype=complex)
    base[1:] = _sigmas(point, truncation)
    power = np.ones(1, dtype=complex)
    for _ in range(s):
        power = np.convolve(power, base)

    reduced = np.zeros(d + 1, dtype=complex)
    for exponent, value in enumerate(power):
        if exponent == 0 or value == 0:
            continue
        wraps = (exponent - 1) // d
        reduced[exponent - wraps * d] += (-1) ** wraps * value
    return complex(reduced[b])


def series_residual(point: Point, roots: Sequence[complex]) -> float:
    return float(np.max(np.abs(f_value(point, np.asarray(roots, dtype=complex)))))


def truncation_profile(point: Point, truncations: Sequence[int] = (2, 4, 8),
                       settings: Settings = None) -> List[Tuple[int, float]]:
    """Residual max |f(x; rho_i)| of the series roots for each truncation."""
    profile = []
    for truncation in truncations:
        residual = series_residual(point, series_roots(point, truncation, settings))
        profile.append((truncation, residual))
    logger.info("Series truncation profile: %s",
                ", ".join(f"N={n}: {residual:.2e}" for n, residual in profile))
    return profile


@dataclass(frozen=True)
class RootMatch:
    series: complex
    iterated: complex
    distance: float

    def to_json(self) -> Dict[str, object]:
        return {
            "series": [self.series.real, self.series.imag],
            "iterated": [self.iterated.real, self.iterated.imag],
            "difference": self.distance,
        }


def match_roots(series: Sequence[complex], iterated: Sequence[complex]) -> List[RootMatch]:
    """Greedy pairing: repeatedly take the closest remaining (series, iterated) pair."""
    if len(series) != len(iterated):
        raise GKZError(f"Cannot match {len(series)} series roots with {len(iterated)} roots")
    distances = np.abs(np.subtract.outer(np.asarray(series), np.asarray(iterated)))
    free_rows = set(range(len(series)))
    free_cols = set(range(len(iterated)))
    matches = []
    while free_rows:
        row, col = min(
            ((r, c) for r in free_rows for c in free_cols),
            key=lambda pair: (distances[pair], pair),
        )
        matches.append(RootMatch(complex(series[row]), complex(iterated[col]), float(distances[row, col])))
        free_rows.remove(row)
        free_cols.remove(col)
    return matches
