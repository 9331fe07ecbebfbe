"""Checks behind the verify command"""
import cmath
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from constants import (
    SCENARIO_TAGS,
    SUITE_FAST,
    SUITE_FULL,
    TAG_E0_ONLY,
    TAG_E_BOTH,
    TAG_ED_ONLY,
    TAG_IN_I,
    TAG_J,
)
from curve_data import CurveMatrix, Exponent, kernel_vectors
from errors import GKZError
from gamma_series import match_roots, series_roots, theta
from laurent import LaurentPoly, apply_box, apply_euler
from numeric import (
    Point,
    RootSet,
    derivative_identity_check,
    eval_chi,
    eval_laurent,
    find_roots,
    jet_matrix,
    numeric_rank,
    power_sum_numeric,
    psi_total_numeric,
    residue_total_numeric,
    calibrate_residue_constant,
    sample_point,
)
from report import CheckResult, check
from semigroup import classify, e_set, holonomic_rank, in_I
from settings import Settings, default_settings
from solutions import basis_descriptor, phi, power_sum, psi_0, psi_d, psi_total, total_residue_symbolic

logger = logging.getLogger(__name__)

# Order in which a1 values are scanned when looking for representative exponents
_A1_SCAN = (1, 0, 2, -1, -2)

SUITE_POINTS = {SUITE_FAST: 3, SUITE_FULL: 10}
SUITE_POWERS = {SUITE_FAST: 4, SUITE_FULL: 10}


def representative_exponents(curve: CurveMatrix) -> Dict[str, Exponent]:
    """First exponent found for each scenario; EBoth comes from E(A) when it is nonempty."""
    found: Dict[str, Exponent] = {}
    known = e_set(curve)
    if known:
        found[TAG_E_BOTH] = known[0]
    # Euler-Jacobi cone exponent for J
    found[TAG_J] = Exponent(-1, -1)
    for a1 in _A1_SCAN:
        for a2 in range(-2 * curve.d, 3 * curve.d + 1):
            if len(found) == len(SCENARIO_TAGS):
                return found
            alpha = Exponent(a1, a2)
            tag = classify(curve, alpha).tag
            found.setdefault(tag, alpha)
    return found


def rational_members(curve: CurveMatrix, alpha: Exponent, tag: str) -> List[Tuple[str, LaurentPoly]]:
    if tag == TAG_IN_I:
        return [("Phi", phi(curve, alpha))]
    members = []
    if tag in (TAG_E0_ONLY, TAG_E_BOTH):
        members.append(("Psi_0", psi_0(curve, alpha)))
    if tag in (TAG_ED_ONLY, TAG_E_BOTH):
        members.append(("Psi_d", psi_d(curve, alpha)))
    return members


def sweep_failures(p: LaurentPoly, alpha: Exponent, vectors: Sequence[Tuple[int, ...]]) -> int:
    """Number of Euler and box operators that do not annihilate p."""
    failures = sum(1 for residual in apply_euler(p, alpha) if not residual.is_zero())
    failures += sum(1 for v in vectors if not apply_box(p, v).is_zero())
    return failures


def box_sweep_vectors(curve: CurveMatrix, settings: Settings) -> List[Tuple[int, ...]]:
    return kernel_vectors(curve, int(settings.box_sweep_factor) * curve.d)


def _annihilation_checks(curve: CurveMatrix, representatives: Dict[str, Exponent],
                         settings: Settings) -> List[CheckResult]:
    vectors = box_sweep_vectors(curve, settings)
    results = []
    for tag, alpha in sorted(representatives.items()):
        for name, poly in rational_members(curve, alpha, tag):
            results.append(check(f"annihilation/{name}{alpha}", sweep_failures(poly, alpha, vectors), 0))

    control = negative_control_exponent(curve)
    if control is not None:
        failures = sweep_failures(psi_d(curve, control), control, vectors)
        results.append(check(f"annihilation/control{control}", 0 if failures else 1, 0,
                             "Psi_d of an exponent in I(A) must fail the sweep"))
    return results


def negative_control_exponent(curve: CurveMatrix) -> Optional[Exponent]:
    """An exponent in I(A) whose Psi_d is nonzero, if one exists with a1 <= 2."""
    for a1 in (1, 2):
        for a2 in range(0, curve.d * a1 + 1):
            alpha = Exponent(a1, a2)
            if in_I(curve, alpha) is not None and not psi_d(curve, alpha).is_zero():
                return alpha
    return None


def _relative(value: complex, expected: complex) -> float:
    return abs(value - expected) / max(1.0, abs(expected))


def _power_sum_checks(curve: CurveMatrix, rootsets: Sequence[RootSet], powers: int,
                      settings: Settings) -> List[CheckResult]:
    results = []
    for s in [value for value in range(-powers, powers + 1) if value != 0]:
        symbolic = power_sum(curve, s)
        residual = max(
            _relative(power_sum_numeric(roots, s), eval_laurent(symbolic, roots.point)) for roots in rootsets
        )
        results.append(check(f"power_sum/s={s:+d}", residual, settings.eps_check))
    return results


def _euler_jacobi_checks(curve: CurveMatrix, rootsets: Sequence[RootSet], settings: Settings) -> List[CheckResult]:
    results = []
    for b in range(1, curve.d + 3):
        expected = total_residue_symbolic(curve, b)
        residual = max(
            _relative(residue_total_numeric(roots, 1, b, settings), eval_laurent(expected, roots.point))
            for roots in rootsets
        )
        results.append(check(f"total_residue/b={b}", residual, settings.eps_check))
    return results


def _psi_sum_checks(curve: CurveMatrix, representatives: Dict[str, Exponent], rootsets: Sequence[RootSet],
                    settings: Settings) -> List[CheckResult]:
    results = []
    for tag, alpha in sorted(representatives.items()):
        if tag == TAG_IN_I:
            continue
        symbolic = psi_total(curve, alpha)
        residual = max(
            _relative(psi_total_numeric(curve, alpha, roots, settings), eval_laurent(symbolic, roots.point))
            for roots in rootsets
        )
        results.append(check(f"psi_sum{alpha}", residual, settings.eps_check))
    return results


def _derivative_checks(curve: CurveMatrix, rootsets: Sequence[RootSet], settings: Settings) -> List[CheckResult]:
    results = []
    for alpha in (Exponent(1, 1), Exponent(1, -1), Exponent(2, curve.d + 1)):
        residual = 0.0
        for roots in rootsets:
            for j in range(roots.d):
                for label in curve.support:
                    residual = max(residual, derivative_identity_check(curve, alpha, roots, j, label, settings))
        results.append(check(f"derivative{alpha}", residual, settings.eps_check))
    return results


def torus_residual(curve: CurveMatrix, alpha: Exponent, roots: RootSet, t: complex,
                   settings: Settings = None) -> float:
    """|chi(t*x) - t^a2 chi(x) + t^a2 log(t) Psi(x)|, relative to max(1, |chi(x)|)"""
    psi_value = 0j if in_I(curve, alpha) is not None else eval_laurent(psi_total(curve, alpha), roots.point)
    scale = t ** alpha.a2
    moved = eval_chi(curve, alpha, roots.rescaled(t), settings)
    here = eval_chi(curve, alpha, roots, settings)
    return abs(moved - scale * here + scale * cmath.log(t) * psi_value) / max(1.0, abs(here))


def _torus_checks(curve: CurveMatrix, representatives: Dict[str, Exponent], rootsets: Sequence[RootSet],
                  settings: Settings) -> List[CheckResult]:
    angles = 2.0 * np.pi * np.arange(1, 6) / 7.0
    results = []
    for tag in (TAG_J, TAG_ED_ONLY, TAG_E0_ONLY):
        alpha = representatives.get(tag)
        if alpha is None:
            continue
        residual = max(
            torus_residual(curve, alpha, roots, complex(np.exp(1j * angle)), settings)
            for roots in rootsets for angle in angles
        )
        results.append(check(f"chi_torus{alpha}", residual, 10 * settings.eps_check))
    return results


def _rank_checks(curve: CurveMatrix, representatives: Dict[str, Exponent], rootsets: Sequence[RootSet],
                 settings: Settings) -> List[CheckResult]:
    results = []
    chosen = rootsets[:int(settings.jet_points)]
    for tag, alpha in sorted(representatives.items()):
        descriptor = basis_descriptor(curve, alpha)
        rank = numeric_rank(jet_matrix(curve, descriptor, chosen, settings=settings), settings.rank_threshold)
        expected = holonomic_rank(curve, alpha)
        results.append(check(f"rank{alpha}", abs(rank - expected), 0, f"{tag}: numeric {rank}, expected {expected}"))
    return results


def series_test_point(curve: CurveMatrix, rng: np.random.Generator, middle: float = 0.05) -> Point:
    """|x_0| = |x_d| = 1 with random phases; middle coordinates of modulus `middle`."""
    phases = rng.uniform(0.0, 2.0 * np.pi, curve.m + 2)
    moduli = np.full(curve.m + 2, middle)
    moduli[0] = moduli[-1] = 1.0
    return Point.on(curve, moduli * np.exp(1j * phases))


def _gamma_checks(curve: CurveMatrix, rng: np.random.Generator, settings: Settings) -> List[CheckResult]:
    point = series_test_point(curve, rng)
    roots = find_roots(point, settings)
    series = series_roots(point, settings=settings)
    worst = max(match.distance for match in match_roots(series, roots.roots))
    results = [check("gamma/roots", worst, settings.series_tolerance)]
    for s in (1, 2, 3):
        value = -curve.d * theta(curve.d, point, s, settings=settings)
        expected = eval_laurent(power_sum(curve, s), point)
        results.append(check(f"gamma/theta_s={s}", _relative(value, expected), settings.series_tolerance))
    return results


def _residue_constant_checks(curve: CurveMatrix, rootsets: Sequence[RootSet], settings: Settings) -> List[CheckResult]:
    calibrated = calibrate_residue_constant(curve, 2, 2 * curve.d, rootsets[:3], settings)
    return [check(f"residue_constant/a=2,b={2 * curve.d}", calibrated.spread, calibrated.tolerance,
                  f"constant {calibrated.mean.real:.12g}{calibrated.mean.imag:+.12g}j")]


def run_suite(curve: CurveMatrix, seed: int = 0, suite: str = SUITE_FAST, settings: Settings = None,
              workers: int = 1) -> List[CheckResult]:
    """
    Run the verification suite; results are sorted by check name.

    The same seed and suite always produce the same points and the same results.
    """
    if suite not in SUITE_POINTS:
        raise GKZError(f"Unknown suite {suite!r}; expected one of {sorted(SUITE_POINTS)}")
    settings = settings or default_settings()
    rng = np.random.default_rng(seed)
    rootsets = [sample_point(curve, rng, settings)[1] for _ in range(SUITE_POINTS[suite])]
    representatives = representative_exponents(curve)
    logger.info("Representative exponents for %s: %s", curve,
                ", ".join(f"{tag}={alpha}" for tag, alpha in sorted(representatives.items())))

    tasks: List[Callable[[], List[CheckResult]]] = [
        lambda: _annihilation_checks(curve, representatives, settings),
        lambda: _power_sum_checks(curve, rootsets, SUITE_POWERS[suite], settings),
        lambda: _euler_jacobi_checks(curve, rootsets, settings),
        lambda: _psi_sum_checks(curve, representatives, rootsets, settings),
        lambda: _derivative_checks(curve, rootsets, settings),
        lambda: _torus_checks(curve, representatives, rootsets, settings),
    ]
    if suite == SUITE_FULL:
        series_rng = np.random.default_rng(seed + 1)
        tasks.append(lambda: _rank_checks(curve, representatives, rootsets, settings))
        tasks.append(lambda: _residue_constant_checks(curve, rootsets, settings))
        if curve.d <= 4:
            tasks.append(lambda: _gamma_checks(curve, series_rng, settings))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda task: task(), tasks))
    else:
        batches = [task() for task in tasks]
    return sorted((item for batch in batches for item in batch), key=lambda item: item.name)
