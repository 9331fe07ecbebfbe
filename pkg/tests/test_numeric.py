"""Test root finding, residues and the analytic solutions at generic points"""
import cmath

import numpy as np
import pytest
import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from curve_data import CurveMatrix, Exponent, new_curve
from errors import (
    DivisionByZeroCoordinateError,
    GKZError,
    NearSingularError,
    NotBinomialCurveError,
    SameRootError,
    SingularPointError,
)
from laurent import LaurentPoly
from numeric import (
    Point,
    calibrate_residue_constant,
    derivative_identity_check,
    discriminant_m1,
    eval_chi,
    eval_laurent,
    eval_psi_rho,
    eval_tau,
    find_roots,
    jet_matrix,
    multi_indices,
    numeric_rank,
    power_sum_numeric,
    psi_total_numeric,
    residue_total_numeric,
    root_derivative,
    sample_point,
)
from settings import Settings
from solutions import (
    BasisDescriptor,
    PsiRho,
    basis_descriptor,
    power_sum,
    psi_0,
    psi_d,
    psi_total,
    total_residue_symbolic,
)
from verification import torus_residual

EPS = 1e-8


@pytest.fixture
def settings():
    return Settings(settings_data={}, tolerance_scale=1)


@pytest.fixture
def running():
    return new_curve([1, 3], 4)


@pytest.fixture
def conic():
    return new_curve([1], 2)


@pytest.fixture
def running_roots(running, settings):
    rng = np.random.default_rng(11)
    return [sample_point(running, rng, settings)[1] for _ in range(3)]


def relative(value, expected):
    return abs(value - expected) / max(1.0, abs(expected))


class TestPoint:
    """Point construction and the torus action"""

    def test_singular_coordinates_rejected(self, conic):
        with pytest.raises(SingularPointError):
            Point.on(conic, [0, 1, 1])
        with pytest.raises(SingularPointError):
            Point.on(conic, [1, 1, 0])

    def test_from_json(self, running):
        point = Point.from_json(running, [[1, 0], 2, [0, 1], 3])
        assert point.coord(3) == 1j
        assert point.to_json()[1] == [2.0, 0.0]

    def test_dense_coefficients_fill_gaps(self, running):
        point = Point.on(running, [1, 2, 3, 4])
        assert list(point.dense_coefficients()) == [1, 2, 0, 3, 4]

    def test_scaled(self, running):
        point = Point.on(running, [1, 1, 1, 1]).scaled(2)
        assert point.coords == (1, 2, 8, 16)


class TestFindRoots:
    """Companion eigenvalues with Newton polishing"""

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_roots_of_unity(self, d, settings):
        curve = CurveMatrix.normal(d)
        coords = [0] * (d + 1)
        coords[0], coords[d] = -1, 1
        roots = find_roots(Point.on(curve, coords), settings)

        assert roots.d == d
        for rho in roots.roots:
            assert abs(rho ** d - 1) < 1e-12
        assert roots.separation == pytest.approx(2 * np.sin(np.pi / d))

    def test_ordering_by_argument(self, running_roots):
        for roots in running_roots:
            phases = [round(cmath.phase(rho), 12) for rho in roots.roots]
            assert phases == sorted(phases)

    def test_residual_and_vieta(self, settings):
        curve = CurveMatrix.normal(5)
        rng = np.random.default_rng(3)
        for _ in range(5):
            point, roots = sample_point(curve, rng, settings)
            assert roots.residual < 1e-10
            assert abs(sum(roots.roots) + point.coord(4) / point.coord(5)) < 1e-10

    def test_double_root(self, conic, settings):
        with pytest.raises(NearSingularError):
            find_roots(Point.on(conic, [1, 2, 1]), settings)

    def test_rescaled_roots(self, running_roots):
        roots = running_roots[0]
        t = cmath.exp(0.7j) * 1.3
        moved = roots.rescaled(t)
        for rho in moved.roots:
            assert abs(np.polyval(moved.point.dense_coefficients()[::-1], rho)) < 1e-9


class TestDiscriminant:
    def test_values(self, conic):
        assert discriminant_m1(conic, Point.on(conic, [1, 0, 1])) == 4
        assert discriminant_m1(conic, Point.on(conic, [1, 2, 1])) == 0

    def test_binomial_only(self, running):
        with pytest.raises(NotBinomialCurveError):
            discriminant_m1(running, Point.on(running, [1, 1, 1, 1]))


class TestEvalLaurent:
    def test_examples(self, running):
        point = Point.on(running, [2, 2, 3, 1])
        assert eval_laurent(LaurentPoly.monomial(running.support, (1, 0, 1, 0)), point) == 6
        minus_half = LaurentPoly.monomial(running.support, (-1, 2, 0, 0), -0.5)
        assert eval_laurent(minus_half, Point.on(running, [1, 2, 5, 1])) == -2
        assert eval_laurent(LaurentPoly.zero(running.support), point) == 0

    def test_zero_middle_coordinate(self, running):
        point = Point.on(running, [1, 0, 1, 1])
        with pytest.raises(DivisionByZeroCoordinateError):
            eval_laurent(LaurentPoly.monomial(running.support, (0, -1, 0, 0)), point)


class TestPowerSumsAndResidues:
    """Numeric power sums and total residues against their symbolic values"""

    def test_power_sums(self, running, running_roots):
        for s in [value for value in range(-6, 7) if value != 0]:
            symbolic = power_sum(running, s)
            for roots in running_roots:
                assert relative(power_sum_numeric(roots, s), eval_laurent(symbolic, roots.point)) < EPS

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_power_sums_by_degree(self, d, settings):
        curve = CurveMatrix.normal(d)
        rng = np.random.default_rng(100 + d)
        symbolic = {s: power_sum(curve, s) for s in range(-8, 9) if s != 0}
        for _ in range(10):
            _, roots = sample_point(curve, rng, settings)
            for s, poly in symbolic.items():
                assert relative(power_sum_numeric(roots, s), eval_laurent(poly, roots.point)) < EPS

    @pytest.mark.parametrize("ks, d", [([1], 3), ([2], 3), ([1, 3], 4), ([1, 2, 3], 4), ([2, 3], 5), ([1, 4], 5)])
    def test_euler_jacobi_by_degree(self, ks, d, settings):
        curve = new_curve(ks, d)
        rng = np.random.default_rng(200 + d)
        for _ in range(10):
            _, roots = sample_point(curve, rng, settings)
            for b in range(1, d):
                assert abs(residue_total_numeric(roots, 1, b, settings)) < EPS
            for b in range(d, d + 4):
                expected = eval_laurent(total_residue_symbolic(curve, b), roots.point)
                assert relative(residue_total_numeric(roots, 1, b, settings), expected) < EPS

    def test_cube_roots_of_unity(self, conic, settings):
        roots = find_roots(Point.on(conic, [1, 1, 1]), settings)
        assert abs(power_sum_numeric(roots, 2) + 1) < 1e-12
        assert eval_laurent(power_sum(conic, 2), roots.point) == -1

    def test_euler_jacobi_vanishing(self, running, running_roots, settings):
        for roots in running_roots:
            for b in range(1, running.d):
                assert abs(residue_total_numeric(roots, 1, b, settings)) < EPS
            for b in range(1, 2 * running.d):
                assert abs(residue_total_numeric(roots, 2, b, settings)) < 10 * EPS

    def test_simple_pole_total(self, running, running_roots, settings):
        for roots in running_roots:
            for b in range(running.d, running.d + 4):
                expected = eval_laurent(total_residue_symbolic(running, b), roots.point)
                assert relative(residue_total_numeric(roots, 1, b, settings), expected) < EPS

    def test_parallel_matches_sequential(self, running_roots, settings):
        roots = running_roots[0]
        assert residue_total_numeric(roots, 2, 8, settings, workers=4) == residue_total_numeric(roots, 2, 8, settings)

    def test_calibrated_constant(self, running, running_roots, settings):
        calibrated = calibrate_residue_constant(running, 2, 8, running_roots, settings)
        assert calibrated.consistent
        assert abs(calibrated.mean - 1) < 1e-7
        assert calibrated.to_json()["status"] == "calibrated"

    def test_calibration_needs_reference(self, running, running_roots, settings):
        with pytest.raises(GKZError):
            calibrate_residue_constant(running, 2, 1, running_roots, settings)


class TestPsiRho:
    """The analytic solutions psi_rho"""

    def test_pure_power(self, running, running_roots, settings):
        roots = running_roots[0]
        for j, rho in enumerate(roots.roots):
            assert eval_psi_rho(running, Exponent(0, -3), roots, j, settings) == pytest.approx(rho ** 3 / 3)
            assert eval_psi_rho(running, Exponent(0, 0), roots, j, settings) == pytest.approx(roots.logs[j])

    @pytest.mark.parametrize("alpha", [(1, 2), (0, -1), (-1, -2), (-1, 5), (-2, 3), (-2, -3), (2, 10)])
    def test_sum_is_rational(self, running, running_roots, settings, alpha):
        alpha = Exponent(*alpha)
        symbolic = psi_total(running, alpha)
        for roots in running_roots:
            numeric = psi_total_numeric(running, alpha, roots, settings)
            assert relative(numeric, eval_laurent(symbolic, roots.point)) < 10 * EPS

    @pytest.mark.parametrize("alpha", [(1, 2), (-1, 5), (-2, 3), (2, 10), (-1, 0)])
    def test_sum_subtracts_psi_0(self, running, running_roots, settings, alpha):
        alpha = Exponent(*alpha)
        for roots in running_roots:
            numeric = psi_total_numeric(running, alpha, roots, settings)
            at_d = eval_laurent(psi_d(running, alpha), roots.point)
            at_0 = eval_laurent(psi_0(running, alpha), roots.point)
            assert relative(numeric, at_d - at_0) < 10 * EPS
            if abs(at_0) > 1e-3:
                assert relative(numeric, at_d + at_0) > 1e-3

    def test_derivative_identity(self, running, running_roots, settings):
        for alpha in (Exponent(1, 1), Exponent(1, 2), Exponent(1, -1), Exponent(2, 5)):
            for roots in running_roots:
                for j in range(roots.d):
                    for label in running.support:
                        scale = max(1.0, abs(eval_psi_rho(running, alpha, roots, j, settings)))
                        residual = derivative_identity_check(running, alpha, roots, j, label, settings)
                        assert residual / scale < 1e-7


class TestTau:
    def test_constant_exponent(self, running, running_roots, settings):
        roots = running_roots[0]
        value = eval_tau(running, Exponent(0, 0), roots, 2, 0, settings)
        assert value == pytest.approx(roots.logs[2] - roots.logs[0])

    def test_same_root(self, running, running_roots, settings):
        with pytest.raises(SameRootError):
            eval_tau(running, Exponent(0, 0), running_roots[0], 1, 1, settings)

    def test_exponent_outside_image(self, running, running_roots, settings):
        with pytest.raises(GKZError):
            eval_tau(running, Exponent(1, 2), running_roots[0], 1, 0, settings)

    def test_log_derivative(self, running, running_roots, settings):
        d = running.d
        for roots in running_roots:
            for j in range(1, d):
                analytic = (root_derivative(roots, j, d) / roots.roots[j]
                            - root_derivative(roots, 0, d) / roots.roots[0])
                expected = (eval_psi_rho(running, Exponent(-1, -d), roots, j, settings)
                            - eval_psi_rho(running, Exponent(-1, -d), roots, 0, settings))
                assert relative(analytic, expected) < EPS


class TestChi:
    def test_pure_power(self, running, running_roots, settings):
        roots = running_roots[1]
        expected = sum(rho ** 2 / 2 * log for rho, log in zip(roots.roots, roots.logs))
        assert eval_chi(running, Exponent(0, -2), roots, settings) == pytest.approx(expected)

    @pytest.mark.parametrize("alpha", [(-1, -2), (-1, -1), (-2, -3), (-1, -4), (-1, 0), (0, -1)])
    def test_torus_identity(self, running, running_roots, settings, alpha):
        alpha = Exponent(*alpha)
        for roots in running_roots:
            for angle in (0.4, 1.9, 3.0):
                t = cmath.exp(1j * angle)
                assert torus_residual(running, alpha, roots, t, settings) < 10 * EPS


class TestRank:
    """Numerical rank of basis jets"""

    def test_multi_indices(self):
        assert len(multi_indices(4, 3)) == 35
        assert multi_indices(2, 1) == [(0, 0), (1, 0), (0, 1)]

    def test_numeric_rank(self):
        assert numeric_rank(np.eye(3), 1e-8) == 3
        assert numeric_rank(np.array([[1, 2], [2, 4]]), 1e-8) == 1
        assert numeric_rank(np.zeros((2, 2)), 1e-8) == 0

    @pytest.mark.parametrize("alpha, expected", [((1, 2), 5), ((2, 3), 4), ((-1, -1), 4), ((0, -1), 4)])
    def test_basis_rank(self, running, running_roots, settings, alpha, expected):
        descriptor = basis_descriptor(running, Exponent(*alpha))
        matrix = jet_matrix(running, descriptor, running_roots[:2], settings=settings)
        assert numeric_rank(matrix, settings.rank_threshold) == expected

    def test_all_psi_dependent_in_cone(self, running, running_roots, settings):
        alpha = Exponent(-1, -2)
        descriptor = BasisDescriptor(running, alpha, "J", analytic=[PsiRho(alpha, j) for j in range(4)])
        matrix = jet_matrix(running, descriptor, running_roots[:2], settings=settings)
        assert numeric_rank(matrix, settings.rank_threshold) == 3


class TestSampling:
    def test_reproducible(self, running, settings):
        first = sample_point(running, np.random.default_rng(5), settings)[0]
        second = sample_point(running, np.random.default_rng(5), settings)[0]
        assert first == second

    def test_positive_ends(self, running, settings):
        point, _ = sample_point(running, np.random.default_rng(5), settings, positive_ends=True)
        assert point.coords[0].imag == 0 and point.coords[0].real > 0
        assert point.coords[-1].imag == 0 and point.coords[-1].real > 0
