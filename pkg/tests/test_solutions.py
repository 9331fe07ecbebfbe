"""Test the rational solutions Phi, Psi_0, Psi_d and the power sums"""
from fractions import Fraction

import numpy as np
import pytest
import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from constants import TAG_E_BOTH, TAG_ED_ONLY, TAG_IN_I, TAG_J
from curve_data import CurveMatrix, Exponent, dualize, kernel_vectors, new_curve
from errors import ExponentInIError, GKZError, ZeroPowerError
from laurent import (
    LaurentPoly,
    apply_box,
    apply_euler,
    evaluate_exact,
    multi_derivative,
    substitute_dual,
)
from semigroup import in_I
from solutions import (
    Chi,
    DISTINGUISHED_ROOT,
    LaurentPart,
    PsiRho,
    TauRho,
    basis_descriptor,
    convolution_psi_0,
    convolution_psi_d,
    newton_power_sum,
    phi,
    power_sum,
    psi_0,
    psi_d,
    psi_total,
    total_residue_symbolic,
)


# Curves for the randomized derivative and convolution laws
LAW_CURVES = [([1, 3], 4), ([1, 4], 5), ([2, 3], 5), ([2, 5], 7)]


@pytest.fixture
def running():
    return new_curve([1, 3], 4)


@pytest.fixture
def fourteen():
    return new_curve([6, 7, 13], 14)


@pytest.fixture
def conic():
    return new_curve([1], 2)


def mono(curve, exponents, coefficient=1):
    return LaurentPoly.monomial(curve.support, exponents, coefficient)


def is_solution(p, alpha, vectors):
    first, second = apply_euler(p, alpha)
    return first.is_zero() and second.is_zero() and all(apply_box(p, v).is_zero() for v in vectors)


class TestPhi:
    """Polynomial solutions"""

    def test_monomial_solution(self, running):
        assert phi(running, Exponent(2, 3)) == mono(running, (1, 0, 1, 0))

    def test_outside_image(self, running):
        assert phi(running, Exponent(1, 2)).is_zero()

    def test_two_terms(self, running):
        expected = mono(running, (1, 0, 0, 1)) + mono(running, (0, 1, 1, 0))
        assert phi(running, Exponent(2, 4)) == expected

    def test_factorial_coefficients(self, running):
        assert phi(running, Exponent(3, 0)) == mono(running, (3, 0, 0, 0), Fraction(1, 6))

    def test_is_solution(self, running):
        vectors = kernel_vectors(running, 4)
        for a1 in range(0, 4):
            for a2 in range(0, 4 * a1 + 1):
                alpha = Exponent(a1, a2)
                if in_I(running, alpha) is not None:
                    assert not phi(running, alpha).is_zero()
                    assert is_solution(phi(running, alpha), alpha, vectors)

    def test_derivative_law(self, running):
        for alpha in (Exponent(3, 6), Exponent(2, 4), Exponent(3, 9)):
            for u in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0), (0, 2, 0, 1)):
                shifted = alpha - running.apply(u)
                assert multi_derivative(phi(running, alpha), u) == phi(running, shifted)


class TestLaurentSolutions:
    """Psi_0 and Psi_d"""

    def test_running_example(self, running):
        assert psi_0(running, Exponent(1, 2)) == mono(running, (-1, 2, 0, 0), Fraction(-1, 2))
        assert psi_d(running, Exponent(1, 2)) == mono(running, (0, 0, 2, -1), Fraction(-1, 2))

    def test_running_example_beta(self, running):
        assert psi_0(running, Exponent(2, 3)) == mono(running, (-1, 3, 0, 0), Fraction(-1, 6))
        # The r = 3 term comes from Phi^B((5, 15)) = x3^5 / 5!
        expected = mono(running, (0, 1, 2, -1), Fraction(-1, 2)) + mono(running, (0, 0, 5, -3), Fraction(-1, 60))
        assert psi_d(running, Exponent(2, 3)) == expected

    def test_fourteen(self, fourteen):
        assert psi_0(fourteen, Exponent(2, 18)) == mono(fourteen, (-1, 3, 0, 0, 0), Fraction(-1, 6))
        expected = (
            mono(fourteen, (0, 1, 0, 2, -1), Fraction(-1, 2))
            + mono(fourteen, (0, 0, 1, 3, -2), Fraction(1, 6))
            + mono(fourteen, (0, 0, 0, 10, -8), Fraction(1, 720))
        )
        assert psi_d(fourteen, Exponent(2, 18)) == expected

    def test_fourteen_needs_top_term(self, fourteen):
        alpha = Exponent(2, 18)
        vectors = kernel_vectors(fourteen, 2 * fourteen.d)
        assert is_solution(psi_d(fourteen, alpha), alpha, vectors)
        assert is_solution(psi_0(fourteen, alpha), alpha, vectors)

        truncated = (
            mono(fourteen, (0, 1, 0, 2, -1), Fraction(-1, 2))
            + mono(fourteen, (0, 0, 1, 3, -2), Fraction(1, 6))
        )
        first, second = apply_euler(truncated, alpha)
        assert first.is_zero() and second.is_zero()
        assert any(not apply_box(truncated, v).is_zero() for v in vectors)

    def test_vanishing_conditions(self, running, fourteen):
        for curve in (running, fourteen):
            assert psi_d(curve, Exponent(0, 1)).is_zero()
            assert psi_0(curve, Exponent(0, -1)).is_zero()

    def test_psi_total(self, running, conic):
        expected = mono(running, (-1, 2, 0, 0), Fraction(1, 2)) + mono(running, (0, 0, 2, -1), Fraction(-1, 2))
        assert psi_total(running, Exponent(1, 2)) == expected
        assert psi_total(running, Exponent(-1, -2)).is_zero()
        assert psi_total(conic, Exponent(0, -1)) == psi_d(conic, Exponent(0, -1))

    def test_psi_total_rejects_image(self, running):
        with pytest.raises(ExponentInIError):
            psi_total(running, Exponent(2, 3))

    def test_hypergeometric_outside_image(self, running):
        vectors = kernel_vectors(running, 4)
        for a1 in range(-2, 3):
            for a2 in range(-6, 10):
                alpha = Exponent(a1, a2)
                if in_I(running, alpha) is None:
                    assert is_solution(psi_0(running, alpha), alpha, vectors)
                    assert is_solution(psi_d(running, alpha), alpha, vectors)

    def test_not_hypergeometric_on_image(self, running):
        p = psi_d(running, Exponent(2, 3))
        assert not p.is_zero()
        assert any(not apply_box(p, v).is_zero() for v in kernel_vectors(running, 4))

    def test_derivative_law(self, running):
        units = [running.unit(label) for label in running.support]
        for alpha in (Exponent(1, 2), Exponent(0, -3), Exponent(-1, -2), Exponent(2, 10)):
            assert in_I(running, alpha) is None
            for u in units + [(1, 0, 0, 1), (0, 2, 1, 0)]:
                shifted = alpha - running.apply(u)
                assert multi_derivative(psi_d(running, alpha), u) == psi_d(running, shifted)
                assert multi_derivative(psi_0(running, alpha), u) == psi_0(running, shifted)

    def test_duality(self):
        for curve in (new_curve([1, 3], 5), new_curve([6, 7, 13], 14), new_curve([2, 3], 7)):
            dual, hat = dualize(curve)
            for alpha in (Exponent(1, 2), Exponent(2, 18), Exponent(0, -2), Exponent(-1, 3)):
                transformed = substitute_dual(psi_d(curve, alpha))
                assert transformed == psi_0(dual, hat(alpha))

    def test_convolutions(self, running, fourteen):
        assert convolution_psi_0(running, Exponent(1, 2)) == psi_0(running, Exponent(1, 2))
        assert convolution_psi_d(running, Exponent(1, 2)) == psi_d(running, Exponent(1, 2))
        assert convolution_psi_0(fourteen, Exponent(2, 18)) == psi_0(fourteen, Exponent(2, 18))
        assert convolution_psi_d(fourteen, Exponent(2, 18)) == psi_d(fourteen, Exponent(2, 18))

    @pytest.mark.parametrize("ks, d", LAW_CURVES)
    def test_random_derivative_laws(self, ks, d):
        curve = new_curve(ks, d)
        rng = np.random.default_rng(d * 31 + len(ks))
        checked = 0
        while checked < 50:
            alpha = Exponent(int(rng.integers(-2, 4)), int(rng.integers(-2 * d, 3 * d + 1)))
            u = tuple(int(value) for value in rng.integers(0, 3, size=len(curve.support)))
            shifted = alpha - curve.apply(u)
            assert multi_derivative(phi(curve, alpha), u) == phi(curve, shifted)
            if in_I(curve, alpha) is None:
                assert multi_derivative(psi_d(curve, alpha), u) == psi_d(curve, shifted)
                assert multi_derivative(psi_0(curve, alpha), u) == psi_0(curve, shifted)
                checked += 1

    @pytest.mark.parametrize("a1, count", [(1, 6), (2, 7), (3, 7)])
    def test_random_convolutions(self, a1, count):
        rng = np.random.default_rng(9 + a1)
        candidates = [
            (ks, d, Exponent(a1, a2))
            for ks, d in LAW_CURVES
            for a2 in range(-1, d * a1 + 2)
            if in_I(new_curve(ks, d), Exponent(a1, a2)) is None
        ]
        for i in rng.choice(len(candidates), size=count, replace=False):
            ks, d, alpha = candidates[i]
            curve = new_curve(ks, d)
            assert convolution_psi_0(curve, alpha) == psi_0(curve, alpha)
            assert convolution_psi_d(curve, alpha) == psi_d(curve, alpha)

    def test_convolution_preconditions(self, running):
        with pytest.raises(GKZError):
            convolution_psi_0(running, Exponent(0, -1))
        with pytest.raises(ExponentInIError):
            convolution_psi_d(running, Exponent(2, 3))


class TestPowerSums:
    """Power sums of the roots as Laurent polynomials"""

    def test_conic(self, conic):
        assert power_sum(conic, 1) == mono(conic, (0, 1, -1), -1)
        assert power_sum(conic, 2) == mono(conic, (0, 2, -2)) - mono(conic, (1, 0, -1), 2)

    def test_inverse_roots(self, conic):
        # sum 1/rho = -x1/x0 for x0 + x1 t + x2 t^2
        assert power_sum(conic, -1) == mono(conic, (-1, 1, 0), -1)

    def test_zero_power(self, conic):
        with pytest.raises(ZeroPowerError):
            power_sum(conic, 0)
        with pytest.raises(ZeroPowerError):
            newton_power_sum(2, 0)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_newton_identities(self, d):
        curve = CurveMatrix.normal(d)
        for s in range(1, 11):
            assert power_sum(curve, s) == newton_power_sum(d, s)
            assert power_sum(curve, -s) == newton_power_sum(d, -s)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_specialization(self, d):
        # t^d + t^(d-1) has roots 0 (d-1 times) and -1
        curve = CurveMatrix.normal(d)
        values = {label: 0 for label in curve.support}
        values[d - 1] = 1
        values[d] = 1
        for s in range(1, 8):
            assert evaluate_exact(power_sum(curve, s), values) == (-1) ** s

    def test_vanishing_matches_power_sum(self):
        for curve in (new_curve([1, 2], 4), new_curve([1, 3], 4), new_curve([2, 3], 6)):
            for a1 in range(-2, 3):
                for a2 in range(-6, 12):
                    alpha = Exponent(a1, a2)
                    s = alpha.s(curve.d)
                    if s <= 0 or in_I(curve, alpha) is not None:
                        continue
                    assert psi_d(curve, alpha).is_zero() == power_sum(curve, s).is_zero()


class TestTotalResidue:
    def test_below_degree(self, conic, running):
        assert total_residue_symbolic(conic, 1).is_zero()
        assert total_residue_symbolic(running, 3).is_zero()

    def test_at_degree(self, conic):
        assert total_residue_symbolic(conic, 2) == mono(conic, (0, 0, -1))

    def test_positive_b_required(self, conic):
        with pytest.raises(GKZError):
            total_residue_symbolic(conic, 0)


class TestBasisDescriptor:
    """Named bases for each scenario"""

    def test_image_point(self, running):
        descriptor = basis_descriptor(running, Exponent(2, 3))
        assert descriptor.scenario == TAG_IN_I
        assert len(descriptor) == 4
        assert descriptor.symbolic == [LaurentPart("Phi", mono(running, (1, 0, 1, 0)))]
        assert all(isinstance(member, TauRho) for member in descriptor.analytic)
        assert DISTINGUISHED_ROOT not in [member.j for member in descriptor.analytic]

    def test_e_set_point(self, running):
        descriptor = basis_descriptor(running, Exponent(1, 2))
        assert descriptor.scenario == TAG_E_BOTH
        assert len(descriptor) == 5
        assert [member.name for member in descriptor.members] == ["Psi_0", "psi_1", "psi_2", "psi_3", "psi_4"]

    def test_euler_jacobi_point(self, running):
        descriptor = basis_descriptor(running, Exponent(-1, -2))
        assert descriptor.scenario == TAG_J
        assert len(descriptor) == 4
        assert isinstance(descriptor.analytic[-1], Chi)
        assert not descriptor.symbolic

    def test_one_sided_point(self, running):
        descriptor = basis_descriptor(running, Exponent(0, -1))
        assert descriptor.scenario == TAG_ED_ONLY
        assert descriptor.analytic == [PsiRho(Exponent(0, -1), j) for j in range(4)]

    def test_to_json(self, running):
        data = basis_descriptor(running, Exponent(2, 3)).to_json()
        assert data["count"] == 4
        assert data["members"][0]["kind"] == "laurent"
        assert data["members"][0]["text"] == "x0 * x3"
        assert data["members"][1]["distinguished_root"] == DISTINGUISHED_ROOT
