"""Tests for DeformationJet."""

from fractions import Fraction

import pytest
import sympy

from germlab.models.deformation import (
    DeformationJet,
    deformation_from_coeffs,
    deformation_from_expression,
)
from germlab.models.errors import DegreeOverflow, ParityViolation, PreconditionViolated
from germlab.models.jet import jet_from_coeffs

K1, K2 = sympy.symbols("k1 k2")
L1, L2 = sympy.symbols("l1 l2")


@pytest.fixture
def cusp_family():
    """k⁴ + λ₁k + λ₂k²."""
    return deformation_from_expression(K1**4 + L1 * K1 + L2 * K1**2, [K1], [L1, L2], 5)


class TestFromExpression:
    """Tests for deformation_from_expression."""

    def test_base_and_mixed(self, cusp_family):
        """Test the base jet and the divided mixed coefficients."""
        assert cusp_family.nparams == 2
        assert cusp_family.base.coefficient((4,)) == 1
        assert cusp_family.mixed == {((1,), 0): 1, ((2,), 1): 1}

    def test_raw_mixed_is_undivided(self, cusp_family):
        """Test ∂³F/∂k²∂λ₂ = 2."""
        assert cusp_family.raw_mixed((2,), 1) == 2
        assert cusp_family.mixed_vector((2,)) == [0, 2]

    def test_pure_parameter_terms_are_dropped(self):
        """Test that λ-only terms do not enter the deformation."""
        defjet = deformation_from_expression(K1**3 + L1 + L1 * K1, [K1], [L1], 4)

        assert defjet.mixed == {((1,), 0): 1}

    def test_odd_term_in_even_family(self):
        """Test that λk is refused in an even family."""
        with pytest.raises(ParityViolation):
            deformation_from_expression(K1**4 + L1 * K1, [K1], [L1], 5, parity="even")

    def test_stray_symbols(self):
        """Test that unknown symbols are reported."""
        with pytest.raises(PreconditionViolated):
            deformation_from_expression(K1**3 + sympy.Symbol("t") * K1, [K1], [L1], 4)

    def test_second_order_parameter_terms(self):
        """Test that λ² terms are truncated away."""
        defjet = deformation_from_expression(K1**3 + L1**2 * K1 + L1 * K1, [K1], [L1], 4)

        assert defjet.mixed == {((1,), 0): 1}


class TestFromCoeffs:
    """Tests for deformation_from_coeffs and the constructor."""

    def test_entries_accumulate(self):
        """Test that repeated entries add up."""
        base = jet_from_coeffs(1, 4, {(3,): 1})

        defjet = deformation_from_coeffs(base, 1, [((1,), 0, 1), ((1,), 0, Fraction(1, 2))])

        assert defjet.mixed[((1,), 0)] == Fraction(3, 2)

    def test_parameter_index_range(self):
        """Test that parameter indices are checked."""
        base = jet_from_coeffs(1, 4, {(3,): 1})

        with pytest.raises(ValueError):
            DeformationJet(base, 1, {((1,), 1): 1})

    def test_degree_overflow(self):
        """Test that mixed terms respect the base degree."""
        base = jet_from_coeffs(1, 3, {(3,): 1})

        with pytest.raises(DegreeOverflow):
            DeformationJet(base, 1, {((4,), 0): 1})

    def test_constant_term_in_even_deformation(self):
        """Test that an even deformation has no λ·1 term."""
        base = jet_from_coeffs(1, 4, {(4,): 1}, parity="even")

        with pytest.raises(ParityViolation):
            DeformationJet(base, 1, {((0,), 0): 1})


class TestTransforms:
    """Tests for reparametrization and the series view."""

    def test_reparametrized(self, cusp_family):
        """Test λ = M·λ' with λ₁ = λ'₁ + λ'₂ and λ₂ = λ'₂."""
        defjet = cusp_family.reparametrized([[1, 1], [0, 1]])

        assert defjet.mixed == {((1,), 0): 1, ((1,), 1): 1, ((2,), 1): 1}

    def test_without_parameter(self, cusp_family):
        """Test that dropping λ₁ renumbers λ₂."""
        defjet = cusp_family.without_parameter(0)

        assert defjet.nparams == 1
        assert defjet.mixed == {((2,), 0): 1}

        with pytest.raises(ValueError):
            cusp_family.without_parameter(2)

    def test_series_round_trip(self, cusp_family):
        """Test the (k, λ) series and its inverse."""
        series = cusp_family.to_series()

        assert series.coefficient((2, 0, 1)) == 1
        assert DeformationJet.from_series(series).mixed == cusp_family.mixed

    def test_to_float(self, cusp_family):
        """Test the float copy."""
        defjet = cusp_family.to_float()

        assert defjet.mode == "float"
        assert isinstance(defjet.base.coefficient((4,)), float)

    def test_two_variable_family(self):
        """Test the mixed coefficient of λ₁k₁k₂."""
        defjet = deformation_from_expression(
            K1**2 * K2 + K2**4 + L1 * K1 * K2 + L2 * K2, [K1, K2], [L1, L2], 5
        )

        assert defjet.nu == 2
        assert defjet.raw_mixed((1, 1), 0) == 1
        assert defjet.raw_mixed((0, 1), 1) == 1
