"""Tests for truncated series arithmetic."""

from fractions import Fraction

import pytest

from germlab.models.series import Series


class TestSeriesArithmetic:
    """Tests for sums and products under truncation."""

    def test_product_drops_terms_above_max_degree(self):
        """Test that multiplication truncates at the k-degree."""
        x = Series.variable(1, 3, 0)

        cube = x * x * x
        fourth = cube * x

        assert cube.coefficient((3,)) == 1
        assert fourth.is_zero()

    def test_parameters_stay_first_order(self):
        """Test that λ-degree two products vanish."""
        lam = Series.parameter(1, 4, 0, 1)
        x = Series.variable(1, 4, 0, nparams=1)

        assert (lam * lam).is_zero()
        assert (lam * x).coefficient((1, 1)) == 1

    def test_sum_cancels_to_zero(self):
        """Test that cancelling terms are removed from the dictionary."""
        x = Series.variable(2, 3, 0, coeff=Fraction(1, 3))

        assert (x - x).terms == {}

    def test_incompatible_shapes(self):
        """Test that series with different variable counts do not add."""
        with pytest.raises(ValueError) as exc_info:
            Series.variable(1, 3, 0) + Series.variable(2, 3, 0)
        assert "incompatible" in str(exc_info.value)


class TestSeriesOperations:
    """Tests for derivative and composition."""

    def test_derivative_lowers_degree(self):
        """Test partial derivatives and the reduced truncation degree."""
        series = Series(2, 4, {(3, 1): 2, (0, 2): 5})

        derivative = series.derivative(0)

        # Verify
        assert derivative.terms == {(2, 1): 6}
        assert derivative.max_degree == 3

    def test_compose_linear_substitution(self):
        """Test substituting x ↦ x + y in x²."""
        square = Series(2, 3, {(2, 0): 1})
        images = [Series(2, 3, {(1, 0): 1, (0, 1): 1}), Series.variable(2, 3, 1)]

        result = square.compose(images)

        assert result.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}

    def test_compose_keeps_parameter_factor(self):
        """Test that λ·x composes to λ·(image of x)."""
        series = Series(1, 3, {(1, 1): 1}, nparams=1)
        image = Series(1, 3, {(1, 0): 2, (2, 0): 1}, nparams=1)

        result = series.compose([image])

        assert result.terms == {(1, 1): 2, (2, 1): 1}

    def test_param_part_and_base(self):
        """Test splitting a deformation series into base and λ parts."""
        series = Series(1, 4, {(4, 0): 1, (2, 1): 3}, nparams=1)

        assert series.base().terms == {(4,): 1}
        assert series.param_part(0).terms == {(2,): 3}
