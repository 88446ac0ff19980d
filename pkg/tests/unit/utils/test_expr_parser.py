"""Tests for the expression parser."""

from argparse import ArgumentTypeError
from fractions import Fraction

import pytest
import sympy

from germlab.models.errors import ExpressionSyntaxError, UnknownSymbol
from germlab.utils.expr_parser import expression_arg, parse_expression


class TestParseExpression:
    """Tests for parse_expression."""

    def test_variables_and_parameters(self):
        """Test the k and l symbol sets."""
        ast = parse_expression("k1^4 + l1*k1^2 + l2*k1")

        assert ast.variables == ["k1"]
        assert ast.parameters == ["l1", "l2"]
        assert ast.nu == 1
        assert ast.nparams == 2

    def test_largest_index_counts(self):
        """Test that k3 alone means three variables."""
        assert parse_expression("k3^2").nu == 3

    def test_decimals_stay_exact(self):
        """Test that 0.1 becomes 1/10."""
        expr = parse_expression("0.1*k1^2").to_sympy()

        assert expr == sympy.Rational(1, 10) * sympy.Symbol("k1") ** 2

    def test_double_star_power(self):
        """Test that ** is read as ^."""
        assert parse_expression("k1**3") == parse_expression("k1^3")

    def test_constant_division(self):
        """Test division by a constant."""
        expr = parse_expression("k1^2/4").to_sympy()

        assert expr == sympy.Symbol("k1") ** 2 / 4

    def test_canonical_text(self):
        """Test that the canonical text parses back to the same tree."""
        ast = parse_expression("-(k1 - k2)^2 + 0.25*k1*k2")
        text = ast.to_text()

        assert parse_expression(text) == ast
        assert "0.25" in text

    def test_bytes_input(self):
        """Test UTF-8 input."""
        assert parse_expression(b"k1^2").nu == 1


class TestSyntaxErrors:
    """Tests for rejected input."""

    def test_implicit_multiplication(self):
        """Test that 2k1 is refused."""
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            parse_expression("2k1^2")
        assert "implicit multiplication" in str(exc_info.value)
        assert exc_info.value.offset == 1

    def test_unknown_symbol(self):
        """Test that x is not a variable."""
        with pytest.raises(UnknownSymbol) as exc_info:
            parse_expression("k1^2 + x")
        assert exc_info.value.offset == 7

    @pytest.mark.parametrize(
        "text",
        ["", "k1^2 +", "k1/k2", "k1/0", "k1^2^2", "k1^-2", "(k1 + k2", "k1 $ k2"],
    )
    def test_malformed(self, text):
        """Test typical malformed expressions."""
        with pytest.raises(ExpressionSyntaxError):
            parse_expression(text)

    def test_byte_offsets(self):
        """Test that offsets count UTF-8 bytes."""
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            parse_expression("λ")
        assert exc_info.value.offset == 0

    def test_argparse_type(self):
        """Test that argparse sees ArgumentTypeError."""
        assert expression_arg("k1^3").to_sympy() == sympy.Symbol("k1") ** 3
        with pytest.raises(ArgumentTypeError):
            expression_arg("k1 +")
        assert Fraction(1, 2) == parse_expression("0.5").root.value
