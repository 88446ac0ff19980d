"""Tests for arguments module."""

from argparse import ArgumentTypeError

import pytest

from germlab.utils.arguments import (
    box_from_text,
    parse_box,
    parse_mode,
    parse_positive_int,
    parse_tolerance,
)


class TestParseBox:
    """Tests for box parsing."""

    def test_valid_box(self):
        """Test parsing two intervals."""
        assert box_from_text("-1:1, 0:0.5") == ((-1.0, 1.0), (0.0, 0.5))

    def test_fixed_parameter(self):
        """Test that lo == hi is accepted."""
        assert box_from_text("0.25:0.25") == ((0.25, 0.25),)

    @pytest.mark.parametrize("text", ["1:0", "-1,1", "a:b", "0:inf"])
    def test_invalid_box(self, text):
        """Test that malformed boxes raise ArgumentTypeError."""
        with pytest.raises(ArgumentTypeError) as exc_info:
            parse_box(text)
        assert "Invalid box" in str(exc_info.value)


class TestParseMode:
    """Tests for parse_mode."""

    def test_valid_modes(self):
        """Test both scalar modes."""
        assert parse_mode("exact") == "exact"
        assert parse_mode("float") == "float"

    def test_invalid_mode(self):
        """Test that other names are rejected."""
        with pytest.raises(ArgumentTypeError) as exc_info:
            parse_mode("double")
        assert "Invalid mode" in str(exc_info.value)


class TestParseNumbers:
    """Tests for tolerance and count flags."""

    def test_tolerance(self):
        """Test a positive tolerance."""
        assert parse_tolerance("1e-9") == 1e-9

    @pytest.mark.parametrize("text", ["0", "-1e-3", "nan", "small"])
    def test_invalid_tolerance(self, text):
        """Test that non-positive or non-numeric tolerances are rejected."""
        with pytest.raises(ArgumentTypeError):
            parse_tolerance(text)

    def test_positive_int(self):
        """Test a positive count."""
        assert parse_positive_int("40") == 40

    @pytest.mark.parametrize("text", ["0", "-3", "2.5"])
    def test_invalid_count(self, text):
        """Test that other counts are rejected."""
        with pytest.raises(ArgumentTypeError) as exc_info:
            parse_positive_int(text)
        assert "Invalid count" in str(exc_info.value)
